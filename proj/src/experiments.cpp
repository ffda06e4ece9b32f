#include "gsp/experiments.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "gsp/approx_inverse.hpp"
#include "gsp/distsim.hpp"
#include "gsp/errors.hpp"
#include "gsp/graph.hpp"
#include "gsp/signals.hpp"

namespace gsp {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::uint64_t parse_unsigned(const std::string& text, const std::string& what) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw validation_error(what + ": expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

MeanStderr summarize(const std::vector<double>& v) {
  MeanStderr s;
  if (v.empty()) return s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.stderr_ = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  }
  return s;
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

// Family labels contain commas.
std::string quoted(const std::string& s) { return '"' + s + '"'; }

// Rows of the table label Chebyshev interpolation by its table name.
std::string table_family(const ApproxSpec& s) { return s.kind == ApproxKind::cipa ? "ChebyInt" : s.family(); }

}  // namespace

// ---- graph / shift / problem configuration ----------------------------------

GraphSpec GraphSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  GraphSpec spec;
  if (kind == "file" && colon != std::string::npos) {
    spec.kind = Kind::file;
    spec.path = text.substr(colon + 1);
    if (spec.path.empty()) throw validation_error("graph spec '" + text + "': empty path");
    return spec;
  }
  const auto parts = split(text, ':');
  if (kind == "circulant" && parts.size() == 3) {
    spec.kind = Kind::circulant;
    spec.n = parse_unsigned(parts[1], "graph spec n");
    for (const auto& q : split(parts[2], ',')) spec.q_set.push_back(parse_unsigned(q, "graph spec offset"));
    return spec;
  }
  if (kind == "rgg" && parts.size() == 3) {
    spec.kind = Kind::random_geometric;
    spec.n = parse_unsigned(parts[1], "graph spec n");
    spec.seed = parse_unsigned(parts[2], "graph spec seed");
    return spec;
  }
  throw validation_error("graph spec '" + text + "': expected circulant:<n>:<q,...>, rgg:<n>:<seed> or file:<path>");
}

BuiltGraph build_graph(const GraphSpec& spec) {
  BuiltGraph out;
  switch (spec.kind) {
    case GraphSpec::Kind::circulant:
      out.graph = build_circulant(spec.n, spec.q_set);
      break;
    case GraphSpec::Kind::random_geometric: {
      GeometricGraph g = build_random_geometric_no_isolated(spec.n, spec.seed, &out.seed);
      out.graph = std::move(g.graph);
      out.coords = std::move(g.coords);
      break;
    }
    case GraphSpec::Kind::file:
      out.graph = read_edge_list_file(spec.path);
      break;
  }
  return out;
}

std::vector<Shift> build_shifts(const BuiltGraph& g, const GraphSpec& spec, const std::string& shift) {
  if (shift == "lsym") return {normalized_laplacian(g.graph)};
  if (shift == "laplacian") return {laplacian(g.graph)};
  if (shift == "adjacency") return {adjacency(g.graph)};
  if (shift == "offsets") {
    if (spec.kind != GraphSpec::Kind::circulant) throw validation_error("shift 'offsets' needs a circulant graph");
    std::vector<Shift> out;
    for (std::size_t q : spec.q_set) out.push_back(circulant_offset_adjacency(g.graph, q));
    return out;
  }
  throw validation_error("unknown shift '" + shift + "' (lsym, laplacian, adjacency, offsets)");
}

ProblemSetup load_problem(const KeyValueConfig& cfg) {
  const auto graph_text = cfg.get("graph");
  if (!graph_text) throw validation_error(cfg.source() + ": missing key 'graph'");
  const GraphSpec spec = GraphSpec::parse(*graph_text);
  BuiltGraph graph = build_graph(spec);
  const auto shifts = build_shifts(graph, spec, cfg.get_or("shift", "lsym"));
  const auto spectrum = joint_spectrum(shifts, static_cast<std::uint64_t>(cfg.get_int("spectrum_seed", 0)));
  const std::size_t d = shifts.size();

  auto poly = [&](const std::string& key, double fallback) {
    const auto text = cfg.get(key);
    if (!text) return MultiPoly::constant(d, fallback);
    MultiPoly p = parse_poly(*text);
    if (p.dim() != d) {
      std::ostringstream os;
      os << cfg.source() << ": key '" << key << "' has dimension " << p.dim() << ", shifts have " << d;
      throw validation_error(os.str());
    }
    return p;
  };

  WienerProblem prob =
      WienerProblem::make(spectrum, poly("h", 1.0), poly("r", 1.0), poly("g", 0.0), poly("k", 0.0));
  const std::string p = cfg.get_or("p", "uniform");
  if (p != "uniform") {
    const Signal pv = read_signal_file(p);
    if (static_cast<std::size_t>(pv.size()) != prob.order()) {
      throw validation_error(cfg.source() + ": probability file '" + p + "' has the wrong length");
    }
    prob.p = pv;
  }
  if (cfg.has("delta0")) prob.delta0 = cfg.get_double("delta0", 1.0);

  WienerConfig config;
  if (const auto s = cfg.get("solver")) config.solver = ApproxSpec::parse(*s);
  config.inverse_iterations = static_cast<int>(cfg.get_int("iters", config.inverse_iterations));
  config.inverse_rtol = cfg.get_double("rtol", config.inverse_rtol);
  if (config.inverse_iterations < 0) throw validation_error(cfg.source() + ": iters must be >= 0");
  return {std::move(graph), std::move(prob), config};
}

// ---- approximation error table -------------------------------------------------

std::vector<ApproxSpec> reference_families() {
  return {ApproxSpec::jpa(-0.5, -0.5, 0), ApproxSpec::jpa(0.5, 0.5, 0),  ApproxSpec::jpa(0.0, 0.0, 0),
          ApproxSpec::jpa(1.0, 1.0, 0),   ApproxSpec::jpa(-0.5, 0.5, 0), ApproxSpec::jpa(0.5, -0.5, 0),
          ApproxSpec::jpa(0.0, -0.5, 0),  ApproxSpec::cipa(0)};
}

MultiPoly reference_h1() { return MultiPoly::univariate({6.75, -0.75, -1.0}); }

std::vector<ApproxErrorRow> approx_error_table(const MultiPoly& h, const Cube& cube,
                                               const std::vector<ApproxSpec>& families, int max_degree,
                                               std::size_t density) {
  if (max_degree < 0) throw validation_error("approx-error: max degree must be >= 0");
  std::vector<ApproxErrorRow> rows;
  for (const auto& fam : families) {
    const auto curve = error_curve(h, cube, fam, max_degree, density);
    for (int m = 0; m <= max_degree; ++m) rows.push_back({table_family(fam), m, curve[m]});
  }
  return rows;
}

std::vector<CurveSample> approx_error_curves(const MultiPoly& h, const Cube& cube,
                                             const std::vector<ApproxSpec>& families, int max_degree,
                                             std::size_t points) {
  if (cube.dim() != 1) throw validation_error("approx-error curves need a univariate filter");
  if (points < 2) throw validation_error("approx-error curves need at least 2 points");
  std::vector<CurveSample> out;
  for (const auto& fam : families) {
    if (fam.kind == ApproxKind::gd0) throw validation_error("approx-error: GD0 has no approximation degree");
    for (int m = 0; m <= max_degree; ++m) {
      ApproxSpec s = fam;
      s.degree = m;
      const MultiPoly g = build_approximant(s, h, cube);
      for (std::size_t j = 0; j < points; ++j) {
        const double t = cube.lower[0] + cube.width(0) * static_cast<double>(j) / static_cast<double>(points - 1);
        out.push_back({table_family(fam), m, t, 1.0 - h(t) * g(t)});
      }
    }
  }
  return out;
}

void write_approx_error_csv(std::ostream& out, const std::vector<ApproxErrorRow>& rows) {
  out << "# schema=v1\nfamily,M,b_M\n";
  for (const auto& r : rows) out << quoted(r.family) << ',' << r.degree << ',' << num(r.error) << '\n';
}

void write_curve_csv(std::ostream& out, const std::vector<CurveSample>& rows) {
  out << "# schema=v1\nfamily,M,t,value\n";
  for (const auto& r : rows) out << quoted(r.family) << ',' << r.degree << ',' << num(r.t) << ',' << num(r.value) << '\n';
}

// ---- inverse filtering benchmark ---------------------------------------------------

std::vector<ApproxSpec> reference_bench_solvers() {
  std::vector<ApproxSpec> out;
  for (int m = 0; m <= 3; ++m) {
    out.push_back(ApproxSpec::jpa(-0.5, -0.5, m));
    out.push_back(ApproxSpec::jpa(0.5, 0.5, m));
    out.push_back(ApproxSpec::jpa(0.5, -0.5, m));
    out.push_back(ApproxSpec::jpa(0.0, -0.5, m));
    out.push_back(ApproxSpec::cipa(m));
    if (m == 0) out.push_back(ApproxSpec::gd0());
  }
  return out;
}

std::vector<double> inverse_errors(const PolyFilter& h, const PolyFilter& g, const Signal& x, int iterations,
                                   bool distributed) {
  const Signal y = h.apply(x);
  const double xn = x.norm();
  if (xn == 0.0) throw validation_error("inverse bench: zero signal");
  std::vector<double> err;
  err.reserve(iterations);
  auto observe = [&](int, const Signal& xm) { err.push_back((xm - x).norm() / xn); };
  if (distributed) {
    distsim::run_inverse(h, g, y, iterations, {}, observe);
  } else {
    const LinearMap hm = [&](const Signal& v, ApplyStats& st) { return h.apply(v, &st); };
    const LinearMap gm = [&](const Signal& v, ApplyStats& st) { return g.apply(v, &st); };
    SolveOptions opts;
    opts.max_iterations = iterations;
    opts.rtol = 0.0;
    opts.observer = observe;
    quasi_newton_solve(hm, gm, y, opts);
  }
  if (static_cast<int>(err.size()) != iterations) throw numerical_error("inverse bench: iteration stopped early");
  return err;
}

std::vector<InverseBenchRow> inverse_bench(const InverseBenchConfig& config) {
  if (config.trials < 1) throw validation_error("inverse bench: trials must be >= 1");
  if (config.iterations < 1) throw validation_error("inverse bench: iterations must be >= 1");
  const auto graph = build_circulant(config.n, config.q_set);
  const auto spectrum = joint_spectrum({normalized_laplacian(graph)});
  const PolyFilter h(spectrum, config.h);
  const auto solvers = config.solvers.empty() ? reference_bench_solvers() : config.solvers;

  // Signals are shared by all solvers: trial t draws from seed + t.
  std::vector<Signal> signals;
  signals.reserve(config.trials);
  for (int t = 0; t < config.trials; ++t) {
    std::mt19937_64 rng(config.seed + static_cast<std::uint64_t>(t));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Signal x(config.n);
    for (auto& v : x) v = u(rng);
    signals.push_back(std::move(x));
  }

  std::vector<InverseBenchRow> rows;
  for (const auto& s : solvers) {
    const PolyFilter g = inverse_filter(h, s);
    std::vector<std::vector<double>> per_m(config.iterations);
    for (const auto& x : signals) {
      const auto e = inverse_errors(h, g, x, config.iterations, config.distributed);
      for (int m = 0; m < config.iterations; ++m) per_m[m].push_back(e[m]);
    }
    const std::size_t per_iter_rounds = h.rounds() + g.rounds();
    const std::size_t per_iter_matvecs = per_iter_rounds;
    for (int m = 1; m <= config.iterations; ++m) {
      const auto st = summarize(per_m[m - 1]);
      rows.push_back({s.to_string(), s.family(), s.kind == ApproxKind::gd0 ? 0 : s.degree, m, st.mean, st.stderr_,
                      per_iter_matvecs * m, per_iter_rounds * m});
    }
  }
  return rows;
}

void write_inverse_bench_csv(std::ostream& out, const std::vector<InverseBenchRow>& rows) {
  out << "# schema=v1\nsolver,family,M,m,mean_E,stderr_E,matvecs,rounds\n";
  for (const auto& r : rows) {
    out << r.solver << ',' << quoted(r.family) << ',' << r.degree << ',' << r.m << ',' << num(r.mean_error) << ','
        << num(r.stderr_error) << ',' << r.matvecs << ',' << r.rounds << '\n';
  }
}

// ---- denoising ---------------------------------------------------------------------

DenoiseModel parse_denoise_model(const std::string& text) {
  if (text == "stationary") return DenoiseModel::stationary;
  if (text == "four-strip") return DenoiseModel::four_strip;
  if (text == "wideband") return DenoiseModel::wideband;
  throw validation_error("unknown denoise model '" + text + "' (stationary, four-strip, wideband)");
}

std::string to_string(DenoiseModel m) {
  switch (m) {
    case DenoiseModel::stationary:
      return "stationary";
    case DenoiseModel::four_strip:
      return "four-strip";
    case DenoiseModel::wideband:
      return "wideband";
  }
  return {};
}

std::vector<DenoiseRow> denoise(const DenoiseConfig& config) {
  if (config.trials < 1) throw validation_error("denoise: trials must be >= 1");
  if (config.epsilons.empty()) throw validation_error("denoise: empty noise grid");
  for (double e : config.epsilons) {
    if (!(e > 0.0)) throw validation_error("denoise: noise levels must be positive");
  }
  const GeometricGraph gg = build_random_geometric_no_isolated(config.n, config.graph_seed);
  const auto spectrum = joint_spectrum({normalized_laplacian(gg.graph)});
  const double n = static_cast<double>(config.n);
  const MultiPoly t = MultiPoly::coordinate(1, 0);
  const MultiPoly one = MultiPoly::constant(1, 1.0);
  const MultiPoly r = one + 0.5 * t;

  const bool wide = config.model == DenoiseModel::wideband;
  const std::vector<double> means = wide ? config.means : std::vector<double>{0.0};
  const Signal strip = config.model == DenoiseModel::four_strip ? four_strip(gg.coords) : Signal();

  WienerConfig wcfg = config.wiener;
  if (wide) wcfg.enforce_wideband_invariants = false;

  std::vector<DenoiseRow> rows;
  for (std::size_t ci = 0; ci < means.size(); ++ci) {
    const double c = means[ci];
    const StationaryModel signal_model(PolyFilter(spectrum, r), c);
    for (std::size_t ei = 0; ei < config.epsilons.size(); ++ei) {
      const double eps2 = config.epsilons[ei] * config.epsilons[ei];
      const MultiPoly g = wide ? eps2 * t : MultiPoly::constant(1, eps2);
      const NoiseModel noise_model(PolyFilter(spectrum, g));
      const WienerProblem reg = WienerProblem::make(spectrum, one, r, g, (eps2 / (4.0 * n)) * t);
      const WienerProblem tik = WienerProblem::make(spectrum, one, r, g, (eps2 / (2.0 * n)) * t);

      std::vector<double> isnr_v, snr0, snr_reg, snr_tik;
      for (int trial = 0; trial < config.trials; ++trial) {
        std::seed_seq seq{config.seed + static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(ei),
                          static_cast<std::uint64_t>(ci)};
        std::mt19937_64 rng(seq);
        const Signal x = config.model == DenoiseModel::four_strip ? strip : signal_model.sample(rng);
        const Signal e = noise_model.sample(rng);
        const Signal y = x + e;
        isnr_v.push_back(isnr(x, e));
        snr0.push_back(snr(x, wiener0_apply(reg, y, wcfg).x));
        snr_reg.push_back(snr(x, (wide ? wideband_wiener_apply(reg, y, wcfg) : wiener_mse_apply(reg, y, wcfg)).x));
        snr_tik.push_back(snr(x, tikhonov_apply(tik, y, wcfg).x));
      }
      const double mean_isnr = summarize(isnr_v).mean;
      auto add = [&](const std::string& method, const std::vector<double>& v) {
        const auto st = summarize(v);
        rows.push_back({to_string(config.model), c, config.epsilons[ei], method, mean_isnr, st.mean, st.stderr_});
      };
      add("wiener0", snr0);
      add("wiener-reg", snr_reg);
      add("tikhonov", snr_tik);
    }
  }
  return rows;
}

void write_denoise_csv(std::ostream& out, const std::vector<DenoiseRow>& rows) {
  out << "# schema=v1\nmodel,mean,epsilon,method,mean_isnr,mean_snr,stderr_snr\n";
  for (const auto& r : rows) {
    out << r.model << ',' << num(r.mean) << ',' << num(r.epsilon) << ',' << r.method << ',' << num(r.mean_isnr)
        << ',' << num(r.mean_snr) << ',' << num(r.stderr_snr) << '\n';
  }
}

}  // namespace gsp
