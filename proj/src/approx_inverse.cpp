#include "gsp/approx_inverse.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace gsp {

ApproxSpec ApproxSpec::jpa(double alpha, double beta, int degree) {
  (void)JacobiBasis(alpha, beta);
  if (degree < 0) throw validation_error("approximation degree must be nonnegative");
  return {ApproxKind::jpa, alpha, beta, degree};
}

ApproxSpec ApproxSpec::cipa(int degree) {
  if (degree < 0) throw validation_error("approximation degree must be nonnegative");
  return {ApproxKind::cipa, -0.5, -0.5, degree};
}

ApproxSpec ApproxSpec::gd0() { return {ApproxKind::gd0, 0.0, 0.0, 0}; }

namespace {

double parse_double(std::string_view s, std::string_view ctx) {
  std::istringstream in{std::string(s)};
  double v = 0.0;
  in >> v;
  if (in.fail() || !in.eof()) throw validation_error("solver spec '" + std::string(ctx) + "': bad number '" + std::string(s) + "'");
  return v;
}

int parse_int(std::string_view s, std::string_view ctx) {
  const double v = parse_double(s, ctx);
  if (v != std::floor(v) || v < 0 || v > 1e6) {
    throw validation_error("solver spec '" + std::string(ctx) + "': degree must be a nonnegative integer");
  }
  return static_cast<int>(v);
}

std::string fmt_param(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

}  // namespace

ApproxSpec ApproxSpec::parse(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = text.find(':', start);
    parts.push_back(text.substr(start, colon == text.npos ? text.npos : colon - start));
    if (colon == text.npos) break;
    start = colon + 1;
  }
  const std::string_view kind = parts[0];
  if (kind == "jpa" && parts.size() == 4) {
    return jpa(parse_double(parts[1], text), parse_double(parts[2], text), parse_int(parts[3], text));
  }
  if (kind == "cipa" && parts.size() == 2) return cipa(parse_int(parts[1], text));
  if (kind == "gd0" && parts.size() == 1) return gd0();
  throw validation_error("solver spec '" + std::string(text) + "': expected jpa:<alpha>:<beta>:<M>, cipa:<M> or gd0");
}

std::string ApproxSpec::family() const {
  switch (kind) {
    case ApproxKind::jpa:
      return "JPA(" + fmt_param(alpha) + "," + fmt_param(beta) + ")";
    case ApproxKind::cipa:
      return "CIPA";
    case ApproxKind::gd0:
      return "GD0";
  }
  return {};
}

std::string ApproxSpec::to_string() const {
  switch (kind) {
    case ApproxKind::jpa:
      return "jpa:" + fmt_param(alpha) + ":" + fmt_param(beta) + ":" + std::to_string(degree);
    case ApproxKind::cipa:
      return "cipa:" + std::to_string(degree);
    case ApproxKind::gd0:
      return "gd0";
  }
  return {};
}

void check_nonvanishing(const MultiPoly& h, const Cube& cube, std::size_t density) {
  if (h.dim() != cube.dim()) throw validation_error("polynomial and cube dimensions differ");
  int sign = 0;
  bool ok = true;
  std::vector<double> bad;
  for_each_grid_point(cube, density, [&](std::span<const double> t) {
    if (!ok) return;
    const double v = h(t);
    const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (s == 0 || !std::isfinite(v) || (sign != 0 && s != sign)) {
      ok = false;
      bad.assign(t.begin(), t.end());
      return;
    }
    sign = s;
  });
  if (!ok) {
    std::ostringstream msg;
    msg << "polynomial vanishes or changes sign on the cube near t=(";
    for (std::size_t k = 0; k < bad.size(); ++k) msg << (k ? "," : "") << bad[k];
    msg << ")";
    throw validation_error(msg.str());
  }
}

namespace {

// Contracts axis `axis` of a row-major tensor with matrix a (rows x shape[axis]).
std::vector<double> contract_axis(const std::vector<double>& data, std::vector<std::size_t>& shape, std::size_t axis,
                                  const Eigen::MatrixXd& a) {
  std::size_t outer = 1, inner = 1;
  for (std::size_t k = 0; k < axis; ++k) outer *= shape[k];
  for (std::size_t k = axis + 1; k < shape.size(); ++k) inner *= shape[k];
  const std::size_t m = shape[axis];
  const auto r = static_cast<std::size_t>(a.rows());
  std::vector<double> out(outer * r * inner, 0.0);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const double w = a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        const double* src = data.data() + (o * m + j) * inner;
        double* dst = out.data() + (o * r + i) * inner;
        for (std::size_t q = 0; q < inner; ++q) dst[q] += w * src[q];
      }
    }
  }
  shape[axis] = r;
  return out;
}

// Values of 1/h at a tensor grid given per-axis node lists (row-major).
std::vector<double> reciprocal_on_grid(const MultiPoly& h, const std::vector<std::vector<double>>& axes) {
  std::vector<int> box;
  for (const auto& a : axes) box.push_back(static_cast<int>(a.size()) - 1);
  std::vector<double> values;
  std::vector<double> pt(axes.size());
  for_each_index(box, [&](std::span<const int> idx, std::size_t) {
    for (std::size_t k = 0; k < idx.size(); ++k) pt[k] = axes[k][static_cast<std::size_t>(idx[k])];
    const double v = h(pt);
    if (v == 0.0 || !std::isfinite(v)) throw validation_error("polynomial vanishes at a quadrature or interpolation node");
    values.push_back(1.0 / v);
  });
  return values;
}

std::vector<double> jacobi_coefficients_raw(const MultiPoly& h, const Cube& cube, const JacobiBasis& basis, int degree,
                                            int nodes) {
  const std::size_t d = cube.dim();
  const QuadratureRule rule = gauss_jacobi(basis, nodes);
  std::vector<std::vector<double>> axes(d);
  for (std::size_t k = 0; k < d; ++k) {
    for (double s : rule.nodes) axes[k].push_back(0.5 * (cube.lower[k] + cube.upper[k]) + 0.5 * cube.width(k) * s);
  }
  std::vector<double> data = reciprocal_on_grid(h, axes);

  // A[n][j] = w_j P_n(s_j) / gamma_n: the rescaling of variables cancels against the norm.
  Eigen::MatrixXd a(degree + 1, nodes);
  std::vector<double> p(static_cast<std::size_t>(degree) + 1);
  for (int j = 0; j < nodes; ++j) {
    basis.eval_all(rule.nodes[static_cast<std::size_t>(j)], p);
    for (int n = 0; n <= degree; ++n) a(n, j) = rule.weights[static_cast<std::size_t>(j)] * p[static_cast<std::size_t>(n)] / basis.norm(n);
  }
  std::vector<std::size_t> shape(d, static_cast<std::size_t>(nodes));
  for (std::size_t k = 0; k < d; ++k) data = contract_axis(data, shape, k, a);
  return data;
}

}  // namespace

MultiPoly jacobi_coefficients(const MultiPoly& h, const Cube& cube, double alpha, double beta, int degree, int nodes) {
  if (degree < 0) throw validation_error("jacobi_coefficients: negative degree");
  if (nodes < 1) throw validation_error("jacobi_coefficients: need at least one node");
  check_nonvanishing(h, cube);
  const JacobiBasis basis(alpha, beta);
  std::vector<double> c = jacobi_coefficients_raw(h, cube, basis, degree, nodes);
  const std::vector<double> fine = jacobi_coefficients_raw(h, cube, basis, degree, 2 * nodes);
  double scale = 0.0, change = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    scale = std::max(scale, std::abs(fine[i]));
    change = std::max(change, std::abs(fine[i] - c[i]));
  }
  if (change > 1e-8 * scale) {
    std::ostringstream msg;
    msg << "jacobi_coefficients: quadrature unstable, doubling the nodes changed coefficients by " << change / scale
        << " relative";
    throw numerical_error(msg.str());
  }
  return MultiPoly(std::vector<int>(cube.dim(), degree), std::move(c), JacobiTag{alpha, beta, cube});
}

MultiPoly cheb_interp(const MultiPoly& h, const Cube& cube, int degree) {
  if (degree < 0) throw validation_error("cheb_interp: negative degree");
  if (h.dim() != cube.dim()) throw validation_error("cheb_interp: polynomial and cube dimensions differ");
  const std::size_t d = cube.dim();
  std::vector<std::vector<double>> axes(d);
  for (std::size_t k = 0; k < d; ++k) axes[k] = chebyshev_nodes_1d(degree, cube.lower[k], cube.upper[k]);
  std::vector<double> data = reciprocal_on_grid(h, axes);

  // Discrete cosine transform to Chebyshev coefficients, then T_n = P_n^{(-1/2,-1/2)} / P_n(1).
  const int m = degree + 1;
  const JacobiBasis cheb(-0.5, -0.5);
  Eigen::MatrixXd a(m, m);
  for (int n = 0; n < m; ++n) {
    const double pn1 = cheb.eval(n, 1.0);
    for (int j = 0; j < m; ++j) {
      const double theta = (j + 0.5) * std::numbers::pi / m;
      a(n, j) = (n == 0 ? 1.0 : 2.0) / m * std::cos(n * theta) / pn1;
    }
  }
  std::vector<std::size_t> shape(d, static_cast<std::size_t>(m));
  for (std::size_t k = 0; k < d; ++k) data = contract_axis(data, shape, k, a);
  return MultiPoly(std::vector<int>(d, degree), std::move(data), JacobiTag{-0.5, -0.5, cube});
}

MultiPoly build_approximant(const ApproxSpec& spec, const MultiPoly& h, const Cube& cube) {
  switch (spec.kind) {
    case ApproxKind::jpa:
      return jacobi_coefficients(h, cube, spec.alpha, spec.beta, spec.degree);
    case ApproxKind::cipa:
      check_nonvanishing(h, cube);
      return cheb_interp(h, cube, spec.degree);
    case ApproxKind::gd0:
      break;
  }
  throw validation_error("GD0 has no polynomial approximant");
}

double sup_error(const MultiPoly& h, const MultiPoly& g, const Cube& cube, std::size_t density) {
  if (h.dim() != cube.dim() || g.dim() != cube.dim()) throw validation_error("sup_error: dimension mismatch");
  double worst = 0.0;
  for_each_grid_point(cube, density, [&](std::span<const double> t) {
    worst = std::max(worst, std::abs(1.0 - g(t) * h(t)));
  });
  return worst;
}

std::vector<double> error_curve(const MultiPoly& h, const Cube& cube, const ApproxSpec& family, int max_degree,
                                std::size_t density) {
  if (family.kind == ApproxKind::gd0) throw validation_error("error_curve: GD0 has no approximation degree");
  std::vector<double> out;
  for (int m = 0; m <= max_degree; ++m) {
    ApproxSpec s = family;
    s.degree = m;
    out.push_back(sup_error(h, build_approximant(s, h, cube), cube, density));
  }
  return out;
}

double contraction_factor(const PolyFilter& h, const PolyFilter& g) {
  const Eigen::VectorXd hv = h.spectral_values();
  const Eigen::VectorXd gv = g.spectral_values();
  return (Eigen::VectorXd::Ones(hv.size()) - gv.cwiseProduct(hv)).cwiseAbs().maxCoeff();
}

void IterTrace::write_csv(std::ostream& out) const {
  out << "# schema=v1\n";
  out << "m,residual,rel_error,matvecs\n";
  out.precision(17);
  for (std::size_t m = 0; m < residual.size(); ++m) {
    out << m << ',' << residual[m] << ',';
    if (m < rel_error.size()) out << rel_error[m];
    out << ',' << matvecs[m] << '\n';
  }
}

SolveResult quasi_newton_solve(const LinearMap& h, const LinearMap& g, const Signal& y, const SolveOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const double ynorm = y.norm();
  if (ynorm == 0.0) {
    SolveResult r{Signal::Zero(y.size()), {}, {}, {}};
    r.trace.residual.push_back(0.0);
    r.trace.matvecs.push_back(0);
    if (options.truth) r.trace.rel_error.push_back(options.truth->norm() == 0.0 ? 0.0 : 1.0);
    return r;
  }
  if (options.truth && options.truth->size() != y.size()) throw validation_error("solve: truth has wrong length");
  const double truth_norm = options.truth ? options.truth->norm() : 0.0;

  SolveResult r;
  r.x = options.initial ? *options.initial : Signal::Zero(y.size());
  if (r.x.size() != y.size()) throw validation_error("solve: initial guess has wrong length");
  Signal e = options.initial ? Signal(h(r.x, r.stats) - y) : Signal(-y);

  auto record = [&]() {
    r.trace.residual.push_back(e.norm() / ynorm);
    r.trace.matvecs.push_back(r.stats.matvecs);
    if (options.truth) {
      r.trace.rel_error.push_back(truth_norm == 0.0 ? (r.x - *options.truth).norm() : (r.x - *options.truth).norm() / truth_norm);
    }
  };
  record();
  double best = r.trace.residual.back();
  for (int m = 1; m <= options.max_iterations; ++m) {
    if (r.trace.residual.back() <= options.rtol) break;
    r.x -= g(e, r.stats);
    e = h(r.x, r.stats) - y;
    record();
    if (options.observer) options.observer(m, r.x);
    const double res = r.trace.residual.back();
    if (!std::isfinite(res) || !r.x.allFinite() || res > 1e6 * best) {
      r.trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::ostringstream msg;
      msg << "quasi-Newton iteration diverged at m=" << m << " (relative residual " << res << ")";
      throw divergence_error(msg.str(), r.trace);
    }
    best = std::min(best, res);
  }
  r.trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

namespace {

LinearMap as_map(const PolyFilter& f) {
  return [&f](const Signal& x, ApplyStats& s) { return f.apply(x, &s); };
}

}  // namespace

SolveResult quasi_newton_solve(const PolyFilter& h, const PolyFilter& g, const Signal& y, const SolveOptions& options) {
  std::vector<std::string> warnings;
  const auto& tag = g.poly().basis_tag();
  const Cube* cube = tag ? &tag->cube : (h.spectrum() ? &h.spectrum()->cube : nullptr);
  if (cube && g.poly().total_degree_bound() > 0) {
    const double b = sup_error(h.poly(), g.poly(), *cube);
    if (b >= 1.0) {
      std::ostringstream msg;
      msg << "sup-norm error b_M = " << b << " >= 1; convergence is not guaranteed";
      if (h.spectrum() && g.spectrum()) msg << " (spectral contraction factor " << contraction_factor(h, g) << ")";
      warnings.push_back(msg.str());
    }
  }
  SolveResult r = quasi_newton_solve(as_map(h), as_map(g), y, options);
  r.warnings.insert(r.warnings.begin(), warnings.begin(), warnings.end());
  return r;
}

double gd0_step(const PolyFilter& h) {
  const auto [lo, hi] = h.spectral_range();
  if (!(lo > 0.0)) {
    std::ostringstream msg;
    msg << "GD0 requires a positive definite filter (min over spectrum " << lo << ")";
    throw validation_error(msg.str());
  }
  return 2.0 / (lo + hi);
}

SolveResult gd0_solve(const PolyFilter& h, const Signal& y, const SolveOptions& options) {
  const PolyFilter step = h.with_poly(MultiPoly::constant(h.dim(), gd0_step(h)));
  return quasi_newton_solve(as_map(h), as_map(step), y, options);
}

PolyFilter inverse_filter(const PolyFilter& h, const ApproxSpec& spec) {
  if (spec.kind == ApproxKind::gd0) return h.with_poly(MultiPoly::constant(h.dim(), gd0_step(h)));
  if (!h.spectrum()) throw validation_error("inverse filter: spectral cube required");
  return h.with_poly(build_approximant(spec, h.poly(), h.spectrum()->cube));
}

SolveResult solve(const PolyFilter& h, const ApproxSpec& spec, const Signal& y, const SolveOptions& options) {
  if (spec.kind == ApproxKind::gd0) return gd0_solve(h, y, options);
  return quasi_newton_solve(h, inverse_filter(h, spec), y, options);
}

}  // namespace gsp
