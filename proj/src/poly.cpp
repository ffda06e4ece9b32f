#include "gsp/poly.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

namespace gsp {

JacobiBasis::JacobiBasis(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!(alpha > -1.0) || !(beta > -1.0)) throw validation_error("Jacobi basis: require alpha, beta > -1");
}

JacobiBasis::Recurrence JacobiBasis::recurrence(int n) const {
  const double a = alpha_;
  const double b = beta_;
  const double nn = n;
  const double s = 2.0 * nn + a + b;
  const double denom = 2.0 * nn * (nn + a + b);
  return {(s - 1.0) * s / denom, (b * b - a * a) * (s - 1.0) / (denom * (s - 2.0)),
          (nn + a - 1.0) * (nn + b - 1.0) * s / (nn * (nn + a + b) * (s - 2.0))};
}

double JacobiBasis::eval(int n, double t) const {
  if (n < 0) throw validation_error("Jacobi eval: negative index");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = p1_slope() * t + p1_offset();
  for (int k = 2; k <= n; ++k) {
    const auto r = recurrence(k);
    const double next = (r.a1 * t - r.a2) * cur - r.a3 * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

void JacobiBasis::eval_all(double t, std::span<double> out) const {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  out[1] = p1_slope() * t + p1_offset();
  for (std::size_t k = 2; k < out.size(); ++k) {
    const auto r = recurrence(static_cast<int>(k));
    out[k] = (r.a1 * t - r.a2) * out[k - 1] - r.a3 * out[k - 2];
  }
}

double JacobiBasis::weight(double t) const { return std::pow(1.0 - t, alpha_) * std::pow(1.0 + t, beta_); }

double JacobiBasis::log_norm(int n) const {
  const double a = alpha_;
  const double b = beta_;
  if (n == 0) {
    return (a + b + 1.0) * std::numbers::ln2 + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0);
  }
  const double nn = n;
  return (a + b + 1.0) * std::numbers::ln2 - std::log(2.0 * nn + a + b + 1.0) + std::lgamma(nn + a + 1.0) +
         std::lgamma(nn + b + 1.0) - std::lgamma(nn + a + b + 1.0) - std::lgamma(nn + 1.0);
}

double JacobiBasis::norm(int n) const { return std::exp(log_norm(n)); }

double jacobi_eval(const JacobiBasis& basis, int n, double t) { return basis.eval(n, t); }

double jacobi_norm(const JacobiBasis& basis, std::span<const int> n, const Cube& cube) {
  if (n.size() != cube.dim()) throw validation_error("jacobi_norm: index dimension differs from cube");
  double log_value = std::log(cube.volume()) - static_cast<double>(n.size()) * std::numbers::ln2;
  for (int ni : n) {
    if (ni < 0) throw validation_error("jacobi_norm: negative index");
    log_value += basis.log_norm(ni);
  }
  return std::exp(log_value);
}

QuadratureRule gauss_jacobi(const JacobiBasis& basis, int m) {
  if (m < 1) throw validation_error("gauss_jacobi: need at least one node");
  const double a = basis.alpha();
  const double b = basis.beta();
  Eigen::VectorXd diag(m);
  Eigen::VectorXd sub(std::max(m - 1, 0));
  for (int k = 0; k < m; ++k) {
    const double s = 2.0 * k + a + b;
    diag[k] = (k == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
  }
  for (int k = 1; k < m; ++k) {
    const double s = 2.0 * k + a + b;
    double b2;
    if (k == 1) {
      b2 = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) * (2.0 + a + b) * (3.0 + a + b));
    } else {
      b2 = 4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0));
    }
    sub[k - 1] = std::sqrt(b2);
  }
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(m));
  rule.weights.resize(static_cast<std::size_t>(m));
  const double mu0 = basis.weight_integral();
  if (m == 1) {
    rule.nodes[0] = diag[0];
    rule.weights[0] = mu0;
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw numerical_error("gauss_jacobi: eigensolver did not converge");
  for (int k = 0; k < m; ++k) {
    rule.nodes[static_cast<std::size_t>(k)] = solver.eigenvalues()[k];
    const double v0 = solver.eigenvectors()(0, k);
    rule.weights[static_cast<std::size_t>(k)] = mu0 * v0 * v0;
  }
  return rule;
}

std::vector<double> chebyshev_nodes_1d(int degree, double lower, double upper) {
  if (degree < 0) throw validation_error("chebyshev_nodes: negative degree");
  std::vector<double> nodes(static_cast<std::size_t>(degree) + 1);
  for (int j = 1; j <= degree + 1; ++j) {
    nodes[static_cast<std::size_t>(j - 1)] =
        0.5 * (upper + lower) + 0.5 * (upper - lower) * std::cos((j - 0.5) * std::numbers::pi / (degree + 1));
  }
  return nodes;
}

void for_each_index(std::span<const int> degrees, const std::function<void(std::span<const int>, std::size_t)>& fn) {
  const std::size_t d = degrees.size();
  std::vector<int> idx(d, 0);
  std::size_t flat = 0;
  while (true) {
    fn(idx, flat++);
    std::size_t axis = d;
    while (axis > 0) {
      --axis;
      if (idx[axis] < degrees[axis]) {
        ++idx[axis];
        break;
      }
      idx[axis] = 0;
      if (axis == 0) return;
    }
    if (d == 0) return;
  }
}

std::vector<std::vector<double>> chebyshev_nodes(int degree, const Cube& cube) {
  std::vector<std::vector<double>> axes;
  for (std::size_t k = 0; k < cube.dim(); ++k) axes.push_back(chebyshev_nodes_1d(degree, cube.lower[k], cube.upper[k]));
  std::vector<int> box(cube.dim(), degree);
  std::vector<std::vector<double>> points;
  for_each_index(box, [&](std::span<const int> idx, std::size_t) {
    std::vector<double> pt(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) pt[k] = axes[k][static_cast<std::size_t>(idx[k])];
    points.push_back(std::move(pt));
  });
  return points;
}

namespace {

std::size_t box_size(std::span<const int> degrees) {
  std::size_t n = 1;
  for (int l : degrees) n *= static_cast<std::size_t>(l) + 1;
  return n;
}

}  // namespace

MultiPoly::MultiPoly(std::vector<int> degrees, std::vector<double> coeffs, std::optional<JacobiTag> jacobi)
    : degrees_(std::move(degrees)), coeffs_(std::move(coeffs)), jacobi_(std::move(jacobi)) {
  if (degrees_.empty()) throw validation_error("polynomial: dimension must be at least 1");
  for (int l : degrees_) {
    if (l < 0) throw validation_error("polynomial: negative degree bound");
  }
  if (coeffs_.size() != box_size(degrees_)) {
    throw validation_error("polynomial: expected " + std::to_string(box_size(degrees_)) + " coefficients, got " +
                           std::to_string(coeffs_.size()));
  }
  if (jacobi_ && jacobi_->cube.dim() != degrees_.size()) {
    throw validation_error("polynomial: Jacobi cube dimension differs from polynomial dimension");
  }
  if (jacobi_) (void)jacobi_->basis();  // validates alpha, beta
}

MultiPoly MultiPoly::constant(std::size_t dim, double value) {
  return MultiPoly(std::vector<int>(dim, 0), std::vector<double>{value});
}

MultiPoly MultiPoly::univariate(std::vector<double> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  const int deg = static_cast<int>(coeffs.size()) - 1;
  return MultiPoly({deg}, std::move(coeffs));
}

MultiPoly MultiPoly::coordinate(std::size_t dim, std::size_t axis) {
  if (axis >= dim) throw validation_error("polynomial: coordinate axis out of range");
  std::vector<int> deg(dim, 0);
  deg[axis] = 1;
  std::vector<double> c(2, 0.0);
  c[1] = 1.0;
  return MultiPoly(std::move(deg), std::move(c));
}

int MultiPoly::total_degree_bound() const {
  int s = 0;
  for (int l : degrees_) s += l;
  return s;
}

std::size_t MultiPoly::flat_index(std::span<const int> index) const {
  if (index.size() != dim()) throw validation_error("polynomial: index dimension mismatch");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < dim(); ++k) {
    if (index[k] < 0 || index[k] > degrees_[k]) throw validation_error("polynomial: index outside degree box");
    flat = flat * (static_cast<std::size_t>(degrees_[k]) + 1) + static_cast<std::size_t>(index[k]);
  }
  return flat;
}

double MultiPoly::coeff(std::span<const int> index) const { return coeffs_[flat_index(index)]; }

const JacobiTag& MultiPoly::jacobi() const {
  if (!jacobi_) throw validation_error("polynomial: not in Jacobi basis");
  return *jacobi_;
}

double MultiPoly::operator()(std::span<const double> t) const {
  if (t.size() != dim()) throw validation_error("polynomial: evaluation point has wrong dimension");
  return jacobi_ ? eval_jacobi(t) : eval_monomial(t);
}

double MultiPoly::operator()(double t) const { return (*this)(std::span<const double>(&t, 1)); }

double MultiPoly::eval_monomial(std::span<const double> t) const {
  const std::size_t d = dim();
  std::vector<std::size_t> stride(d, 1);
  for (std::size_t k = d - 1; k > 0; --k) stride[k - 1] = stride[k] * (static_cast<std::size_t>(degrees_[k]) + 1);
  // Horner along each axis, recursing into the remaining axes for every coefficient.
  auto rec = [&](auto&& self, std::size_t axis, std::size_t offset) -> double {
    double acc = 0.0;
    for (int l = degrees_[axis]; l >= 0; --l) {
      const std::size_t off = offset + static_cast<std::size_t>(l) * stride[axis];
      const double c = (axis + 1 == d) ? coeffs_[off] : self(self, axis + 1, off);
      acc = acc * t[axis] + c;
    }
    return acc;
  };
  return rec(rec, 0, 0);
}

double MultiPoly::eval_jacobi(std::span<const double> t) const {
  const JacobiBasis basis = jacobi_->basis();
  const Cube& cube = jacobi_->cube;
  std::vector<std::vector<double>> table(dim());
  for (std::size_t k = 0; k < dim(); ++k) {
    const double s = (2.0 * t[k] - cube.lower[k] - cube.upper[k]) / cube.width(k);
    table[k].resize(static_cast<std::size_t>(degrees_[k]) + 1);
    basis.eval_all(s, table[k]);
  }
  double sum = 0.0;
  for_each_index(degrees_, [&](std::span<const int> idx, std::size_t flat) {
    double term = coeffs_[flat];
    for (std::size_t k = 0; k < idx.size(); ++k) term *= table[k][static_cast<std::size_t>(idx[k])];
    sum += term;
  });
  return sum;
}

namespace {

// Monomial coefficients (in t) of P_n(sigma t + tau) for n = 0..max_n.
std::vector<std::vector<double>> jacobi_monomial_table(const JacobiBasis& basis, int max_n, double sigma, double tau) {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(max_n) + 1);
  rows[0] = {1.0};
  if (max_n == 0) return rows;
  // P_1(s) = A s + B with s = sigma t + tau.
  rows[1] = {basis.p1_slope() * tau + basis.p1_offset(), basis.p1_slope() * sigma};
  for (int n = 2; n <= max_n; ++n) {
    const auto r = basis.recurrence(n);
    const auto& p1 = rows[static_cast<std::size_t>(n - 1)];
    const auto& p2 = rows[static_cast<std::size_t>(n - 2)];
    std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::size_t l = 0; l < p1.size(); ++l) {
      out[l] += (r.a1 * tau - r.a2) * p1[l];
      out[l + 1] += r.a1 * sigma * p1[l];
    }
    for (std::size_t l = 0; l < p2.size(); ++l) out[l] -= r.a3 * p2[l];
    rows[static_cast<std::size_t>(n)] = std::move(out);
  }
  return rows;
}

MultiPoly padded(const MultiPoly& p, const std::vector<int>& degrees) {
  MultiPoly out(degrees, std::vector<double>(box_size(degrees), 0.0));
  std::vector<double> coeffs(box_size(degrees), 0.0);
  for_each_index(p.degrees(), [&](std::span<const int> idx, std::size_t flat) {
    coeffs[out.flat_index(idx)] = p.coeffs()[flat];
  });
  return MultiPoly(degrees, std::move(coeffs));
}

}  // namespace

MultiPoly to_monomial(const MultiPoly& p) {
  if (!p.is_jacobi()) return p;
  const auto& tag = p.jacobi();
  const JacobiBasis basis = tag.basis();
  const std::size_t d = p.dim();
  std::vector<std::vector<std::vector<double>>> tables(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double sigma = 2.0 / tag.cube.width(k);
    const double tau = -(tag.cube.lower[k] + tag.cube.upper[k]) / tag.cube.width(k);
    tables[k] = jacobi_monomial_table(basis, p.degrees()[k], sigma, tau);
  }
  std::vector<double> out(p.coeffs().size(), 0.0);
  MultiPoly shape(p.degrees(), out);
  for_each_index(p.degrees(), [&](std::span<const int> n, std::size_t nflat) {
    const double c = p.coeffs()[nflat];
    if (c == 0.0) return;
    std::vector<int> box(d);
    for (std::size_t k = 0; k < d; ++k) box[k] = n[k];
    for_each_index(box, [&](std::span<const int> l, std::size_t) {
      double term = c;
      for (std::size_t k = 0; k < d; ++k) {
        term *= tables[k][static_cast<std::size_t>(n[k])][static_cast<std::size_t>(l[k])];
      }
      out[shape.flat_index(l)] += term;
    });
  });
  return MultiPoly(p.degrees(), std::move(out));
}

MultiPoly operator+(const MultiPoly& a_in, const MultiPoly& b_in) {
  if (a_in.dim() != b_in.dim()) throw validation_error("polynomial add: dimension mismatch");
  const MultiPoly a = to_monomial(a_in);
  const MultiPoly b = to_monomial(b_in);
  std::vector<int> deg(a.dim());
  for (std::size_t k = 0; k < a.dim(); ++k) deg[k] = std::max(a.degrees()[k], b.degrees()[k]);
  const MultiPoly pa = padded(a, deg);
  const MultiPoly pb = padded(b, deg);
  std::vector<double> c(pa.coeffs().size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = pa.coeffs()[i] + pb.coeffs()[i];
  return MultiPoly(std::move(deg), std::move(c));
}

MultiPoly operator*(double s, const MultiPoly& a) {
  std::vector<double> c(a.coeffs().begin(), a.coeffs().end());
  for (double& v : c) v *= s;
  return MultiPoly(a.degrees(), std::move(c), a.basis_tag());
}

MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return a + (-1.0) * b; }

MultiPoly operator*(const MultiPoly& a_in, const MultiPoly& b_in) {
  if (a_in.dim() != b_in.dim()) throw validation_error("polynomial multiply: dimension mismatch");
  const MultiPoly a = to_monomial(a_in);
  const MultiPoly b = to_monomial(b_in);
  const std::size_t d = a.dim();
  std::vector<int> deg(d);
  for (std::size_t k = 0; k < d; ++k) deg[k] = a.degrees()[k] + b.degrees()[k];
  MultiPoly shape(deg, std::vector<double>(box_size(deg), 0.0));
  std::vector<double> c(box_size(deg), 0.0);
  std::vector<int> sum(d);
  for_each_index(a.degrees(), [&](std::span<const int> ia, std::size_t fa) {
    const double ca = a.coeffs()[fa];
    if (ca == 0.0) return;
    for_each_index(b.degrees(), [&](std::span<const int> ib, std::size_t fb) {
      for (std::size_t k = 0; k < d; ++k) sum[k] = ia[k] + ib[k];
      c[shape.flat_index(sum)] += ca * b.coeffs()[fb];
    });
  });
  return MultiPoly(std::move(deg), std::move(c));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<double> parse_number_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string_view item = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
    if (item.empty()) throw validation_error("polynomial text: empty entry in " + std::string(what));
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw validation_error("polynomial text: cannot parse number '" + std::string(item) + "' in " +
                             std::string(what));
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string format_poly(const MultiPoly& p_in) {
  const MultiPoly p = to_monomial(p_in);
  std::ostringstream out;
  out.precision(17);
  out << "d=" << p.dim() << "; L=";
  for (std::size_t k = 0; k < p.dim(); ++k) out << (k ? "," : "") << p.degrees()[k];
  out << "; coeffs=";
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) out << (i ? "," : "") << p.coeffs()[i];
  return out.str();
}

MultiPoly parse_poly(std::string_view text) {
  std::optional<std::size_t> dim;
  std::optional<std::vector<int>> degrees;
  std::optional<std::vector<double>> coeffs;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t semi = text.find(';', start);
    const std::string_view field =
        trim(text.substr(start, semi == std::string_view::npos ? text.npos : semi - start));
    start = semi == std::string_view::npos ? text.size() : semi + 1;
    if (field.empty()) continue;
    const std::size_t eq = field.find('=');
    if (eq == std::string_view::npos) throw validation_error("polynomial text: field without '=': " + std::string(field));
    const std::string_view key = trim(field.substr(0, eq));
    const std::string_view value = trim(field.substr(eq + 1));
    if (key == "d") {
      const auto v = parse_number_list(value, "d");
      if (v.size() != 1 || v[0] < 1 || v[0] != std::floor(v[0])) throw validation_error("polynomial text: bad d");
      dim = static_cast<std::size_t>(v[0]);
    } else if (key == "L") {
      std::vector<int> deg;
      for (double v : parse_number_list(value, "L")) {
        if (v < 0 || v != std::floor(v)) throw validation_error("polynomial text: bad degree bound");
        deg.push_back(static_cast<int>(v));
      }
      degrees = std::move(deg);
    } else if (key == "coeffs") {
      coeffs = parse_number_list(value, "coeffs");
    } else {
      throw validation_error("polynomial text: unknown key '" + std::string(key) + "'");
    }
  }
  if (!dim || !degrees || !coeffs) throw validation_error("polynomial text: need d, L and coeffs");
  if (degrees->size() != *dim) throw validation_error("polynomial text: L has wrong number of entries");
  return MultiPoly(std::move(*degrees), std::move(*coeffs));
}

std::size_t default_grid_density(std::size_t dim) {
  switch (dim) {
    case 1:
      return 2001;
    case 2:
      return 201;
    case 3:
      return 51;
    default:
      return 21;
  }
}

void for_each_grid_point(const Cube& cube, std::size_t density, const std::function<void(std::span<const double>)>& fn) {
  if (density == 0) density = default_grid_density(cube.dim());
  std::vector<int> box(cube.dim(), static_cast<int>(density) - 1);
  std::vector<double> pt(cube.dim());
  for_each_index(box, [&](std::span<const int> idx, std::size_t) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      pt[k] = density == 1 ? 0.5 * (cube.lower[k] + cube.upper[k])
                           : cube.lower[k] + cube.width(k) * static_cast<double>(idx[k]) /
                                                 static_cast<double>(density - 1);
    }
    fn(pt);
  });
}

}  // namespace gsp
