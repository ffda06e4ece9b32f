#include "gsp/wiener.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gsp {

namespace {

std::pair<double, double> grid_range(const MultiPoly& f, const Cube& cube, std::size_t density) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for_each_grid_point(cube, density, [&](std::span<const double> t) {
    const double v = f(t);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  });
  return {lo, hi};
}

// The cube extends past the spectrum by ~1e-9, so a k vanishing on a spectral edge dips slightly below 0.
bool below_zero(double lo, double hi) { return lo < -1e-7 * (1.0 + std::max(std::abs(lo), std::abs(hi))); }

void require_positive(const MultiPoly& f, const Cube& cube, const char* what) {
  const double lo = grid_range(f, cube, 0).first;
  if (!(lo > 0.0)) {
    std::ostringstream msg;
    msg << "wiener: " << what << " must be positive on the spectral cube (min " << lo << ")";
    throw validation_error(msg.str());
  }
}

double delta0_of(const WienerProblem& prob) {
  if (!prob.delta0 || !(*prob.delta0 > 0.0)) throw validation_error("wiener: worst-case mode needs delta0 > 0");
  return *prob.delta0;
}

SolveResult inverse_step(const WienerProblem& prob, const MultiPoly& denom, const Signal& y,
                         const WienerConfig& config) {
  SolveOptions opts;
  opts.max_iterations = config.inverse_iterations;
  opts.rtol = config.inverse_rtol;
  return solve(prob.filter(denom), config.solver, y, opts);
}

WienerResult two_step(const WienerProblem& prob, const Signal& y, const WienerConfig& config, bool regularize) {
  if (y.size() != static_cast<Eigen::Index>(prob.order())) throw validation_error("wiener: signal length mismatch");
  WienerResult out;
  SolveResult z1 = inverse_step(prob, prob.h * prob.h * prob.r + prob.g, y, config);
  out.stats += z1.stats;
  out.w = prob.filter(prob.h * prob.r).apply(z1.x, &out.stats);
  out.inverse_trace = std::move(z1.trace);
  out.warnings = std::move(z1.warnings);
  if (!regularize) {
    out.x = out.w;
    return out;
  }
  const Eigen::ArrayXd sp = prob.p.array().sqrt();
  NeumannResult z3 = neumann_regularize(prob, (sp * out.w.array()).matrix(), config.neumann_iterations,
                                        config.neumann_rtol);
  out.stats += z3.stats;
  out.neumann_iterations = z3.iterations;
  out.x = (z3.z.array() / sp).matrix();
  return out;
}

}  // namespace

WienerProblem WienerProblem::make(SpectrumPtr spectrum, MultiPoly h, MultiPoly r, MultiPoly g,
                                  std::optional<MultiPoly> k) {
  if (!spectrum) throw validation_error("wiener: joint spectrum required");
  const std::size_t d = spectrum->dim();
  const std::size_t n = spectrum->order();
  return WienerProblem{spectrum,
                       std::move(h),
                       std::move(r),
                       std::move(g),
                       k ? std::move(*k) : MultiPoly::constant(d, 0.0),
                       Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n)),
                       std::nullopt};
}

double WienerProblem::k_sup(std::size_t density) const { return grid_range(k, spectrum->cube, density).second; }

void WienerProblem::validate(WienerMode mode, bool enforce_wideband_invariants) const {
  if (!spectrum) throw validation_error("wiener: joint spectrum required");
  const std::size_t d = spectrum->dim();
  for (const MultiPoly* f : {&h, &r, &g, &k}) {
    if (f->dim() != d) throw validation_error("wiener: polynomial dimension does not match the shifts");
  }
  const auto n = static_cast<Eigen::Index>(order());
  if (p.size() != n) throw validation_error("wiener: probability vector has wrong length");
  if (!(p.minCoeff() > 0.0)) throw validation_error("wiener: probabilities must be strictly positive");
  if (std::abs(p.sum() - 1.0) > 1e-10) throw validation_error("wiener: probabilities must sum to 1");
  const Cube& cube = spectrum->cube;
  const auto [klo, khi] = grid_range(k, cube, 0);
  if (below_zero(klo, khi)) {
    std::ostringstream msg;
    msg << "wiener: regularizer k must be nonnegative on the cube (min " << klo << ")";
    throw validation_error(msg.str());
  }

  switch (mode) {
    case WienerMode::stochastic:
      require_positive(h * h * r + g, cube, "h^2 r + g");
      break;
    case WienerMode::wideband: {
      require_positive(h * h * r + g, cube, "h^2 r + g");
      if (!enforce_wideband_invariants) break;
      const Signal one = Signal::Ones(n);
      const double scale = std::sqrt(static_cast<double>(n));
      const double k1 = filter(k).apply(one).norm();
      const double g1 = filter(g).apply(one).norm();
      const Signal h1 = filter(h).apply(one);
      const double tau = h1.mean();
      const double h_dev = (h1 - tau * one).norm();
      auto tol = [&](const MultiPoly& f) {
        const Eigen::VectorXd v = filter(f).spectral_values();
        return 1e-9 * scale * (1.0 + v.cwiseAbs().maxCoeff());
      };
      std::ostringstream msg;
      if (k1 > tol(k)) msg << "wide-band model needs K1 = 0 (||K1|| = " << k1 << ")";
      else if (g1 > tol(g)) msg << "wide-band model needs G1 = 0 (||G1|| = " << g1 << ")";
      else if (h_dev > tol(h)) msg << "wide-band model needs H1 = tau 1 (||H1 - tau 1|| = " << h_dev << ")";
      else if (std::abs(tau) <= 1e-12) msg << "wide-band model needs H1 = tau 1 with tau != 0";
      if (!msg.str().empty()) throw validation_error(msg.str());
      break;
    }
    case WienerMode::worstcase: {
      const double d0 = delta0_of(*this);
      require_positive(d0 * d0 * (h * h) + g, cube, "delta0^2 h^2 + g");
      break;
    }
  }
}

int neumann_iteration_count(double rate, double rtol, int m_max) {
  if (rate <= 0.0) return 0;
  if (!(rate < 1.0)) throw numerical_error("neumann: contraction rate must be below 1");
  if (!(rtol > 0.0) || rtol >= 1.0) return std::min(m_max, 1);
  const double m = std::ceil(std::log(rtol) / std::log(rate));
  return static_cast<int>(std::min<double>(m, m_max));
}

NeumannResult neumann_regularize(const WienerProblem& prob, const Signal& z2, int m_max, double rtol,
                                 bool keep_history) {
  const double pmin = prob.p_min();
  if (!(pmin > 0.0)) throw validation_error("neumann: p_min must be positive");
  const double K = std::max(0.0, prob.k_sup());
  const auto [klo, khi] = grid_range(prob.k, prob.spectrum->cube, 0);
  if (below_zero(klo, khi)) throw validation_error("neumann: regularizer k is negative on the cube");
  if (z2.size() != prob.p.size()) throw validation_error("neumann: signal length mismatch");

  NeumannResult out;
  out.rate = K / (K + pmin);
  const double a = pmin / (K + pmin);
  const double b = out.rate;
  out.iterations = neumann_iteration_count(out.rate, rtol, m_max);
  const PolyFilter kf = prob.filter(prob.k);
  const Eigen::ArrayXd isp = prob.p.array().rsqrt();

  out.z = z2;
  if (keep_history) out.history.push_back(out.z);
  for (int m = 0; m < out.iterations; ++m) {
    const Signal scaled = (isp * out.z.array()).matrix();
    const Signal Aw = (isp * kf.apply(scaled, &out.stats).array()).matrix();
    out.z = a * z2 + b * out.z - a * Aw;
    if (keep_history) out.history.push_back(out.z);
  }
  return out;
}

WienerResult wiener0_apply(const WienerProblem& prob, const Signal& y, const WienerConfig& config) {
  prob.validate(WienerMode::stochastic);
  return two_step(prob, y, config, false);
}

WienerResult wiener_mse_apply(const WienerProblem& prob, const Signal& y, const WienerConfig& config) {
  prob.validate(WienerMode::stochastic);
  return two_step(prob, y, config, true);
}

WienerResult wideband_wiener_apply(const WienerProblem& prob, const Signal& y, const WienerConfig& config) {
  prob.validate(WienerMode::wideband, config.enforce_wideband_invariants);
  return two_step(prob, y, config, true);
}

WienerResult worstcase_wiener_apply(const WienerProblem& prob, const Signal& y, const WienerConfig& config) {
  prob.validate(WienerMode::worstcase);
  if (y.size() != static_cast<Eigen::Index>(prob.order())) throw validation_error("wiener: signal length mismatch");
  const double d2 = delta0_of(prob) * delta0_of(prob);
  WienerResult out;
  SolveResult z = inverse_step(prob, d2 * (prob.h * prob.h) + prob.g, y, config);
  out.stats += z.stats;
  out.x = d2 * prob.filter(prob.h).apply(z.x, &out.stats);
  out.w = out.x;
  out.inverse_trace = std::move(z.trace);
  out.warnings = std::move(z.warnings);
  return out;
}

WienerResult tikhonov_apply(const WienerProblem& prob, const Signal& y, const WienerConfig& config) {
  if (y.size() != prob.p.size()) throw validation_error("tikhonov: signal length mismatch");
  if (!(prob.p.minCoeff() > 0.0)) throw validation_error("tikhonov: probabilities must be strictly positive");
  const Eigen::ArrayXd sp = prob.p.array().sqrt();
  NeumannResult z3 =
      neumann_regularize(prob, (sp * y.array()).matrix(), config.neumann_iterations, config.neumann_rtol);
  WienerResult out;
  out.x = (z3.z.array() / sp).matrix();
  out.w = y;
  out.stats = z3.stats;
  out.neumann_iterations = z3.iterations;
  return out;
}

namespace dense {

Matrices materialize(const WienerProblem& prob, std::size_t limit) {
  return {prob.filter(prob.h).materialize(limit), prob.filter(prob.r).materialize(limit),
          prob.filter(prob.g).materialize(limit), prob.filter(prob.k).materialize(limit),
          prob.p.asDiagonal().toDenseMatrix()};
}

Eigen::MatrixXd wiener0(const WienerProblem& prob) {
  const Matrices m = materialize(prob);
  const Eigen::MatrixXd D = m.H * m.R * m.H.transpose() + m.G;
  return D.ldlt().solve(m.H * m.R).transpose();
}

Eigen::MatrixXd wiener_mse(const WienerProblem& prob) {
  const Matrices m = materialize(prob);
  return (m.P + m.K).ldlt().solve(m.P * wiener0(prob));
}

Eigen::MatrixXd worstcase_wiener(const WienerProblem& prob) {
  const double d2 = delta0_of(prob) * delta0_of(prob);
  const Matrices m = materialize(prob);
  const Eigen::MatrixXd D = d2 * m.H * m.H.transpose() + m.G;
  return d2 * D.ldlt().solve(m.H).transpose();
}

Eigen::MatrixXd tikhonov(const WienerProblem& prob) {
  const Matrices m = materialize(prob);
  return (m.P + m.K).ldlt().solve(m.P);
}

Eigen::VectorXd bias(const WienerProblem& prob, const Eigen::VectorXd& mean) {
  const Matrices m = materialize(prob);
  const Eigen::MatrixXd Q = (m.H * m.R * m.H.transpose() + m.G).inverse();
  return (m.P + m.K).ldlt().solve(Q * m.R * m.H.transpose() * m.H * m.K * mean) + Q * m.G * mean;
}

}  // namespace dense

double f_mse_eval(const WienerProblem& prob, const Eigen::MatrixXd& W) {
  const dense::Matrices m = dense::materialize(prob);
  const Eigen::MatrixXd D = m.H * m.R * m.H.transpose() + m.G;
  return (W.transpose() * (m.P + m.K) * W * D).trace() - 2.0 * (m.P * W * m.H * m.R).trace() + (m.P * m.R).trace();
}

double f_mse_min(const WienerProblem& prob) {
  const dense::Matrices m = dense::materialize(prob);
  const auto n = m.H.rows();
  return (m.P * (Eigen::MatrixXd::Identity(n, n) - dense::wiener_mse(prob) * m.H) * m.R).trace();
}

double f_wmse_eval(const WienerProblem& prob, const Eigen::MatrixXd& W) {
  const double d2 = delta0_of(prob) * delta0_of(prob);
  const dense::Matrices m = dense::materialize(prob);
  const auto n = m.H.rows();
  const Eigen::MatrixXd E = W * m.H - Eigen::MatrixXd::Identity(n, n);
  return (m.P * (d2 * E * E.transpose() + W * m.G * W.transpose())).trace();
}

double f_wmse_min(const WienerProblem& prob) {
  const double d2 = delta0_of(prob) * delta0_of(prob);
  const dense::Matrices m = dense::materialize(prob);
  const Eigen::MatrixXd D = d2 * m.H * m.H.transpose() + m.G;
  return d2 - d2 * d2 * D.ldlt().solve(m.H * m.P * m.H.transpose()).trace();
}

double f_wmse_min_uniform(const WienerProblem& prob) {
  const double d2 = delta0_of(prob) * delta0_of(prob);
  const dense::Matrices m = dense::materialize(prob);
  const Eigen::MatrixXd D = d2 * m.H * m.H.transpose() + m.G;
  return d2 / static_cast<double>(m.H.rows()) * D.ldlt().solve(m.G).trace();
}

double f_wmse_min_singular(const WienerProblem& prob) {
  const double d2 = delta0_of(prob) * delta0_of(prob);
  const dense::Matrices m = dense::materialize(prob);
  const auto n = m.H.rows();
  const double s2 = m.G(0, 0);
  if ((m.G - s2 * Eigen::MatrixXd::Identity(n, n)).norm() > 1e-12 * (1.0 + std::abs(s2)) * static_cast<double>(n)) {
    throw validation_error("singular-value form needs G = sigma^2 I");
  }
  const Eigen::VectorXd mu = Eigen::JacobiSVD<Eigen::MatrixXd>(m.H).singularValues();
  return d2 * s2 / static_cast<double>(n) * (d2 * mu.array().square() + s2).inverse().sum();
}

double f_wmse_row(const WienerProblem& prob, const Eigen::VectorXd& w, const Eigen::VectorXd& u) {
  const double d2 = delta0_of(prob) * delta0_of(prob);
  const dense::Matrices m = dense::materialize(prob);
  return d2 * (m.H.transpose() * w - u).squaredNorm() + w.dot(m.G * w);
}

Sandwich f_wmse_tilde_bounds(const WienerProblem& prob, const Eigen::MatrixXd& W) {
  const double d2 = delta0_of(prob) * delta0_of(prob);
  const dense::Matrices m = dense::materialize(prob);
  const auto n = m.H.rows();
  const Eigen::MatrixXd E = W * m.H - Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd M = E.transpose() * m.P * E;
  const double lmax = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(M, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
  Sandwich s;
  s.value = d2 * lmax + (m.P * W * m.G * W.transpose()).trace();
  s.upper = f_wmse_eval(prob, W);
  s.lower = s.upper / static_cast<double>(n);
  const double slack = 1e-12 * (1.0 + std::abs(s.upper));
  if (s.lower > s.value + slack || s.value > s.upper + slack) throw numerical_error("F~ sandwich ordering violated");
  return s;
}

}  // namespace gsp
