#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gsp/approx_inverse.hpp"
#include "gsp/filter.hpp"

namespace gsp {

enum class WienerMode { stochastic, wideband, worstcase };

/**
 * Filters h, r (or the wide-band covariance), g, k are polynomials in the
 * shifts of one joint spectrum; p is a strictly positive probability vector.
 */
struct WienerProblem {
  SpectrumPtr spectrum;
  MultiPoly h;
  MultiPoly r;
  MultiPoly g;
  MultiPoly k;
  Eigen::VectorXd p;
  std::optional<double> delta0;

  /// Uniform P, zero regularizer unless given.
  static WienerProblem make(SpectrumPtr spectrum, MultiPoly h, MultiPoly r, MultiPoly g,
                            std::optional<MultiPoly> k = std::nullopt);

  std::size_t order() const { return spectrum->order(); }
  PolyFilter filter(const MultiPoly& poly) const { return PolyFilter(spectrum, poly); }
  double p_min() const { return p.minCoeff(); }
  /// sup of k over the uniform sample grid of the cube.
  double k_sup(std::size_t density = 0) const;

  /// Throws validation_error on the first violated precondition of `mode`.
  void validate(WienerMode mode, bool enforce_wideband_invariants = true) const;
};

struct WienerConfig {
  ApproxSpec solver = ApproxSpec::cipa(4);
  int inverse_iterations = 50;
  double inverse_rtol = 1e-12;
  int neumann_iterations = 2000;
  double neumann_rtol = 1e-12;
  /// K1 = G1 = 0 and H1 = tau 1; only meaningful when L^sym 1 = 0.
  bool enforce_wideband_invariants = true;
};

struct NeumannResult {
  Signal z;
  int iterations = 0;
  /// Contraction factor K / (K + p_min).
  double rate = 0.0;
  ApplyStats stats;
  /// w_0, ..., w_m when requested.
  std::vector<Signal> history;
};

struct WienerResult {
  Signal x;
  /// Output of the unregularized step (equals x when there is no regularization).
  Signal w;
  IterTrace inverse_trace;
  int neumann_iterations = 0;
  ApplyStats stats;
  std::vector<std::string> warnings;
};

/// Fixed iteration count ceil(log rtol / log rate), capped at m_max; 0 when rate is 0.
int neumann_iteration_count(double rate, double rtol, int m_max);

/// w_{m+1} = a w_0 + b w_m - a P^{-1/2} K P^{-1/2} w_m with a = p_min/(K+p_min), b = K/(K+p_min).
NeumannResult neumann_regularize(const WienerProblem& prob, const Signal& z2, int m_max, double rtol,
                                 bool keep_history = false);

/// w = (hr)(S) (h^2 r + g)(S)^{-1} y.
WienerResult wiener0_apply(const WienerProblem& prob, const Signal& y, const WienerConfig& config = {});
/// x = P^{-1/2} (I + P^{-1/2} K P^{-1/2})^{-1} P^{1/2} w with w from wiener0_apply.
WienerResult wiener_mse_apply(const WienerProblem& prob, const Signal& y, const WienerConfig& config = {});
/// Same pipeline with r read as the wide-band covariance; checks the unbiasedness invariants.
WienerResult wideband_wiener_apply(const WienerProblem& prob, const Signal& y, const WienerConfig& config = {});
/// z = (delta0^2 h^2 + g)(S)^{-1} y, x = delta0^2 H z.
WienerResult worstcase_wiener_apply(const WienerProblem& prob, const Signal& y, const WienerConfig& config = {});
/// (P + K)^{-1} P y through the Neumann iteration.
WienerResult tikhonov_apply(const WienerProblem& prob, const Signal& y, const WienerConfig& config = {});

// Dense closed forms; all throw above the dense limit.
namespace dense {

struct Matrices {
  Eigen::MatrixXd H, R, G, K, P;
};
Matrices materialize(const WienerProblem& prob, std::size_t limit = kDefaultDenseLimit);

Eigen::MatrixXd wiener0(const WienerProblem& prob);
Eigen::MatrixXd wiener_mse(const WienerProblem& prob);
Eigen::MatrixXd worstcase_wiener(const WienerProblem& prob);
Eigen::MatrixXd tikhonov(const WienerProblem& prob);

/// E(x - W_mse y) for a signal with mean `mean`: (P+K)^{-1}(HRH+G)^{-1}RHHK m + (HRH+G)^{-1}G m.
Eigen::VectorXd bias(const WienerProblem& prob, const Eigen::VectorXd& mean);

}  // namespace dense

/// tr(W^T (P+K) W (HRH + G)) - 2 tr(P W H R) + tr(P R).
double f_mse_eval(const WienerProblem& prob, const Eigen::MatrixXd& W);
/// tr(P (I - W_mse H) R).
double f_mse_min(const WienerProblem& prob);
/// tr(P (delta0^2 (WH - I)(WH - I)^T + W G W^T)).
double f_wmse_eval(const WienerProblem& prob, const Eigen::MatrixXd& W);
/// delta0^2 - delta0^4 tr((delta0^2 H^2 + G)^{-1} H P H).
double f_wmse_min(const WienerProblem& prob);
/// delta0^2 / N tr((delta0^2 H^2 + G)^{-1} G); valid for uniform P.
double f_wmse_min_uniform(const WienerProblem& prob);
/// delta0^2 sigma^2 / N sum_i 1 / (delta0^2 mu_i^2 + sigma^2) over singular values of H; requires G = sigma^2 I.
double f_wmse_min_singular(const WienerProblem& prob);

/// Row objective for unit u: delta0^2 ||H^T w - u||^2 + w^T G w; minimized by W_wmse^T u.
double f_wmse_row(const WienerProblem& prob, const Eigen::VectorXd& w, const Eigen::VectorXd& u);

struct Sandwich {
  double lower;
  double value;
  double upper;
};
/// F~(W) = delta0^2 lambda_max((WH - I)^T P (WH - I)) + tr(P W G W^T) between F_wmse/N and F_wmse.
Sandwich f_wmse_tilde_bounds(const WienerProblem& prob, const Eigen::MatrixXd& W);

}  // namespace gsp
