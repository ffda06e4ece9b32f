#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "gsp/filter.hpp"
#include "gsp/poly.hpp"

namespace gsp {

enum class ApproxKind { jpa, cipa, gd0 };

/// Inverse-approximation family: "jpa:<alpha>:<beta>:<M>", "cipa:<M>" or "gd0".
struct ApproxSpec {
  ApproxKind kind = ApproxKind::jpa;
  double alpha = 0.0;
  double beta = 0.0;
  int degree = 0;

  static ApproxSpec jpa(double alpha, double beta, int degree);
  static ApproxSpec cipa(int degree);
  static ApproxSpec gd0();
  static ApproxSpec parse(std::string_view text);

  /// "JPA(0.5,-0.5)", "CIPA" or "GD0".
  std::string family() const;
  std::string to_string() const;
};

/// Throws unless h keeps one strict sign over the uniform sample grid of the cube.
void check_nonvanishing(const MultiPoly& h, const Cube& cube, std::size_t density = 0);

inline constexpr int kCoefficientNodes = 64;

/**
 * Jacobi-series partial sum g_M of 1/h on the cube, coefficients
 *   c_n = (prod_k gamma_{n_k})^{-1} sum_j w_j P_n(s_j) / h(t(s_j))
 * over a tensor Gauss-Jacobi rule. The rule is recomputed with twice the
 * nodes and any coefficient change above 1e-8 of max|c| is a numerical_error.
 */
MultiPoly jacobi_coefficients(const MultiPoly& h, const Cube& cube, double alpha, double beta, int degree,
                              int nodes = kCoefficientNodes);

/// Tensor Chebyshev interpolant C_M of 1/h at the rescaled Chebyshev nodes, in the Jacobi(-1/2,-1/2) basis.
MultiPoly cheb_interp(const MultiPoly& h, const Cube& cube, int degree);

/// g_M for the JPA and CIPA families (GD0 has no polynomial approximant).
MultiPoly build_approximant(const ApproxSpec& spec, const MultiPoly& h, const Cube& cube);

/// max |1 - g(t) h(t)| over the uniform grid (density 0 selects the per-dimension default).
double sup_error(const MultiPoly& h, const MultiPoly& g, const Cube& cube, std::size_t density = 0);

/// b_0, ..., b_{max_degree} for a family; spec.degree is ignored.
std::vector<double> error_curve(const MultiPoly& h, const Cube& cube, const ApproxSpec& family, int max_degree,
                                std::size_t density = 0);

/// max_i |1 - g(lambda_i) h(lambda_i)| over the joint spectrum.
double contraction_factor(const PolyFilter& h, const PolyFilter& g);

/// E(0) = 1 for zero initial guess; index m holds the state after m iterations.
struct IterTrace {
  std::vector<double> residual;
  std::vector<double> rel_error;
  std::vector<std::size_t> matvecs;
  double wall_seconds = 0.0;

  std::size_t iterations() const { return residual.empty() ? 0 : residual.size() - 1; }
  void write_csv(std::ostream& out) const;
};

class divergence_error : public numerical_error {
 public:
  divergence_error(const std::string& what, IterTrace trace) : numerical_error(what), trace_(std::move(trace)) {}
  const IterTrace& trace() const { return trace_; }

 private:
  IterTrace trace_;
};

struct SolveOptions {
  int max_iterations = 50;
  double rtol = 1e-12;
  std::optional<Signal> initial;
  /// Ground truth for E(m).
  std::optional<Signal> truth;
  /// Called after every iteration with (m, x^{(m)}).
  std::function<void(int, const Signal&)> observer;
};

struct SolveResult {
  Signal x;
  IterTrace trace;
  ApplyStats stats;
  std::vector<std::string> warnings;
};

using LinearMap = std::function<Signal(const Signal&, ApplyStats&)>;

/// x^{(m)} = x^{(m-1)} - G (H x^{(m-1)} - y); stops at max_iterations or relative residual <= rtol.
SolveResult quasi_newton_solve(const LinearMap& h, const LinearMap& g, const Signal& y, const SolveOptions& options);

/**
 * Polynomial-filter form. Adds a warning carrying b_M and rho_hat when the
 * sufficient condition b_M < 1 fails; the iteration still runs.
 */
SolveResult quasi_newton_solve(const PolyFilter& h, const PolyFilter& g, const Signal& y,
                               const SolveOptions& options = {});

/// Step size 2 / (min h + max h) over the joint spectrum; requires min h > 0.
double gd0_step(const PolyFilter& h);

SolveResult gd0_solve(const PolyFilter& h, const Signal& y, const SolveOptions& options = {});

/// The G filter used by a solver: g_M on the spectrum cube, or the constant GD0 step.
PolyFilter inverse_filter(const PolyFilter& h, const ApproxSpec& spec);

SolveResult solve(const PolyFilter& h, const ApproxSpec& spec, const Signal& y, const SolveOptions& options = {});

}  // namespace gsp
