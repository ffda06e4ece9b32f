#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gsp/cube.hpp"

namespace gsp {

/**
 * Jacobi polynomials P_n^{(alpha, beta)} on [-1, 1].
 *
 * P_0 = 1, P_1 = ((alpha+beta+2)/2) t + (alpha-beta)/2 and for n >= 2
 *   P_n = (a_{n,1} t - a_{n,2}) P_{n-1} - a_{n,3} P_{n-2}.
 * Orthogonal against w(t) = (1-t)^alpha (1+t)^beta.
 */
class JacobiBasis {
 public:
  struct Recurrence {
    double a1;
    double a2;
    double a3;
  };

  JacobiBasis(double alpha, double beta);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  /// Coefficients of the three-term recurrence, valid for n >= 2.
  Recurrence recurrence(int n) const;
  double p1_slope() const { return 0.5 * (alpha_ + beta_ + 2.0); }
  double p1_offset() const { return 0.5 * (alpha_ - beta_); }

  double eval(int n, double t) const;
  /// Writes P_0(t), ..., P_{out.size()-1}(t).
  void eval_all(double t, std::span<double> out) const;

  double weight(double t) const;
  /// Squared norm gamma_n = int_{-1}^{1} P_n^2 w, evaluated in the log domain.
  double norm(int n) const;
  double log_norm(int n) const;
  /// int_{-1}^{1} w = 2^{alpha+beta+1} B(alpha+1, beta+1).
  double weight_integral() const { return norm(0); }

  friend bool operator==(const JacobiBasis&, const JacobiBasis&) = default;

 private:
  double alpha_;
  double beta_;
};

double jacobi_eval(const JacobiBasis& basis, int n, double t);

/// ||P_{n; mu, nu}||^2 = 2^{-d} |cube| prod_i gamma_{n_i}.
double jacobi_norm(const JacobiBasis& basis, std::span<const int> n, const Cube& cube);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// m-point Gauss-Jacobi rule on [-1, 1] (Golub-Welsch).
QuadratureRule gauss_jacobi(const JacobiBasis& basis, int m);

/// Rescaled Chebyshev points (nu+mu)/2 + ((nu-mu)/2) cos((j-1/2) pi/(M+1)), j = 1..M+1.
std::vector<double> chebyshev_nodes_1d(int degree, double lower, double upper);
/// Tensor grid of (M+1)^d points, row-major (last axis fastest).
std::vector<std::vector<double>> chebyshev_nodes(int degree, const Cube& cube);

struct JacobiTag {
  double alpha;
  double beta;
  Cube cube;

  JacobiBasis basis() const { return {alpha, beta}; }
  friend bool operator==(const JacobiTag&, const JacobiTag&) = default;
};

/// Calls fn(index, flat) over every multi-index of the box prod [0, L_k], row-major.
void for_each_index(std::span<const int> degrees, const std::function<void(std::span<const int>, std::size_t)>& fn);

/**
 * Multivariate polynomial with a dense coefficient tensor over the box
 * prod_k [0, L_k], stored row-major (last axis fastest).
 *
 * Monomial basis: h(t) = sum h_l t^l. Jacobi basis: sum c_n P_{n; mu, nu}(t)
 * with the rescaled tensor Jacobi polynomials of the tagged cube.
 */
class MultiPoly {
 public:
  MultiPoly(std::vector<int> degrees, std::vector<double> coeffs, std::optional<JacobiTag> jacobi = std::nullopt);

  static MultiPoly constant(std::size_t dim, double value);
  static MultiPoly univariate(std::vector<double> coeffs);
  /// t_axis as a polynomial in `dim` variables.
  static MultiPoly coordinate(std::size_t dim, std::size_t axis);

  std::size_t dim() const { return degrees_.size(); }
  const std::vector<int>& degrees() const { return degrees_; }
  int total_degree_bound() const;
  std::span<const double> coeffs() const { return coeffs_; }
  double coeff(std::span<const int> index) const;
  std::size_t flat_index(std::span<const int> index) const;

  bool is_jacobi() const { return jacobi_.has_value(); }
  const JacobiTag& jacobi() const;
  const std::optional<JacobiTag>& basis_tag() const { return jacobi_; }

  double operator()(std::span<const double> t) const;
  double operator()(double t) const;

 private:
  double eval_monomial(std::span<const double> t) const;
  double eval_jacobi(std::span<const double> t) const;

  std::vector<int> degrees_;
  std::vector<double> coeffs_;
  std::optional<JacobiTag> jacobi_;
};

/// Converts a Jacobi-basis polynomial to monomial coefficients (identity for monomial input).
MultiPoly to_monomial(const MultiPoly& p);

// Exact coefficient arithmetic; Jacobi operands are converted to monomial first.
MultiPoly operator+(const MultiPoly& a, const MultiPoly& b);
MultiPoly operator-(const MultiPoly& a, const MultiPoly& b);
MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
MultiPoly operator*(double s, const MultiPoly& a);

/// "d=<dim>; L=<l1,...,ld>; coeffs=<row-major list>" (monomial basis).
std::string format_poly(const MultiPoly& p);
MultiPoly parse_poly(std::string_view text);

/// Uniform tensor grid over the cube; `density` points per axis (0 selects 2001/201/51 for d = 1/2/3, 21 beyond).
std::size_t default_grid_density(std::size_t dim);
void for_each_grid_point(const Cube& cube, std::size_t density, const std::function<void(std::span<const double>)>& fn);

}  // namespace gsp
