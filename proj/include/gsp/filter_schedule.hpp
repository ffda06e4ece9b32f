#pragma once

#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gsp/poly.hpp"

namespace gsp {

/**
 * Backend for the shift-recurrence schedule. A backend owns the vector
 * representation; `shift_round(k, xs)` returns S_k x for every x in xs and
 * counts as one communication round regardless of how many vectors it carries.
 */
template <class B>
concept ScheduleBackend = requires(B& b, typename B::Vec& v, const typename B::Vec& cv, std::size_t k, double a,
                                   std::span<const typename B::Vec* const> xs) {
  { b.copy(cv) } -> std::same_as<typename B::Vec>;
  { b.zeros_like(cv) } -> std::same_as<typename B::Vec>;
  b.axpy(a, cv, v);
  b.scale(v, a);
  { b.shift_round(k, xs) } -> std::same_as<std::vector<typename B::Vec>>;
};

namespace detail {

// Per-axis affine map t -> sigma t + tau taking the cube to [-1, 1] (identity for monomials).
struct AxisMap {
  double sigma = 1.0;
  double tau = 0.0;
};

// One step of a recurrence: out_c = slope_c * (sigma S_k + tau) v_c + offset_c * v_c.
template <ScheduleBackend B>
std::vector<typename B::Vec> affine_round(B& b, std::size_t axis, const AxisMap& map,
                                          const std::vector<const typename B::Vec*>& in, double slope,
                                          double offset) {
  std::vector<typename B::Vec> out = b.shift_round(axis, std::span<const typename B::Vec* const>(in));
  for (std::size_t c = 0; c < in.size(); ++c) {
    b.scale(out[c], slope * map.sigma);
    b.axpy(slope * map.tau + offset, *in[c], out[c]);
  }
  return out;
}

}  // namespace detail

/**
 * Evaluates poly(S_1, ..., S_d) x with sum_k L_k communication rounds.
 *
 * The last axis is expanded first: its basis vectors phi_j(S_d) x are built
 * by successive shifts (monomial) or the forward three-term recurrence
 * (Jacobi). Remaining axes are folded from the back by Horner (monomial) or
 * Clenshaw (Jacobi) steps with vector-valued coefficients; every chain of
 * one axis advances in the same round.
 */
template <ScheduleBackend B>
typename B::Vec apply_schedule(B& b, const MultiPoly& poly, const typename B::Vec& x) {
  using Vec = typename B::Vec;
  const std::size_t d = poly.dim();
  const auto& deg = poly.degrees();
  const bool jac = poly.is_jacobi();
  std::vector<detail::AxisMap> maps(d);
  std::optional<JacobiBasis> basis;
  if (jac) {
    const auto& tag = poly.jacobi();
    basis.emplace(tag.alpha, tag.beta);
    for (std::size_t k = 0; k < d; ++k) {
      maps[k].sigma = 2.0 / tag.cube.width(k);
      maps[k].tau = -(tag.cube.lower[k] + tag.cube.upper[k]) / tag.cube.width(k);
    }
  }
  // Recurrence P_{j+1} = (A_j t - B_j) P_j + C_j P_{j-1}, expressed as slope/offset/prev weights.
  auto slope = [&](int j) { return j == 0 ? basis->p1_slope() : basis->recurrence(j + 1).a1; };
  auto offset = [&](int j) { return j == 0 ? basis->p1_offset() : -basis->recurrence(j + 1).a2; };
  auto prev_weight = [&](int j) { return -basis->recurrence(j + 1).a3; };

  const std::size_t last = d - 1;
  const int l_last = deg[last];

  // Stage 1: phi_j(S_last) x.
  std::vector<Vec> phi;
  phi.reserve(static_cast<std::size_t>(l_last) + 1);
  phi.push_back(b.copy(x));
  for (int j = 1; j <= l_last; ++j) {
    std::vector<const Vec*> in{&phi.back()};
    if (!jac) {
      phi.push_back(std::move(b.shift_round(last, std::span<const Vec* const>(in))[0]));
    } else {
      Vec next = std::move(detail::affine_round(b, last, maps[last], in, slope(j - 1), offset(j - 1))[0]);
      if (j >= 2) b.axpy(prev_weight(j - 1), phi[static_cast<std::size_t>(j - 2)], next);
      phi.push_back(std::move(next));
    }
  }

  // Contract the last axis against the coefficient tensor.
  const std::size_t width = static_cast<std::size_t>(l_last) + 1;
  const std::size_t combos = poly.coeffs().size() / width;
  std::vector<Vec> q;
  q.reserve(combos);
  for (std::size_t c = 0; c < combos; ++c) {
    Vec acc = b.zeros_like(x);
    for (std::size_t j = 0; j < width; ++j) {
      const double coef = poly.coeffs()[c * width + j];
      if (coef != 0.0) b.axpy(coef, phi[j], acc);
    }
    q.push_back(std::move(acc));
  }
  phi.clear();

  // Fold the remaining axes from the back.
  for (std::size_t axis = last; axis-- > 0;) {
    const int l = deg[axis];
    const std::size_t w = static_cast<std::size_t>(l) + 1;
    const std::size_t chains = q.size() / w;
    auto coef = [&](std::size_t c, int j) -> const Vec& { return q[c * w + static_cast<std::size_t>(j)]; };
    std::vector<Vec> result;
    result.reserve(chains);
    if (l == 0) {
      for (std::size_t c = 0; c < chains; ++c) result.push_back(b.copy(coef(c, 0)));
    } else if (!jac) {
      std::vector<Vec> acc;
      for (std::size_t c = 0; c < chains; ++c) acc.push_back(b.copy(coef(c, l)));
      for (int j = l - 1; j >= 0; --j) {
        std::vector<const Vec*> in;
        for (auto& a : acc) in.push_back(&a);
        std::vector<Vec> shifted = b.shift_round(axis, std::span<const Vec* const>(in));
        for (std::size_t c = 0; c < chains; ++c) b.axpy(1.0, coef(c, j), shifted[c]);
        acc = std::move(shifted);
      }
      result = std::move(acc);
    } else {
      // Clenshaw: b_j = q_j + alpha_j(S) b_{j+1} + C_{j+1} b_{j+2}; result = q_0 + alpha_0(S) b_1 + C_1 b_2.
      std::vector<Vec> b1, b2;
      for (std::size_t c = 0; c < chains; ++c) b1.push_back(b.copy(coef(c, l)));
      bool have_b2 = false;
      for (int j = l - 1; j >= 0; --j) {
        std::vector<const Vec*> in;
        for (auto& v : b1) in.push_back(&v);
        std::vector<Vec> next = detail::affine_round(b, axis, maps[axis], in, slope(j), offset(j));
        for (std::size_t c = 0; c < chains; ++c) {
          b.axpy(1.0, coef(c, j), next[c]);
          if (have_b2) b.axpy(prev_weight(j + 1), b2[c], next[c]);
        }
        b2 = std::move(b1);
        b1 = std::move(next);
        have_b2 = true;
      }
      result = std::move(b1);
    }
    q = std::move(result);
  }
  return std::move(q.front());
}

}  // namespace gsp
