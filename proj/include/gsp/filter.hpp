#pragma once

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gsp/filter_schedule.hpp"
#include "gsp/graph.hpp"
#include "gsp/poly.hpp"

namespace gsp {

struct ApplyStats {
  std::size_t matvecs = 0;
  std::size_t rounds = 0;

  ApplyStats& operator+=(const ApplyStats& o) {
    matvecs += o.matvecs;
    rounds += o.rounds;
    return *this;
  }
};

inline constexpr std::size_t kDefaultDenseLimit = 2048;

/// Central backend: vectors (or column blocks) as Eigen objects, shifts applied as sparse row sweeps.
template <class V>
class CentralBackend {
 public:
  using Vec = V;

  CentralBackend(const std::vector<Shift>& shifts, ApplyStats& stats) : shifts_(shifts), stats_(stats) {}

  Vec copy(const Vec& v) const { return v; }
  Vec zeros_like(const Vec& v) const { return Vec::Zero(v.rows(), v.cols()); }
  void axpy(double a, const Vec& x, Vec& y) const { y += a * x; }
  void scale(Vec& v, double a) const { v *= a; }

  std::vector<Vec> shift_round(std::size_t k, std::span<const Vec* const> xs) {
    std::vector<Vec> out;
    out.reserve(xs.size());
    for (const Vec* x : xs) out.push_back(shifts_[k].apply(*x));
    stats_.matvecs += xs.size();
    stats_.rounds += 1;
    return out;
  }

 private:
  const std::vector<Shift>& shifts_;
  ApplyStats& stats_;
};

/**
 * H = h(S_1, ..., S_d) for commuting symmetric shifts.
 *
 * apply() is matrix-free and costs sum_k L_k shift rounds; spectral queries
 * require the joint spectrum.
 */
class PolyFilter {
 public:
  PolyFilter(std::vector<Shift> shifts, MultiPoly poly);
  PolyFilter(SpectrumPtr spectrum, MultiPoly poly);

  const MultiPoly& poly() const { return poly_; }
  const std::vector<Shift>& shifts() const { return *shifts_; }
  const SpectrumPtr& spectrum() const { return spectrum_; }
  std::size_t order() const { return shifts_->front().order(); }
  std::size_t dim() const { return shifts_->size(); }

  /// Communication rounds per application: sum of the degree bounds.
  std::size_t rounds() const;

  Signal apply(const Signal& x, ApplyStats* stats = nullptr) const;

  /// Dense n x n matrix of the filter, built by the same schedule on the identity.
  Eigen::MatrixXd materialize(std::size_t dense_limit = kDefaultDenseLimit) const;

  /// h(lambda_i) for every joint eigenvalue.
  Eigen::VectorXd spectral_values() const;
  std::pair<double, double> spectral_range() const;

  /// Same shifts, different polynomial.
  PolyFilter with_poly(MultiPoly poly) const;

 private:
  PolyFilter(std::shared_ptr<const std::vector<Shift>> shifts, SpectrumPtr spectrum, MultiPoly poly);

  std::shared_ptr<const std::vector<Shift>> shifts_;
  SpectrumPtr spectrum_;
  MultiPoly poly_;
};

}  // namespace gsp
