#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "gsp/filter.hpp"

namespace gsp {

/**
 * Gaussian graph signal with covariance C = c(S_1, ..., S_d) and constant
 * mean m 1. The factor F = U diag(sqrt(max(c(lambda_i), 0))) U^T satisfies
 * F F^T = C and is cached at construction.
 */
class GaussianSignalModel {
 public:
  GaussianSignalModel(PolyFilter covariance, double mean);

  const PolyFilter& covariance() const { return covariance_; }
  double mean() const { return mean_; }
  const Eigen::MatrixXd& factor() const { return factor_; }

  /// mean 1 + F z with z standard normal.
  Signal sample(std::mt19937_64& rng) const;
  Signal sample(std::uint64_t seed) const;

 private:
  PolyFilter covariance_;
  double mean_;
  Eigen::MatrixXd factor_;
};

/// Zero-mean (stationary) or constant-mean (wide-band) signal with correlation filter r.
class StationaryModel : public GaussianSignalModel {
 public:
  explicit StationaryModel(PolyFilter correlation, double mean = 0.0)
      : GaussianSignalModel(std::move(correlation), mean) {}
};

/// Zero-mean additive noise with covariance filter g.
class NoiseModel : public GaussianSignalModel {
 public:
  explicit NoiseModel(PolyFilter covariance) : GaussianSignalModel(std::move(covariance), 0.0) {}
};

/// Strip index 0..3 of a point by c_x + c_y in [0, .5), [.5, 1), [1, 1.5), [1.5, 2]; boundaries go up.
int strip_index(double cx, double cy);

/// 0.5 - 2 c_x on strips 0 and 2, 0.5 + c_x^2 + c_y^2 on strips 1 and 3.
Signal four_strip(const std::vector<std::array<double, 2>>& coords);

/// -20 log10(||x_hat - x|| / ||x||); +infinity for exact recovery.
double snr(const Signal& truth, const Signal& estimate);
/// -20 log10(||noise|| / ||x||).
double isnr(const Signal& truth, const Signal& noise);

}  // namespace gsp
