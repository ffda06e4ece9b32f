#include "gsp/signals.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace gsp {

GaussianSignalModel::GaussianSignalModel(PolyFilter covariance, double mean)
    : covariance_(std::move(covariance)), mean_(mean) {
  const SpectrumPtr& spec = covariance_.spectrum();
  if (!spec) throw validation_error("signal model: covariance filter needs the joint spectrum");
  Eigen::VectorXd vals = covariance_.spectral_values();
  const double worst = vals.minCoeff();
  if (worst < -1e-10) {
    std::ostringstream msg;
    msg << "signal model: covariance has negative spectrum (" << worst << ")";
    throw validation_error(msg.str());
  }
  vals = vals.cwiseMax(0.0).cwiseSqrt();
  factor_ = spec->basis * vals.asDiagonal() * spec->basis.transpose();
}

Signal GaussianSignalModel::sample(std::mt19937_64& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  Signal z(factor_.cols());
  for (auto& v : z) v = normal(rng);
  Signal x = factor_ * z;
  x.array() += mean_;
  return x;
}

Signal GaussianSignalModel::sample(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  return sample(rng);
}

int strip_index(double cx, double cy) {
  const double s = cx + cy;
  if (s < 0.5) return 0;
  if (s < 1.0) return 1;
  if (s < 1.5) return 2;
  return 3;
}

Signal four_strip(const std::vector<std::array<double, 2>>& coords) {
  if (coords.empty()) throw validation_error("four_strip: coordinates required");
  Signal x(static_cast<Eigen::Index>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const auto [cx, cy] = coords[i];
    x[static_cast<Eigen::Index>(i)] = strip_index(cx, cy) % 2 == 0 ? 0.5 - 2.0 * cx : 0.5 + cx * cx + cy * cy;
  }
  return x;
}

double snr(const Signal& truth, const Signal& estimate) {
  const double tn = truth.norm();
  if (tn == 0.0) throw validation_error("snr: zero reference signal");
  if (truth.size() != estimate.size()) throw validation_error("snr: length mismatch");
  const double err = (estimate - truth).norm();
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return -20.0 * std::log10(err / tn);
}

double isnr(const Signal& truth, const Signal& noise) {
  const double tn = truth.norm();
  if (tn == 0.0) throw validation_error("isnr: zero reference signal");
  if (noise.norm() == 0.0) return std::numeric_limits<double>::infinity();
  return -20.0 * std::log10(noise.norm() / tn);
}

}  // namespace gsp
