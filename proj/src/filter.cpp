#include "gsp/filter.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace gsp {

namespace {

void check_shifts(const std::vector<Shift>& shifts, const MultiPoly& poly) {
  if (shifts.empty()) throw validation_error("filter: at least one shift required");
  if (poly.dim() != shifts.size()) {
    throw validation_error("filter: polynomial dimension " + std::to_string(poly.dim()) + " differs from shift count " +
                           std::to_string(shifts.size()));
  }
  for (const auto& s : shifts) {
    if (s.graph() != shifts.front().graph()) throw validation_error("filter: shifts live on different graphs");
  }
}

}  // namespace

PolyFilter::PolyFilter(std::shared_ptr<const std::vector<Shift>> shifts, SpectrumPtr spectrum, MultiPoly poly)
    : shifts_(std::move(shifts)), spectrum_(std::move(spectrum)), poly_(std::move(poly)) {
  check_shifts(*shifts_, poly_);
}

PolyFilter::PolyFilter(std::vector<Shift> shifts, MultiPoly poly)
    : PolyFilter(std::make_shared<const std::vector<Shift>>(std::move(shifts)), nullptr, std::move(poly)) {}

PolyFilter::PolyFilter(SpectrumPtr spectrum, MultiPoly poly)
    : PolyFilter(spectrum ? std::make_shared<const std::vector<Shift>>(spectrum->shifts)
                          : throw validation_error("filter: null spectrum"),
                 spectrum, std::move(poly)) {}

PolyFilter PolyFilter::with_poly(MultiPoly poly) const { return PolyFilter(shifts_, spectrum_, std::move(poly)); }

std::size_t PolyFilter::rounds() const {
  const auto& deg = poly_.degrees();
  return static_cast<std::size_t>(std::accumulate(deg.begin(), deg.end(), 0));
}

Signal PolyFilter::apply(const Signal& x, ApplyStats* stats) const {
  if (static_cast<std::size_t>(x.size()) != order()) {
    throw validation_error("filter apply: signal length " + std::to_string(x.size()) + " differs from graph order " +
                           std::to_string(order()));
  }
  ApplyStats local;
  CentralBackend<Eigen::VectorXd> backend(*shifts_, local);
  Signal y = apply_schedule(backend, poly_, x);
  if (stats) *stats += local;
  return y;
}

Eigen::MatrixXd PolyFilter::materialize(std::size_t dense_limit) const {
  const std::size_t n = order();
  if (n > dense_limit) {
    throw validation_error("materialize: order " + std::to_string(n) + " exceeds dense limit " +
                           std::to_string(dense_limit));
  }
  ApplyStats local;
  CentralBackend<Eigen::MatrixXd> backend(*shifts_, local);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  return apply_schedule(backend, poly_, id);
}

Eigen::VectorXd PolyFilter::spectral_values() const {
  if (!spectrum_) throw validation_error("filter: spectral query without joint spectrum");
  const std::size_t n = spectrum_->order();
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) v[static_cast<Eigen::Index>(i)] = poly_(spectrum_->point(i));
  return v;
}

std::pair<double, double> PolyFilter::spectral_range() const {
  const Eigen::VectorXd v = spectral_values();
  return {v.minCoeff(), v.maxCoeff()};
}

}  // namespace gsp
