#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gsp/errors.hpp"

namespace gsp {

// Axis-aligned box [lower, upper] in R^d.
struct Cube {
  std::vector<double> lower;
  std::vector<double> upper;

  Cube() = default;
  Cube(std::vector<double> lo, std::vector<double> hi) : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size() || lower.empty()) {
      throw validation_error("cube: bounds must be nonempty and of equal dimension");
    }
    for (std::size_t k = 0; k < lower.size(); ++k) {
      if (!(lower[k] < upper[k])) throw validation_error("cube: require lower < upper on every axis");
    }
  }

  static Cube uniform(std::size_t d, double lo, double hi) {
    return Cube(std::vector<double>(d, lo), std::vector<double>(d, hi));
  }

  std::size_t dim() const { return lower.size(); }
  double width(std::size_t k) const { return upper[k] - lower[k]; }

  double volume() const {
    double v = 1.0;
    for (std::size_t k = 0; k < dim(); ++k) v *= width(k);
    return v;
  }

  bool contains(std::span<const double> t) const {
    if (t.size() != dim()) return false;
    for (std::size_t k = 0; k < dim(); ++k) {
      if (t[k] < lower[k] || t[k] > upper[k]) return false;
    }
    return true;
  }

  friend bool operator==(const Cube&, const Cube&) = default;
};

}  // namespace gsp
