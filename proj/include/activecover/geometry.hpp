#pragma once

// Support regions: axis-aligned boxes and Euclidean balls in R^D.
// Membership is closed (boundary points are members) with no tolerance,
// so the ground-truth support oracle is deterministic.

#include <cstddef>
#include <span>
#include <vector>

#include "activecover/errors.hpp"

namespace activecover {

enum class RegionKind { kBox, kBall };

struct Region {
  RegionKind kind = RegionKind::kBox;
  std::vector<double> low;     // box: lower corner
  std::vector<double> high;    // box: upper corner, low[i] < high[i]
  std::vector<double> center;  // ball center
  double radius = 0.0;         // ball radius, > 0

  static Region box(std::vector<double> low, std::vector<double> high);
  static Region ball(std::vector<double> center, double radius);

  std::size_t dim() const noexcept {
    return kind == RegionKind::kBox ? low.size() : center.size();
  }

  bool contains(std::span<const double> x) const;

  void validate() const;
};

}  // namespace activecover
