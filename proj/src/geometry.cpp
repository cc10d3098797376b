#include "activecover/geometry.hpp"

#include <string>

namespace activecover {

Region Region::box(std::vector<double> low, std::vector<double> high) {
  Region r;
  r.kind = RegionKind::kBox;
  r.low = std::move(low);
  r.high = std::move(high);
  r.validate();
  return r;
}

Region Region::ball(std::vector<double> center, double radius) {
  Region r;
  r.kind = RegionKind::kBall;
  r.center = std::move(center);
  r.radius = radius;
  r.validate();
  return r;
}

bool Region::contains(std::span<const double> x) const {
  if (x.size() != dim()) {
    throw ArgumentError("Region::contains: point has dimension " + std::to_string(x.size()) +
                        ", region has " + std::to_string(dim()));
  }
  if (kind == RegionKind::kBox) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] < low[i] || x[i] > high[i]) return false;
    }
    return true;
  }
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - center[i];
    d2 += d * d;
  }
  return d2 <= radius * radius;
}

void Region::validate() const {
  if (kind == RegionKind::kBox) {
    if (low.empty() || low.size() != high.size()) {
      throw ArgumentError("Region: box bounds must be nonempty and of equal length");
    }
    for (std::size_t i = 0; i < low.size(); ++i) {
      if (!(low[i] < high[i])) {
        throw ArgumentError("Region: box requires low[" + std::to_string(i) + "] < high[" +
                            std::to_string(i) + "]");
      }
    }
  } else {
    if (center.empty()) throw ArgumentError("Region: ball center must be nonempty");
    if (!(radius > 0.0)) throw ArgumentError("Region: ball radius must be positive");
  }
}

}  // namespace activecover
