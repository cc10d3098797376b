#pragma once

// Mixture distributions over R^D and the pools sampled from them.
// A DistributionSpec is the two-sided mixture p * P_pos + (1-p) * P_neg,
// each side a weighted list of components (region + density). The union of
// the positive component regions is the positive support; a pool point is
// worth querying exactly when it falls inside that union, and sampled
// datasets carry this ground truth as a per-point flag.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "activecover/geometry.hpp"

namespace activecover {

enum class DensityKind { kUniform, kTruncatedGaussian };

struct ComponentSpec {
  Region region;
  DensityKind density = DensityKind::kUniform;
  std::vector<double> mean;    // truncated Gaussian only
  std::vector<double> stddev;  // truncated Gaussian only, per-axis, > 0
  double weight = 1.0;         // in (0, 1]; weights of a side sum to 1
};

struct DistributionSpec {
  std::size_t dim = 0;
  double mixture_p = 0.5;  // probability a point is positive, in (0, 1)
  std::vector<ComponentSpec> positive_components;
  std::vector<ComponentSpec> negative_components;

  void validate() const;
};

enum class SupportFlag : std::uint8_t { kNo = 0, kYes = 1, kUnknown = 2 };

struct Dataset {
  std::size_t dim = 0;
  std::vector<double> points;  // n * dim, row-major
  std::vector<std::uint8_t> labels;            // 1 = positive
  std::vector<SupportFlag> in_support;         // ground truth when sampled
  std::optional<std::uint64_t> seed;           // absent for ingested data

  std::size_t size() const noexcept { return labels.size(); }

  std::span<const double> point(std::size_t i) const noexcept {
    return {points.data() + i * dim, dim};
  }

  bool support_known() const noexcept {
    for (const SupportFlag f : in_support) {
      if (f == SupportFlag::kUnknown) return false;
    }
    return true;
  }

  std::size_t positive_count() const noexcept {
    std::size_t c = 0;
    for (const std::uint8_t l : labels) c += l;
    return c;
  }
};

// True iff x lies in any positive component region (closed membership).
bool contains_positive_support(const DistributionSpec& spec, std::span<const double> x);

// Draws n i.i.d. points: label positive with probability p, component by
// weight, point by the component's density; fills in_support from the
// ground-truth membership test. Bit-for-bit deterministic given (spec, n, seed).
Dataset sample_dataset(const DistributionSpec& spec, std::size_t n, std::uint64_t seed);

enum class Preset { kCubeOverlap, kTwoClusters, kBallInSea };

Preset preset_from_name(std::string_view name);
std::string_view to_string(Preset preset);

// Built-in benchmark geometries:
//   cube-overlap: positives uniform on [0,1]^D, negatives uniform on [-1,2]^D.
//   two-clusters: positives uniform on [0,1]^D and [3,4]x[0,1]^{D-1} (equal
//                 weight), negatives uniform on [-1,5]x[-1,2]^{D-1}.
//   ball-in-sea:  positives uniform on the unit ball B(0,1), negatives
//                 uniform on [-3,3]^D.
DistributionSpec make_preset(Preset preset, std::size_t dim, double p);
DistributionSpec make_preset(std::string_view name, std::size_t dim, double p);

}  // namespace activecover
