#include "activecover/distribution.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "activecover/rng.hpp"

namespace activecover {

namespace {

constexpr std::size_t kRejectionCap = 1000000;  // per-point attempt budget

void validate_side(const std::vector<ComponentSpec>& comps, std::size_t dim, const char* side) {
  if (comps.empty()) {
    throw ArgumentError(std::string("DistributionSpec: ") + side +
                        " components must be nonempty");
  }
  double total = 0.0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const ComponentSpec& comp = comps[c];
    comp.region.validate();
    if (comp.region.dim() != dim) {
      throw ArgumentError(std::string("DistributionSpec: ") + side + " component " +
                          std::to_string(c) + " has dimension " +
                          std::to_string(comp.region.dim()) + ", spec has " +
                          std::to_string(dim));
    }
    if (!(comp.weight > 0.0 && comp.weight <= 1.0)) {
      throw ArgumentError(std::string("DistributionSpec: ") + side + " component " +
                          std::to_string(c) + " weight must be in (0,1]");
    }
    if (comp.density == DensityKind::kTruncatedGaussian) {
      if (comp.mean.size() != dim || comp.stddev.size() != dim) {
        throw ArgumentError(std::string("DistributionSpec: ") + side + " component " +
                            std::to_string(c) +
                            " truncated Gaussian needs mean and stddev of length D");
      }
      for (const double s : comp.stddev) {
        if (!(s > 0.0)) {
          throw ArgumentError(std::string("DistributionSpec: ") + side + " component " +
                              std::to_string(c) + " stddev entries must be positive");
        }
      }
    }
    total += comp.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ArgumentError(std::string("DistributionSpec: ") + side +
                        " component weights must sum to 1 (got " + std::to_string(total) + ")");
  }
}

std::size_t choose_component(const std::vector<ComponentSpec>& comps, Rng& rng) {
  if (comps.size() == 1) return 0;
  const double u = rng.next_double();
  double cum = 0.0;
  for (std::size_t c = 0; c + 1 < comps.size(); ++c) {
    cum += comps[c].weight;
    if (u < cum) return c;
  }
  return comps.size() - 1;
}

void sample_uniform_box(const Region& region, Rng& rng, double* out) {
  for (std::size_t i = 0; i < region.low.size(); ++i) {
    out[i] = region.low[i] + rng.next_double() * (region.high[i] - region.low[i]);
  }
}

// Uniform in a ball: isotropic direction from D normals, radius R * U^{1/D}.
void sample_uniform_ball(const Region& region, Rng& rng, double* out) {
  const std::size_t dim = region.center.size();
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      out[i] = rng.next_normal();
      norm2 += out[i] * out[i];
    }
  } while (norm2 == 0.0);
  const double r =
      region.radius * std::pow(rng.next_double(), 1.0 / static_cast<double>(dim));
  const double scale = r / std::sqrt(norm2);
  for (std::size_t i = 0; i < dim; ++i) out[i] = region.center[i] + out[i] * scale;
}

void sample_component(const ComponentSpec& comp, Rng& rng, double* out, const char* side,
                      std::size_t index) {
  const std::size_t dim = comp.region.dim();
  if (comp.density == DensityKind::kUniform) {
    if (comp.region.kind == RegionKind::kBox) {
      sample_uniform_box(comp.region, rng, out);
    } else {
      sample_uniform_ball(comp.region, rng, out);
    }
    return;
  }
  // Truncated Gaussian: rejection against the region with a hard attempt cap.
  for (std::size_t attempt = 0; attempt < kRejectionCap; ++attempt) {
    for (std::size_t i = 0; i < dim; ++i) {
      out[i] = comp.mean[i] + comp.stddev[i] * rng.next_normal();
    }
    if (comp.region.contains({out, dim})) return;
  }
  throw SamplingError(std::string(side) + " component " + std::to_string(index) +
                      ": truncated-Gaussian rejection exceeded " +
                      std::to_string(kRejectionCap) + " attempts");
}

}  // namespace

void DistributionSpec::validate() const {
  if (dim == 0) throw ArgumentError("DistributionSpec: dim must be positive");
  if (!(mixture_p > 0.0 && mixture_p < 1.0)) {
    throw ArgumentError("DistributionSpec: mixture_p must lie in (0,1)");
  }
  validate_side(positive_components, dim, "positive");
  validate_side(negative_components, dim, "negative");
}

bool contains_positive_support(const DistributionSpec& spec, std::span<const double> x) {
  if (x.size() != spec.dim) {
    throw ArgumentError("contains_positive_support: point has dimension " +
                        std::to_string(x.size()) + ", spec has " + std::to_string(spec.dim));
  }
  for (const ComponentSpec& comp : spec.positive_components) {
    if (comp.region.contains(x)) return true;
  }
  return false;
}

Dataset sample_dataset(const DistributionSpec& spec, std::size_t n, std::uint64_t seed) {
  spec.validate();
  if (n == 0) throw ArgumentError("sample_dataset: n must be positive");

  Dataset data;
  data.dim = spec.dim;
  data.points.resize(n * spec.dim);
  data.labels.resize(n);
  data.in_support.resize(n);
  data.seed = seed;

  Rng rng(seed, kStreamDataset);
  for (std::size_t i = 0; i < n; ++i) {
    const bool positive = rng.next_double() < spec.mixture_p;
    const auto& side = positive ? spec.positive_components : spec.negative_components;
    const std::size_t c = choose_component(side, rng);
    double* out = data.points.data() + i * spec.dim;
    sample_component(side[c], rng, out, positive ? "positive" : "negative", c);
    data.labels[i] = positive ? 1 : 0;
    data.in_support[i] = contains_positive_support(spec, {out, spec.dim})
                             ? SupportFlag::kYes
                             : SupportFlag::kNo;
  }
  return data;
}

Preset preset_from_name(std::string_view name) {
  if (name == "cube-overlap") return Preset::kCubeOverlap;
  if (name == "two-clusters") return Preset::kTwoClusters;
  if (name == "ball-in-sea") return Preset::kBallInSea;
  throw ArgumentError("unknown preset '" + std::string(name) +
                      "' (expected cube-overlap, two-clusters, or ball-in-sea)");
}

std::string_view to_string(Preset preset) {
  switch (preset) {
    case Preset::kCubeOverlap: return "cube-overlap";
    case Preset::kTwoClusters: return "two-clusters";
    case Preset::kBallInSea: return "ball-in-sea";
  }
  return "?";
}

DistributionSpec make_preset(Preset preset, std::size_t dim, double p) {
  if (dim == 0) throw ArgumentError("make_preset: dim must be positive");
  if (!(p > 0.0 && p < 1.0)) throw ArgumentError("make_preset: p must lie in (0,1)");

  const auto uniform_box = [](std::vector<double> low, std::vector<double> high,
                              double weight) {
    ComponentSpec comp;
    comp.region = Region::box(std::move(low), std::move(high));
    comp.density = DensityKind::kUniform;
    comp.weight = weight;
    return comp;
  };

  DistributionSpec spec;
  spec.dim = dim;
  spec.mixture_p = p;

  switch (preset) {
    case Preset::kCubeOverlap: {
      spec.positive_components.push_back(uniform_box(std::vector<double>(dim, 0.0),
                                                     std::vector<double>(dim, 1.0), 1.0));
      spec.negative_components.push_back(uniform_box(std::vector<double>(dim, -1.0),
                                                     std::vector<double>(dim, 2.0), 1.0));
      break;
    }
    case Preset::kTwoClusters: {
      std::vector<double> low2(dim, 0.0), high2(dim, 1.0);
      low2[0] = 3.0;
      high2[0] = 4.0;
      spec.positive_components.push_back(uniform_box(std::vector<double>(dim, 0.0),
                                                     std::vector<double>(dim, 1.0), 0.5));
      spec.positive_components.push_back(uniform_box(std::move(low2), std::move(high2), 0.5));
      std::vector<double> nlow(dim, -1.0), nhigh(dim, 2.0);
      nhigh[0] = 5.0;
      spec.negative_components.push_back(uniform_box(std::move(nlow), std::move(nhigh), 1.0));
      break;
    }
    case Preset::kBallInSea: {
      ComponentSpec pos;
      pos.region = Region::ball(std::vector<double>(dim, 0.0), 1.0);
      pos.density = DensityKind::kUniform;
      pos.weight = 1.0;
      spec.positive_components.push_back(std::move(pos));
      spec.negative_components.push_back(uniform_box(std::vector<double>(dim, -3.0),
                                                     std::vector<double>(dim, 3.0), 1.0));
      break;
    }
  }
  spec.validate();
  return spec;
}

DistributionSpec make_preset(std::string_view name, std::size_t dim, double p) {
  return make_preset(preset_from_name(name), dim, p);
}

}  // namespace activecover
