#pragma once

// Sequential query strategies for retrieving every positive in a pool.
//
//   passive:         pre-committed uniform permutation of the whole pool.
//   offline:         label a uniform sample of size m, then the remainder in
//                    ascending min distance to the sample's positives; the
//                    scorer is frozen once (distances to explore positives only).
//   explore-commit:  same explore phase, but each commit step queries the
//                    unlabeled point closest to ANY positive found so far.
//   ucb:             each commit step draws uniformly from the active set
//                    {unlabeled i : min_dist[i] <= eps}, eps = sigma *
//                    ((ln l)^2 / l)^{1/D} with l = number of positives found;
//                    an empty active set falls back to one explore-commit
//                    step, flagged in the log.
//   oracle-greedy:   lowest-index unlabeled point inside the true support.
//   oracle-uniform:  uniform unlabeled point inside the true support.
//
// Ties in any distance comparison break toward the lowest index. Kinds with
// an explore phase that see no positive in the sample fall back to uniform
// without-replacement queries until the first positive arrives, then enter
// their normal commit policy. Oracle kinds require known support flags and
// are the only kinds allowed to read them.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "activecover/pool.hpp"
#include "activecover/rng.hpp"

namespace activecover {

enum class LearnerKind {
  kPassive,
  kOffline,
  kExploreCommit,
  kUcb,
  kOracleGreedy,
  kOracleUniform,
};

LearnerKind learner_kind_from_name(std::string_view name);
std::string_view to_string(LearnerKind kind);
bool has_explore_phase(LearnerKind kind);
bool is_oracle(LearnerKind kind);

struct LearnerConfig {
  LearnerKind kind = LearnerKind::kPassive;
  std::size_t initial_sample_m = 1;  // m, explore-phase kinds only
  double sigma = 1.0;                // UCB ball-radius scale, > 0
  std::uint64_t seed = 0;
};

// eps(l) = sigma * ((ln l)^2 / l)^{1/D}; natural log, eps(1) = 0.
double epsilon_radius(double sigma, std::size_t ell, std::size_t dim);

// ceil(n^{D/(D+1)}) clamped to [1, n], the m that balances the offline
// learner's explore and commit costs.
std::size_t recommended_m(std::size_t n, std::size_t dim);

// Folds one new positive into the per-point minimum-distance cache; O(n).
void min_dist_update(std::vector<double>& min_dist, const Pool& pool,
                     std::size_t new_positive_index);

enum class Phase { kExplore, kCommit };

struct LearnerState {
  std::vector<std::uint8_t> labeled;   // X_a as a bitmap
  std::size_t labeled_count = 0;
  std::vector<std::size_t> positives;  // X_p in discovery order
  std::vector<double> min_dist;        // exact min distance to X_p, +inf if empty
  Phase phase = Phase::kExplore;
  std::size_t step = 0;                // completed query/observe rounds
};

struct QueryChoice {
  std::size_t index = 0;
  bool fallback = false;  // off-policy step (empty active set, no positives yet)
};

struct ActiveSetView {
  double radius = 0.0;
  std::vector<std::size_t> members;  // unlabeled indices with min_dist <= radius
};

class Learner {
 public:
  // Pre-commits the explore order (or the full permutation for passive).
  // Throws ArgumentError on invalid m or sigma, CapabilityError for oracle
  // kinds on pools without known support flags.
  Learner(const LearnerConfig& config, const Pool& pool);

  // Picks the next index to label. Throws StateError when every point is
  // already labeled, ProtocolError when the previous query is unobserved.
  QueryChoice next_query(const Pool& pool);

  // Reveals the label of the index returned by the last next_query call.
  // The support hint is accepted for symmetry with the query capability of
  // oracle kinds; no current policy consumes it after labeling.
  void observe(const Pool& pool, std::size_t index, bool label,
               std::optional<bool> in_support_hint = std::nullopt);

  const LearnerState& state() const noexcept { return state_; }
  const LearnerConfig& config() const noexcept { return config_; }
  bool done() const noexcept { return state_.labeled_count == state_.labeled.size(); }

  // Current UCB active set, recomputed from state; radius is 0 for other kinds.
  ActiveSetView active_set(const Pool& pool) const;

  // The pre-committed explore order (passive: the full permutation).
  std::span<const std::size_t> precommitted() const noexcept { return precommitted_; }

 private:
  QueryChoice pick(const Pool& pool);
  std::size_t lowest_unlabeled() const;
  std::size_t argmin_min_dist() const;
  std::size_t uniform_unlabeled();
  void freeze_offline_order();

  LearnerConfig config_;
  LearnerState state_;
  Rng rng_;
  std::vector<std::size_t> precommitted_;
  std::size_t scan_cursor_ = 0;  // oracle-greedy: first possibly-eligible index
  std::optional<std::size_t> pending_;

  // offline: ordering frozen at the first moment a positive is known
  std::vector<std::size_t> frozen_order_;
  std::size_t frozen_cursor_ = 0;
  bool frozen_ = false;
};

}  // namespace activecover
