#include "activecover/learner.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

namespace activecover {

LearnerKind learner_kind_from_name(std::string_view name) {
  if (name == "passive") return LearnerKind::kPassive;
  if (name == "offline") return LearnerKind::kOffline;
  if (name == "explore-commit") return LearnerKind::kExploreCommit;
  if (name == "ucb") return LearnerKind::kUcb;
  if (name == "oracle-greedy") return LearnerKind::kOracleGreedy;
  if (name == "oracle-uniform") return LearnerKind::kOracleUniform;
  throw ArgumentError("unknown learner kind '" + std::string(name) + "'");
}

std::string_view to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::kPassive: return "passive";
    case LearnerKind::kOffline: return "offline";
    case LearnerKind::kExploreCommit: return "explore-commit";
    case LearnerKind::kUcb: return "ucb";
    case LearnerKind::kOracleGreedy: return "oracle-greedy";
    case LearnerKind::kOracleUniform: return "oracle-uniform";
  }
  return "?";
}

bool has_explore_phase(LearnerKind kind) {
  return kind == LearnerKind::kOffline || kind == LearnerKind::kExploreCommit ||
         kind == LearnerKind::kUcb;
}

bool is_oracle(LearnerKind kind) {
  return kind == LearnerKind::kOracleGreedy || kind == LearnerKind::kOracleUniform;
}

double epsilon_radius(double sigma, std::size_t ell, std::size_t dim) {
  if (ell == 0) throw ArgumentError("epsilon_radius: ell must be at least 1");
  if (!(sigma > 0.0)) throw ArgumentError("epsilon_radius: sigma must be positive");
  if (dim == 0) throw ArgumentError("epsilon_radius: dim must be positive");
  const double log_ell = std::log(static_cast<double>(ell));
  return sigma * std::pow(log_ell * log_ell / static_cast<double>(ell),
                          1.0 / static_cast<double>(dim));
}

std::size_t recommended_m(std::size_t n, std::size_t dim) {
  if (n == 0) throw ArgumentError("recommended_m: n must be positive");
  if (dim == 0) throw ArgumentError("recommended_m: dim must be positive");
  const double d = static_cast<double>(dim);
  const double v = std::pow(static_cast<double>(n), d / (d + 1.0));
  // Shave one ulp-scale sliver so exact powers (e.g. 4096^{2/3}, 100000^{4/5})
  // are not pushed past the next integer by pow rounding.
  const auto m = static_cast<std::size_t>(std::ceil(v * (1.0 - 1e-12)));
  return std::min(std::max<std::size_t>(m, 1), n);
}

void min_dist_update(std::vector<double>& min_dist, const Pool& pool,
                     std::size_t new_positive_index) {
  if (new_positive_index >= pool.size()) {
    throw ArgumentError("min_dist_update: index out of range");
  }
  const std::size_t n = pool.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double d = pool.distance(i, new_positive_index);
    if (d < min_dist[i]) min_dist[i] = d;
  }
}

Learner::Learner(const LearnerConfig& config, const Pool& pool)
    : config_(config), rng_(config.seed, kStreamLearner) {
  const std::size_t n = pool.size();
  if (n == 0) throw ArgumentError("Learner: pool is empty");
  if (has_explore_phase(config.kind)) {
    if (config.initial_sample_m < 1 || config.initial_sample_m > n) {
      throw ArgumentError("Learner: initial_sample_m must lie in [1, n], got " +
                          std::to_string(config.initial_sample_m) + " for n = " +
                          std::to_string(n));
    }
  }
  if (config.kind == LearnerKind::kUcb && !(config.sigma > 0.0)) {
    throw ArgumentError("Learner: sigma must be positive for ucb");
  }
  if (is_oracle(config.kind) && !pool.support_known()) {
    throw CapabilityError("Learner: " + std::string(to_string(config.kind)) +
                          " requires known in_support flags");
  }

  state_.labeled.assign(n, 0);
  state_.min_dist.assign(n, std::numeric_limits<double>::infinity());
  state_.phase = is_oracle(config.kind) ? Phase::kCommit : Phase::kExplore;

  if (config.kind == LearnerKind::kPassive) {
    precommitted_ = sample_without_replacement(n, n, rng_);
  } else if (has_explore_phase(config.kind)) {
    precommitted_ = sample_without_replacement(n, config.initial_sample_m, rng_);
  }
}

std::size_t Learner::lowest_unlabeled() const {
  for (std::size_t i = 0; i < state_.labeled.size(); ++i) {
    if (!state_.labeled[i]) return i;
  }
  assert(false && "no unlabeled point");
  return 0;
}

std::size_t Learner::argmin_min_dist() const {
  std::size_t best = state_.labeled.size();
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < state_.labeled.size(); ++i) {
    if (state_.labeled[i]) continue;
    if (best == state_.labeled.size() || state_.min_dist[i] < best_d) {
      best = i;
      best_d = state_.min_dist[i];
    }
  }
  assert(best != state_.labeled.size());
  return best;
}

std::size_t Learner::uniform_unlabeled() {
  const std::size_t remaining = state_.labeled.size() - state_.labeled_count;
  std::size_t r = static_cast<std::size_t>(rng_.next_below(remaining));
  for (std::size_t i = 0; i < state_.labeled.size(); ++i) {
    if (state_.labeled[i]) continue;
    if (r == 0) return i;
    --r;
  }
  assert(false && "uniform_unlabeled ran past the pool");
  return 0;
}

void Learner::freeze_offline_order() {
  // Remaining points sorted by distance to the positives known at freeze
  // time (exactly the current cache), ties toward the lower index.
  frozen_order_.clear();
  frozen_order_.reserve(state_.labeled.size() - state_.labeled_count);
  for (std::size_t i = 0; i < state_.labeled.size(); ++i) {
    if (!state_.labeled[i]) frozen_order_.push_back(i);
  }
  std::stable_sort(frozen_order_.begin(), frozen_order_.end(),
                   [this](std::size_t a, std::size_t b) {
                     return state_.min_dist[a] < state_.min_dist[b];
                   });
  frozen_cursor_ = 0;
  frozen_ = true;
}

QueryChoice Learner::pick(const Pool& pool) {
  switch (config_.kind) {
    case LearnerKind::kPassive:
      return {precommitted_[state_.labeled_count], false};

    case LearnerKind::kOffline:
    case LearnerKind::kExploreCommit:
    case LearnerKind::kUcb: {
      if (state_.phase == Phase::kExplore) {
        return {precommitted_[state_.labeled_count], false};
      }
      if (state_.positives.empty()) {
        // No positive seen yet: probe uniformly until one shows up.
        return {uniform_unlabeled(), true};
      }
      if (config_.kind == LearnerKind::kOffline) {
        while (frozen_cursor_ < frozen_order_.size() &&
               state_.labeled[frozen_order_[frozen_cursor_]]) {
          ++frozen_cursor_;
        }
        assert(frozen_ && frozen_cursor_ < frozen_order_.size());
        return {frozen_order_[frozen_cursor_], false};
      }
      if (config_.kind == LearnerKind::kExploreCommit) {
        return {argmin_min_dist(), false};
      }
      // ucb: uniform draw from the active set, one closest-point step if empty.
      const double eps =
          epsilon_radius(config_.sigma, state_.positives.size(), pool.dim());
      std::size_t members = 0;
      for (std::size_t i = 0; i < state_.labeled.size(); ++i) {
        if (!state_.labeled[i] && state_.min_dist[i] <= eps) ++members;
      }
      if (members == 0) {
        return {argmin_min_dist(), true};
      }
      std::size_t r = static_cast<std::size_t>(rng_.next_below(members));
      for (std::size_t i = 0; i < state_.labeled.size(); ++i) {
        if (!state_.labeled[i] && state_.min_dist[i] <= eps) {
          if (r == 0) return {i, false};
          --r;
        }
      }
      assert(false && "active set draw ran past the pool");
      return {0, false};
    }

    case LearnerKind::kOracleGreedy: {
      while (scan_cursor_ < state_.labeled.size() &&
             (state_.labeled[scan_cursor_] || !pool.in_support(scan_cursor_))) {
        ++scan_cursor_;
      }
      if (scan_cursor_ < state_.labeled.size()) return {scan_cursor_, false};
      return {lowest_unlabeled(), true};
    }

    case LearnerKind::kOracleUniform: {
      std::size_t members = 0;
      for (std::size_t i = 0; i < state_.labeled.size(); ++i) {
        if (!state_.labeled[i] && pool.in_support(i)) ++members;
      }
      if (members == 0) return {uniform_unlabeled(), true};
      std::size_t r = static_cast<std::size_t>(rng_.next_below(members));
      for (std::size_t i = 0; i < state_.labeled.size(); ++i) {
        if (!state_.labeled[i] && pool.in_support(i)) {
          if (r == 0) return {i, false};
          --r;
        }
      }
      assert(false && "support draw ran past the pool");
      return {0, false};
    }
  }
  throw StateError("Learner: unknown kind");
}

QueryChoice Learner::next_query(const Pool& pool) {
  if (done()) throw StateError("next_query: every point is already labeled");
  if (pending_) throw ProtocolError("next_query: previous query has not been observed");
  const QueryChoice choice = pick(pool);
  assert(!state_.labeled[choice.index]);
  pending_ = choice.index;
  return choice;
}

void Learner::observe(const Pool& pool, std::size_t index, bool label,
                      std::optional<bool> /*in_support_hint*/) {
  if (!pending_ || *pending_ != index) {
    throw ProtocolError("observe: index " + std::to_string(index) +
                        " was not the most recent query");
  }
  pending_.reset();
  state_.labeled[index] = 1;
  ++state_.labeled_count;
  ++state_.step;
  if (label) {
    state_.positives.push_back(index);
    min_dist_update(state_.min_dist, pool, index);
  }
  if (state_.phase == Phase::kExplore && has_explore_phase(config_.kind) &&
      state_.labeled_count == config_.initial_sample_m) {
    state_.phase = Phase::kCommit;
  }
  if (config_.kind == LearnerKind::kOffline && !frozen_ &&
      state_.phase == Phase::kCommit && !state_.positives.empty()) {
    freeze_offline_order();
  }
}

ActiveSetView Learner::active_set(const Pool& pool) const {
  ActiveSetView view;
  if (config_.kind != LearnerKind::kUcb || state_.positives.empty()) return view;
  view.radius = epsilon_radius(config_.sigma, state_.positives.size(), pool.dim());
  for (std::size_t i = 0; i < state_.labeled.size(); ++i) {
    if (!state_.labeled[i] && state_.min_dist[i] <= view.radius) {
      view.members.push_back(i);
    }
  }
  return view;
}

}  // namespace activecover
