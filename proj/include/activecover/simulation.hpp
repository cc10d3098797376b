#pragma once

// Episode harness: runs one learner on one dataset, recording every query,
// and scores the log. The harness holds the ground truth (labels, support
// flags, positive count) and fires the stop rule; the learner stays
// oblivious and only ever sees the labels of points it queried.
//
// The optimal-learner benchmark Q_opt is the number of pool points inside
// the true positive support when flags are known; for ingested data it
// degrades to the positive count, an explicit lower bound that is never
// mixed into rate fits.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "activecover/distribution.hpp"
#include "activecover/learner.hpp"

namespace activecover {

struct StopRule {
  enum class Mode { kAllPositivesFound, kBudget };
  Mode mode = Mode::kAllPositivesFound;
  std::size_t budget = 0;  // budget mode only, >= 1

  static StopRule all_positives_found() { return {}; }
  static StopRule with_budget(std::size_t budget) {
    if (budget == 0) throw ArgumentError("StopRule: budget must be at least 1");
    return {Mode::kBudget, budget};
  }
};

struct QueryEntry {
  std::size_t step;           // 1-based query counter
  std::size_t index;          // queried point
  bool label;                 // revealed truth
  bool fallback;              // step taken off the kind's nominal policy
  std::size_t cum_positives;  // positives found up to and including this step
};

struct QueryLog {
  std::vector<QueryEntry> entries;
  std::size_t pool_size = 0;
  std::size_t n_pos = 0;  // ground-truth positive count

  std::size_t q() const noexcept { return entries.size(); }
};

enum class QOptKind { kSupportCount, kPositiveCountLowerBound };

std::string_view to_string(QOptKind kind);

struct RunResult {
  std::size_t q = 0;
  std::size_t q_opt = 0;
  std::int64_t excess = 0;  // q - q_opt; negative means beating the benchmark
  std::size_t n_pos = 0;
  std::vector<double> recall_curve;  // at checkpoints ceil(k*n/B), k = 1..B
  double auc = 0.0;                  // mean of recall_curve
  QOptKind q_opt_kind = QOptKind::kSupportCount;
};

// Sequential query/reveal/observe loop until the stop rule fires. In
// all-positives-found mode a dataset with zero positives yields an empty log.
QueryLog run_episode(const Dataset& data, const LearnerConfig& config, const StopRule& stop);

std::pair<std::size_t, QOptKind> q_opt(const Dataset& data);

// recall_curve[k-1] = positives found within the first ceil(k*n/B) queries
// divided by n_pos (1 everywhere when n_pos = 0); queries beyond the log
// hold the final count.
RunResult score_run(const QueryLog& log, const Dataset& data, std::size_t checkpoints);

struct TrialBatch {
  std::vector<RunResult> results;  // ordered by trial index
  std::vector<QueryLog> logs;      // parallel to results when kept, else empty
};

// Runs `trials` independent episodes: trial i samples its dataset and seeds
// its learner from seed_i = mix64(base_seed, i). Trials may run on up to
// `threads` worker threads (0 = hardware concurrency); results are ordered
// by trial index regardless of completion order.
TrialBatch run_trials(const DistributionSpec& spec, std::size_t n, const LearnerConfig& config,
                      const StopRule& stop, std::size_t trials, std::uint64_t base_seed,
                      std::size_t checkpoints = 20, unsigned threads = 1,
                      bool keep_logs = false);

}  // namespace activecover
