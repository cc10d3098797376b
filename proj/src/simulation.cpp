#include "activecover/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>

#include "activecover/pool.hpp"
#include "activecover/rng.hpp"

namespace activecover {

std::string_view to_string(QOptKind kind) {
  switch (kind) {
    case QOptKind::kSupportCount: return "support-count";
    case QOptKind::kPositiveCountLowerBound: return "positive-count-lower-bound";
  }
  return "?";
}

QueryLog run_episode(const Dataset& data, const LearnerConfig& config, const StopRule& stop) {
  if (data.size() == 0) throw ArgumentError("run_episode: dataset is empty");
  if (stop.mode == StopRule::Mode::kBudget && stop.budget == 0) {
    throw ArgumentError("run_episode: budget must be at least 1");
  }

  QueryLog log;
  log.pool_size = data.size();
  log.n_pos = data.positive_count();
  if (stop.mode == StopRule::Mode::kAllPositivesFound && log.n_pos == 0) return log;

  Pool pool(data);
  Learner learner(config, pool);
  std::size_t found = 0;
  for (;;) {
    if (stop.mode == StopRule::Mode::kBudget && log.entries.size() >= stop.budget) break;
    if (stop.mode == StopRule::Mode::kAllPositivesFound && found == log.n_pos) break;
    if (learner.done()) break;
    const QueryChoice choice = learner.next_query(pool);
    const bool label = data.labels[choice.index] != 0;
    std::optional<bool> hint;
    if (data.in_support[choice.index] != SupportFlag::kUnknown) {
      hint = data.in_support[choice.index] == SupportFlag::kYes;
    }
    learner.observe(pool, choice.index, label, hint);
    if (label) ++found;
    log.entries.push_back({log.entries.size() + 1, choice.index, label, choice.fallback, found});
  }
  return log;
}

std::pair<std::size_t, QOptKind> q_opt(const Dataset& data) {
  if (data.support_known()) {
    std::size_t count = 0;
    for (const SupportFlag f : data.in_support) {
      if (f == SupportFlag::kYes) ++count;
    }
    return {count, QOptKind::kSupportCount};
  }
  return {data.positive_count(), QOptKind::kPositiveCountLowerBound};
}

RunResult score_run(const QueryLog& log, const Dataset& data, std::size_t checkpoints) {
  if (checkpoints == 0) throw ArgumentError("score_run: checkpoints must be at least 1");

  RunResult result;
  result.q = log.entries.size();
  result.n_pos = data.positive_count();
  const auto [opt, kind] = q_opt(data);
  result.q_opt = opt;
  result.q_opt_kind = kind;
  result.excess = static_cast<std::int64_t>(result.q) - static_cast<std::int64_t>(opt);

  const std::size_t n = data.size();
  const std::size_t final_found = log.entries.empty() ? 0 : log.entries.back().cum_positives;
  result.recall_curve.reserve(checkpoints);
  double total = 0.0;
  for (std::size_t k = 1; k <= checkpoints; ++k) {
    const std::size_t cutoff = (k * n + checkpoints - 1) / checkpoints;
    const std::size_t found =
        cutoff >= result.q ? final_found : log.entries[cutoff - 1].cum_positives;
    const double recall =
        result.n_pos == 0 ? 1.0
                          : static_cast<double>(found) / static_cast<double>(result.n_pos);
    result.recall_curve.push_back(recall);
    total += recall;
  }
  result.auc = total / static_cast<double>(checkpoints);
  return result;
}

TrialBatch run_trials(const DistributionSpec& spec, std::size_t n, const LearnerConfig& config,
                      const StopRule& stop, std::size_t trials, std::uint64_t base_seed,
                      std::size_t checkpoints, unsigned threads, bool keep_logs) {
  spec.validate();
  if (trials == 0) throw ArgumentError("run_trials: trials must be at least 1");

  TrialBatch batch;
  batch.results.resize(trials);
  if (keep_logs) batch.logs.resize(trials);

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  const auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= trials) return;
      try {
        const std::uint64_t seed_i = mix64(base_seed, i);
        const Dataset data = sample_dataset(spec, n, seed_i);
        LearnerConfig trial_config = config;
        trial_config.seed = seed_i;
        QueryLog log = run_episode(data, trial_config, stop);
        batch.results[i] = score_run(log, data, checkpoints);
        if (keep_logs) batch.logs[i] = std::move(log);
      } catch (...) {
        const std::lock_guard<std::mutex> guard(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(trials);
      }
    }
  };

  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, trials));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  if (first_error) std::rethrow_exception(first_error);
  return batch;
}

}  // namespace activecover
