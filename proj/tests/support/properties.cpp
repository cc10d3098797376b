#include "support/properties.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <vector>

#include "activecover/analysis.hpp"
#include "activecover/distribution.hpp"
#include "activecover/learner.hpp"
#include "activecover/pool.hpp"
#include "activecover/rng.hpp"
#include "activecover/simulation.hpp"

namespace activecover::testing {

namespace {

DistributionSpec random_preset(Rng& rng, std::size_t max_dim) {
  const Preset presets[] = {Preset::kCubeOverlap, Preset::kTwoClusters, Preset::kBallInSea};
  const Preset preset = presets[rng.next_below(3)];
  const std::size_t dim = 1 + static_cast<std::size_t>(rng.next_below(max_dim));
  const double p = 0.1 + 0.8 * rng.next_double();
  return make_preset(preset, dim, p);
}

LearnerConfig random_learner(Rng& rng, std::size_t n, std::size_t dim, bool any_kind) {
  const LearnerKind kinds[] = {LearnerKind::kPassive,      LearnerKind::kOffline,
                               LearnerKind::kExploreCommit, LearnerKind::kUcb,
                               LearnerKind::kOracleGreedy,  LearnerKind::kOracleUniform};
  LearnerConfig config;
  config.kind = any_kind ? kinds[rng.next_below(6)] : kinds[1 + rng.next_below(3)];
  config.initial_sample_m = 1 + static_cast<std::size_t>(rng.next_below(std::max<std::size_t>(n / 4, 1)));
  config.sigma = 0.25 + 3.0 * rng.next_double();
  config.seed = rng.next_u64();
  (void)dim;
  return config;
}

struct CaseRecorder {
  PropertyOutcome outcome;

  void fail(const std::string& what) {
    if (outcome.failures == 0) outcome.first_failure = what;
    ++outcome.failures;
  }
};

}  // namespace

PropertyOutcome prop_min_dist_matches_brute_force(std::uint64_t seed, std::size_t cases) {
  Rng rng(seed, 100);
  CaseRecorder rec;
  rec.outcome.name = "min_dist cache equals brute force";
  rec.outcome.cases = cases;

  for (std::size_t c = 0; c < cases; ++c) {
    const DistributionSpec spec = random_preset(rng, 3);
    const std::size_t n = 2 + static_cast<std::size_t>(rng.next_below(199));
    const Dataset data = sample_dataset(spec, n, rng.next_u64());
    const Pool pool(data);

    std::vector<double> cache(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> positives;
    const std::size_t adds = 1 + static_cast<std::size_t>(rng.next_below(10));
    bool case_ok = true;
    for (std::size_t a = 0; a < adds; ++a) {
      const std::size_t p = static_cast<std::size_t>(rng.next_below(n));
      positives.push_back(p);
      min_dist_update(cache, pool, p);
      // Re-adding the same positive must not change anything.
      if (rng.next_below(4) == 0) min_dist_update(cache, pool, p);

      for (std::size_t i = 0; i < n; ++i) {
        double brute = std::numeric_limits<double>::infinity();
        for (const std::size_t q : positives) brute = std::min(brute, pool.distance(i, q));
        if (cache[i] != brute) {
          case_ok = false;
          std::ostringstream what;
          what << "case " << c << ": cache[" << i << "]=" << cache[i] << " brute=" << brute;
          rec.fail(what.str());
          break;
        }
      }
      if (!case_ok) break;
    }
  }
  return rec.outcome;
}

namespace {

// One random episode on a sampled pool, returning its log and dataset.
std::pair<Dataset, QueryLog> random_episode(Rng& rng, std::size_t max_n, bool any_kind) {
  const DistributionSpec spec = random_preset(rng, 3);
  const std::size_t n = 5 + static_cast<std::size_t>(rng.next_below(max_n - 4));
  Dataset data = sample_dataset(spec, n, rng.next_u64());
  const LearnerConfig config = random_learner(rng, n, spec.dim, any_kind);
  StopRule stop = StopRule::all_positives_found();
  if (rng.next_below(3) == 0) {
    stop = StopRule::with_budget(1 + static_cast<std::size_t>(rng.next_below(n)));
  }
  QueryLog log = run_episode(data, config, stop);
  return {std::move(data), std::move(log)};
}

}  // namespace

PropertyOutcome prop_recall_curve_monotone(std::uint64_t seed, std::size_t cases) {
  Rng rng(seed, 101);
  CaseRecorder rec;
  rec.outcome.name = "recall curve monotone, auc = curve mean";
  rec.outcome.cases = cases;

  for (std::size_t c = 0; c < cases; ++c) {
    auto [data, log] = random_episode(rng, 1000, true);
    const std::size_t checkpoints = 1 + static_cast<std::size_t>(rng.next_below(40));
    const RunResult result = score_run(log, data, checkpoints);

    double prev = 0.0;
    double sum = 0.0;
    bool case_ok = true;
    for (const double r : result.recall_curve) {
      if (r < prev - 1e-15 || r < 0.0 || r > 1.0) {
        case_ok = false;
        break;
      }
      prev = r;
      sum += r;
    }
    if (result.recall_curve.size() != checkpoints) case_ok = false;
    if (case_ok && std::abs(result.auc - sum / static_cast<double>(checkpoints)) > 1e-12) {
      case_ok = false;
    }
    const std::size_t final_found = log.entries.empty() ? 0 : log.entries.back().cum_positives;
    if (case_ok && result.n_pos > 0 && final_found == result.n_pos &&
        result.recall_curve.back() != 1.0) {
      case_ok = false;
    }
    if (!case_ok) {
      std::ostringstream what;
      what << "case " << c << ": curve of size " << result.recall_curve.size()
           << " violated monotonicity/auc";
      rec.fail(what.str());
    }
  }
  return rec.outcome;
}

PropertyOutcome prop_query_count_bounds(std::uint64_t seed, std::size_t cases) {
  Rng rng(seed, 102);
  CaseRecorder rec;
  rec.outcome.name = "Q in [n_pos, n], unique indices, cum_positives non-decreasing";
  rec.outcome.cases = cases;

  for (std::size_t c = 0; c < cases; ++c) {
    const DistributionSpec spec = random_preset(rng, 3);
    const std::size_t n = 5 + static_cast<std::size_t>(rng.next_below(996));
    const Dataset data = sample_dataset(spec, n, rng.next_u64());
    const LearnerConfig config = random_learner(rng, n, spec.dim, true);
    const QueryLog log = run_episode(data, config, StopRule::all_positives_found());

    bool case_ok = log.q() >= data.positive_count() && log.q() <= n;
    std::set<std::size_t> seen;
    std::size_t prev_cum = 0;
    std::size_t step = 0;
    for (const QueryEntry& e : log.entries) {
      if (!seen.insert(e.index).second) case_ok = false;
      if (e.cum_positives < prev_cum) case_ok = false;
      if (e.step != ++step) case_ok = false;
      prev_cum = e.cum_positives;
    }
    if (prev_cum != data.positive_count()) case_ok = false;
    if (!case_ok) {
      std::ostringstream what;
      what << "case " << c << ": kind=" << to_string(config.kind) << " n=" << n
           << " n_pos=" << data.positive_count() << " Q=" << log.q();
      rec.fail(what.str());
    }
  }
  return rec.outcome;
}

PropertyOutcome prop_ucb_active_set_membership(std::uint64_t seed, std::size_t cases) {
  Rng rng(seed, 103);
  CaseRecorder rec;
  rec.outcome.name = "UCB active set exact, non-fallback queries are members";
  rec.outcome.cases = cases;

  for (std::size_t c = 0; c < cases; ++c) {
    const DistributionSpec spec = random_preset(rng, 3);
    const std::size_t n = 5 + static_cast<std::size_t>(rng.next_below(396));
    const Dataset data = sample_dataset(spec, n, rng.next_u64());
    LearnerConfig config = random_learner(rng, n, spec.dim, false);
    config.kind = LearnerKind::kUcb;

    const Pool pool(data);
    Learner learner(config, pool);
    const std::size_t n_pos = data.positive_count();
    if (n_pos == 0) continue;

    bool case_ok = true;
    std::size_t found = 0;
    while (found < n_pos && !learner.done() && case_ok) {
      const auto& st = learner.state();
      const bool commit = st.phase == Phase::kCommit;
      const ActiveSetView before = learner.active_set(pool);

      // The view must be exactly recomputable from the state.
      if (!st.positives.empty()) {
        const double eps = epsilon_radius(config.sigma, st.positives.size(), data.dim);
        if (before.radius != eps) case_ok = false;
        std::vector<std::size_t> expect;
        for (std::size_t i = 0; i < n; ++i) {
          if (!st.labeled[i] && st.min_dist[i] <= eps) expect.push_back(i);
        }
        if (expect != before.members) case_ok = false;
      }

      const QueryChoice choice = learner.next_query(pool);
      if (commit && !choice.fallback && !st.positives.empty()) {
        if (!std::binary_search(before.members.begin(), before.members.end(), choice.index)) {
          case_ok = false;
        }
      }
      const bool label = data.labels[choice.index] != 0;
      learner.observe(pool, choice.index, label);
      if (label) ++found;
    }
    if (!case_ok) {
      std::ostringstream what;
      what << "case " << c << ": active set mismatch at n=" << n;
      rec.fail(what.str());
    }
  }
  return rec.outcome;
}

PropertyOutcome prop_fit_power_law_exact(std::uint64_t seed, std::size_t cases) {
  Rng rng(seed, 104);
  CaseRecorder rec;
  rec.outcome.name = "fit_power_law recovers planted exponents";
  rec.outcome.cases = cases;

  for (std::size_t c = 0; c < cases; ++c) {
    const double exponent = 0.1 + 1.4 * rng.next_double();
    const double constant = 0.5 + 99.5 * rng.next_double();
    const std::size_t k = 3 + static_cast<std::size_t>(rng.next_below(6));
    std::vector<double> ns, means, perturbed;
    double n = 100.0 * (1.0 + rng.next_double());
    for (std::size_t i = 0; i < k; ++i) {
      ns.push_back(n);
      const double mean = constant * std::pow(n, exponent);
      means.push_back(mean);
      perturbed.push_back(mean * (0.99 + 0.02 * rng.next_double()));
      n *= 2.0 + 8.0 * rng.next_double();
    }

    bool case_ok = true;
    const RateFit exact = fit_power_law(ns, means);
    if (std::abs(exact.slope - exponent) > 1e-9) case_ok = false;
    if (exact.r_squared < 1.0 - 1e-9) case_ok = false;
    if (!exact.dropped.empty()) case_ok = false;

    const RateFit noisy = fit_power_law(ns, perturbed);
    if (std::abs(noisy.slope - exponent) > 0.02) case_ok = false;

    if (!case_ok) {
      std::ostringstream what;
      what << "case " << c << ": planted " << exponent << " fitted " << exact.slope
           << " (noisy " << noisy.slope << ")";
      rec.fail(what.str());
    }
  }
  return rec.outcome;
}

}  // namespace activecover::testing
