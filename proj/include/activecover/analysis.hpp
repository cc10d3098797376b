#pragma once

// Multi-trial aggregation and empirical rate fitting.
//
// A sweep summarizes one learner kind across pool sizes: per-n mean excess
// cost with a 95% normal error band (mean +/- 1.96 * std / sqrt(trials),
// sample std with n-1 denominator). Rate fits regress ln(mean excess) on
// ln(n) by ordinary least squares; rows with mean <= 0 cannot enter the log
// fit and are dropped and reported. Fitted slopes estimate the excess-cost
// exponent: 1 for passive, D/(D+1) offline, (D-1)/D for the active kinds,
// 0 for the oracles (polylog factors bias desk-scale fits slightly upward).

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "activecover/learner.hpp"
#include "activecover/simulation.hpp"

namespace activecover {

struct SweepRow {
  std::size_t n = 0;
  std::size_t trials = 0;
  double mean_excess = 0.0;
  double std_excess = 0.0;  // sample standard deviation (ddof 1); NaN if trials < 2
  double ci_low = 0.0;      // NaN if trials < 2
  double ci_high = 0.0;
  double mean_auc = 0.0;
  double mean_q = 0.0;
};

struct SweepResult {
  LearnerKind kind = LearnerKind::kPassive;
  std::size_t dim = 0;
  std::vector<SweepRow> rows;  // sorted by n ascending
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;  // ln of the power-law constant
  double r_squared = 0.0;
  double slope_ci_low = 0.0;
  double slope_ci_high = 0.0;
  std::vector<std::size_t> dropped;  // input positions with mean <= 0
  std::size_t used = 0;              // points that entered the fit
};

// OLS of ln(means[i]) on ln(ns[i]). Throws InsufficientDataError when fewer
// than 3 usable points with distinct n remain after dropping mean <= 0 rows.
RateFit fit_power_law(std::span<const double> ns, std::span<const double> means);

double theoretical_exponent(LearnerKind kind, std::size_t dim);

struct TrialGroup {
  LearnerKind kind = LearnerKind::kPassive;
  std::size_t n = 0;
  std::vector<RunResult> results;
};

// Aggregates per-n trial groups of a single learner kind; mixing kinds in
// one call is an error. dim is carried through for reporting.
SweepResult summarize_sweep(std::span<const TrialGroup> groups, std::size_t dim);

struct Comparison {
  LearnerKind lo_kind;  // the kind with the smaller mean excess
  LearnerKind hi_kind;
  bool disjoint = false;  // 95% CIs do not overlap
};

struct OrderingReport {
  std::size_t at_n = 0;
  std::vector<SweepRow> rows;          // one per sweep, aligned with kinds
  std::vector<LearnerKind> kinds;
  std::vector<Comparison> comparisons; // all pairs, ordered by mean excess
  bool strict = false;                 // every adjacent pair disjoint

  std::string render() const;
};

// Compares mean excess across sweeps at one pool size; declares a strict
// ordering only where all adjacent CIs are pairwise disjoint. Every sweep
// must carry a row at at_n.
OrderingReport compare_learners(std::span<const SweepResult> sweeps, std::size_t at_n);

}  // namespace activecover
