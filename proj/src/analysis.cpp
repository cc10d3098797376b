#include "activecover/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "activecover/csv.hpp"

namespace activecover {

RateFit fit_power_law(std::span<const double> ns, std::span<const double> means) {
  if (ns.size() != means.size()) {
    throw ArgumentError("fit_power_law: ns and means differ in length");
  }
  RateFit fit;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (!(means[i] > 0.0)) {
      fit.dropped.push_back(i);
      continue;
    }
    if (!(ns[i] > 0.0)) throw ArgumentError("fit_power_law: n values must be positive");
    xs.push_back(std::log(ns[i]));
    ys.push_back(std::log(means[i]));
  }
  const std::set<double> distinct(xs.begin(), xs.end());
  if (xs.size() < 3 || distinct.size() < 3) {
    throw InsufficientDataError("fit_power_law: need at least 3 usable points with distinct n, have " +
                                std::to_string(distinct.size()));
  }

  const double k = static_cast<double>(xs.size());
  const double xbar = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
  const double ybar = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - xbar;
    const double dy = ys[i] - ybar;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  fit.used = xs.size();

  double ssr = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double resid = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ssr += resid * resid;
  }
  fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(1.0 - ssr / syy, 0.0, 1.0);

  // Normal-approximation slope band from the residual variance.
  const double se = std::sqrt((ssr / (k - 2.0)) / sxx);
  fit.slope_ci_low = fit.slope - 1.96 * se;
  fit.slope_ci_high = fit.slope + 1.96 * se;
  return fit;
}

double theoretical_exponent(LearnerKind kind, std::size_t dim) {
  if (dim == 0) throw ArgumentError("theoretical_exponent: dim must be positive");
  const double d = static_cast<double>(dim);
  switch (kind) {
    case LearnerKind::kPassive: return 1.0;
    case LearnerKind::kOffline: return d / (d + 1.0);
    case LearnerKind::kExploreCommit:
    case LearnerKind::kUcb: return (d - 1.0) / d;
    case LearnerKind::kOracleGreedy:
    case LearnerKind::kOracleUniform: return 0.0;
  }
  throw ArgumentError("theoretical_exponent: unknown kind");
}

SweepResult summarize_sweep(std::span<const TrialGroup> groups, std::size_t dim) {
  if (groups.empty()) throw InsufficientDataError("summarize_sweep: no trial groups");
  SweepResult sweep;
  sweep.kind = groups.front().kind;
  sweep.dim = dim;
  std::set<std::size_t> seen;
  for (const TrialGroup& group : groups) {
    if (group.kind != sweep.kind) {
      throw ArgumentError("summarize_sweep: one learner kind per sweep (got " +
                          std::string(to_string(sweep.kind)) + " and " +
                          std::string(to_string(group.kind)) + ")");
    }
    if (group.results.empty()) {
      throw InsufficientDataError("summarize_sweep: group at n = " + std::to_string(group.n) +
                                  " has no trials");
    }
    if (!seen.insert(group.n).second) {
      throw ArgumentError("summarize_sweep: duplicate group at n = " + std::to_string(group.n));
    }

    SweepRow row;
    row.n = group.n;
    row.trials = group.results.size();
    double sum_excess = 0.0, sum_auc = 0.0, sum_q = 0.0;
    for (const RunResult& r : group.results) {
      sum_excess += static_cast<double>(r.excess);
      sum_auc += r.auc;
      sum_q += static_cast<double>(r.q);
    }
    const double t = static_cast<double>(row.trials);
    row.mean_excess = sum_excess / t;
    row.mean_auc = sum_auc / t;
    row.mean_q = sum_q / t;
    if (row.trials >= 2) {
      double ss = 0.0;
      for (const RunResult& r : group.results) {
        const double d0 = static_cast<double>(r.excess) - row.mean_excess;
        ss += d0 * d0;
      }
      row.std_excess = std::sqrt(ss / (t - 1.0));
      const double half = 1.96 * row.std_excess / std::sqrt(t);
      row.ci_low = row.mean_excess - half;
      row.ci_high = row.mean_excess + half;
    } else {
      row.std_excess = std::numeric_limits<double>::quiet_NaN();
      row.ci_low = std::numeric_limits<double>::quiet_NaN();
      row.ci_high = std::numeric_limits<double>::quiet_NaN();
    }
    sweep.rows.push_back(row);
  }
  std::sort(sweep.rows.begin(), sweep.rows.end(),
            [](const SweepRow& a, const SweepRow& b) { return a.n < b.n; });
  return sweep;
}

OrderingReport compare_learners(std::span<const SweepResult> sweeps, std::size_t at_n) {
  OrderingReport report;
  report.at_n = at_n;
  for (const SweepResult& sweep : sweeps) {
    const auto it = std::find_if(sweep.rows.begin(), sweep.rows.end(),
                                 [at_n](const SweepRow& r) { return r.n == at_n; });
    if (it == sweep.rows.end()) {
      throw ArgumentError("compare_learners: sweep for " +
                          std::string(to_string(sweep.kind)) + " has no row at n = " +
                          std::to_string(at_n));
    }
    report.kinds.push_back(sweep.kind);
    report.rows.push_back(*it);
  }

  // Sort kinds by mean excess, then flag CI overlap for every pair.
  std::vector<std::size_t> order(report.kinds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return report.rows[a].mean_excess < report.rows[b].mean_excess;
  });
  std::vector<SweepRow> rows;
  std::vector<LearnerKind> kinds;
  for (const std::size_t i : order) {
    rows.push_back(report.rows[i]);
    kinds.push_back(report.kinds[i]);
  }
  report.rows = std::move(rows);
  report.kinds = std::move(kinds);

  bool all_disjoint = report.kinds.size() >= 2;
  for (std::size_t a = 0; a < report.kinds.size(); ++a) {
    for (std::size_t b = a + 1; b < report.kinds.size(); ++b) {
      Comparison cmp;
      cmp.lo_kind = report.kinds[a];
      cmp.hi_kind = report.kinds[b];
      cmp.disjoint = report.rows[a].ci_high < report.rows[b].ci_low;
      all_disjoint = all_disjoint && cmp.disjoint;
      report.comparisons.push_back(cmp);
    }
  }
  report.strict = all_disjoint && report.kinds.size() >= 2;
  return report;
}

std::string OrderingReport::render() const {
  std::ostringstream out;
  out << "mean excess at n = " << at_n << "\n";
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    out << "  " << to_string(kinds[i]) << ": mean_excess=" << csv::format_double(rows[i].mean_excess)
        << " ci=[" << csv::format_double(rows[i].ci_low) << ", "
        << csv::format_double(rows[i].ci_high) << "] trials=" << rows[i].trials << "\n";
  }
  if (kinds.size() < 2) {
    out << "  single learner: nothing to compare\n";
    return out.str();
  }
  if (strict) {
    out << "  strict ordering: ";
    for (std::size_t i = 0; i < kinds.size(); ++i) {
      if (i) out << " < ";
      out << to_string(kinds[i]);
    }
    out << " (all CIs pairwise disjoint)\n";
  } else {
    out << "  no strict ordering:";
    for (const Comparison& cmp : comparisons) {
      if (!cmp.disjoint) {
        out << " (" << to_string(cmp.lo_kind) << ", " << to_string(cmp.hi_kind)
            << ") CIs overlap";
      }
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace activecover
