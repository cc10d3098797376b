#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "activecover/csv.hpp"
#include "activecover/dataset_io.hpp"
#include "activecover/errors.hpp"
#include "activecover/rng.hpp"
#include "activecover/version.hpp"

namespace activecover::cli {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& message) {
  throw ArgumentError("config error: " + message);
}

void expect_keys(const json& obj, const std::string& where,
                 std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) config_error("unknown field '" + where + key + "'");
  }
}

std::vector<double> doubles_from_json(const json& j, const std::string& field) {
  if (!j.is_array()) config_error("field '" + field + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) config_error("field '" + field + "' must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Region region_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) config_error("field '" + where + "' must be an object");
  expect_keys(j, where + ".", {"kind", "low", "high", "center", "radius"});
  const std::string kind = j.value("kind", "box");
  if (kind == "box") {
    if (!j.contains("low") || !j.contains("high")) {
      config_error("field '" + where + "': box needs 'low' and 'high'");
    }
    return Region::box(doubles_from_json(j["low"], where + ".low"),
                       doubles_from_json(j["high"], where + ".high"));
  }
  if (kind == "ball") {
    if (!j.contains("center") || !j.contains("radius")) {
      config_error("field '" + where + "': ball needs 'center' and 'radius'");
    }
    if (!j["radius"].is_number()) config_error("field '" + where + ".radius' must be a number");
    return Region::ball(doubles_from_json(j["center"], where + ".center"),
                        j["radius"].get<double>());
  }
  config_error("field '" + where + ".kind' must be 'box' or 'ball'");
}

ComponentSpec component_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) config_error("field '" + where + "' must be an object");
  expect_keys(j, where + ".", {"region", "density", "mean", "stddev", "weight"});
  ComponentSpec comp;
  if (!j.contains("region")) config_error("field '" + where + "': missing 'region'");
  comp.region = region_from_json(j["region"], where + ".region");
  const std::string density = j.value("density", "uniform");
  if (density == "uniform") {
    comp.density = DensityKind::kUniform;
  } else if (density == "truncated-gaussian") {
    comp.density = DensityKind::kTruncatedGaussian;
    if (!j.contains("mean") || !j.contains("stddev")) {
      config_error("field '" + where + "': truncated-gaussian needs 'mean' and 'stddev'");
    }
    comp.mean = doubles_from_json(j["mean"], where + ".mean");
    comp.stddev = doubles_from_json(j["stddev"], where + ".stddev");
  } else {
    config_error("field '" + where + ".density' must be 'uniform' or 'truncated-gaussian'");
  }
  if (j.contains("weight")) {
    if (!j["weight"].is_number()) config_error("field '" + where + ".weight' must be a number");
    comp.weight = j["weight"].get<double>();
  }
  return comp;
}

DistributionSpec spec_from_json(const json& j) {
  if (!j.is_object()) config_error("field 'spec' must be an object");
  expect_keys(j, "spec.", {"dim", "p", "positive_components", "negative_components"});
  DistributionSpec spec;
  if (!j.contains("dim") || !j["dim"].is_number_unsigned()) {
    config_error("field 'spec.dim' must be a positive integer");
  }
  spec.dim = j["dim"].get<std::size_t>();
  if (!j.contains("p") || !j["p"].is_number()) config_error("field 'spec.p' must be a number");
  spec.mixture_p = j["p"].get<double>();
  for (const char* side : {"positive_components", "negative_components"}) {
    if (!j.contains(side) || !j[side].is_array()) {
      config_error(std::string("field 'spec.") + side + "' must be an array");
    }
    std::size_t c = 0;
    for (const auto& cj : j[side]) {
      const std::string where = std::string("spec.") + side + "[" + std::to_string(c++) + "]";
      auto comp = component_from_json(cj, where);
      if (side[0] == 'p') {
        spec.positive_components.push_back(std::move(comp));
      } else {
        spec.negative_components.push_back(std::move(comp));
      }
    }
  }
  return spec;
}

json region_to_json(const Region& region) {
  json j;
  if (region.kind == RegionKind::kBox) {
    j["kind"] = "box";
    j["low"] = region.low;
    j["high"] = region.high;
  } else {
    j["kind"] = "ball";
    j["center"] = region.center;
    j["radius"] = region.radius;
  }
  return j;
}

json spec_to_json(const DistributionSpec& spec) {
  json j;
  j["dim"] = spec.dim;
  j["p"] = spec.mixture_p;
  for (const char* side : {"positive_components", "negative_components"}) {
    json arr = json::array();
    for (const ComponentSpec& comp :
         side[0] == 'p' ? spec.positive_components : spec.negative_components) {
      json cj;
      cj["region"] = region_to_json(comp.region);
      if (comp.density == DensityKind::kUniform) {
        cj["density"] = "uniform";
      } else {
        cj["density"] = "truncated-gaussian";
        cj["mean"] = comp.mean;
        cj["stddev"] = comp.stddev;
      }
      cj["weight"] = comp.weight;
      arr.push_back(std::move(cj));
    }
    j[side] = std::move(arr);
  }
  return j;
}

MRule m_rule_from_text(const std::string& text, const std::string& field) {
  MRule rule;
  if (text == "recommended") {
    rule.recommended = true;
    return rule;
  }
  const auto v = csv::parse_u64(text);
  if (!v || *v == 0) {
    config_error("field '" + field + "': expected 'recommended' or a positive integer, got '" +
                 text + "'");
  }
  rule.recommended = false;
  rule.fixed = static_cast<std::size_t>(*v);
  return rule;
}

SigmaRule sigma_rule_from_text(const std::string& text, const std::string& field) {
  SigmaRule rule;
  if (text == "auto") {
    rule.automatic = true;
    return rule;
  }
  const auto v = csv::parse_double(text);
  if (!v || !(*v > 0.0)) {
    config_error("field '" + field + "': expected 'auto' or a positive number, got '" + text +
                 "'");
  }
  rule.automatic = false;
  rule.fixed = *v;
  return rule;
}

LearnerChoice learner_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) config_error("field '" + where + "' must be an object");
  expect_keys(j, where + ".", {"kind", "m", "sigma"});
  LearnerChoice choice;
  if (!j.contains("kind") || !j["kind"].is_string()) {
    config_error("field '" + where + ".kind' must be a learner name");
  }
  choice.kind = learner_kind_from_name(j["kind"].get<std::string>());
  if (j.contains("m")) {
    if (j["m"].is_number_unsigned()) {
      choice.m.recommended = false;
      choice.m.fixed = j["m"].get<std::size_t>();
    } else if (j["m"].is_string()) {
      choice.m = m_rule_from_text(j["m"].get<std::string>(), where + ".m");
    } else {
      config_error("field '" + where + ".m' must be 'recommended' or a positive integer");
    }
  }
  if (j.contains("sigma")) {
    if (j["sigma"].is_number()) {
      choice.sigma.automatic = false;
      choice.sigma.fixed = j["sigma"].get<double>();
    } else if (j["sigma"].is_string()) {
      choice.sigma = sigma_rule_from_text(j["sigma"].get<std::string>(), where + ".sigma");
    } else {
      config_error("field '" + where + ".sigma' must be 'auto' or a positive number");
    }
  }
  return choice;
}

std::string metadata_line(const std::string& hash, std::uint64_t base_seed) {
  return "config_hash=" + hash + " base_seed=" + csv::format_u64(base_seed) +
         " version=" + kVersion;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
  out.flush();
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

std::filesystem::path prepare_out_dir(const std::string& out_dir) {
  const std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + out_dir + "': " + ec.message());
  return dir;
}

double auto_sigma(std::size_t n, std::size_t dim) {
  return 2.0 * std::pow(std::log(static_cast<double>(n)), 1.0 / static_cast<double>(dim));
}

std::string query_log_csv(const QueryLog& log, const std::string& meta) {
  std::ostringstream out;
  out << "# " << meta << "\n";
  out << "step,index,label,fallback\n";
  for (const QueryEntry& e : log.entries) {
    out << e.step << "," << e.index << "," << (e.label ? 1 : 0) << "," << (e.fallback ? 1 : 0)
        << "\n";
  }
  return out.str();
}

}  // namespace

StopRule parse_stop_rule(const std::string& text) {
  if (text == "all") return StopRule::all_positives_found();
  if (text.rfind("budget:", 0) == 0) {
    const auto v = csv::parse_u64(text.substr(7));
    if (!v || *v == 0) config_error("field 'stop': budget must be a positive integer");
    return StopRule::with_budget(static_cast<std::size_t>(*v));
  }
  config_error("field 'stop': expected 'all' or 'budget:K', got '" + text + "'");
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    config_error(std::string("invalid JSON in '") + path + "': " + e.what());
  }
  if (!j.is_object()) config_error("top level of '" + path + "' must be an object");
  expect_keys(j, "",
              {"preset", "spec", "dim", "p", "n", "learners", "trials", "base_seed", "stop",
               "checkpoints", "out_dir", "threads", "emit_query_logs"});

  ExperimentConfig config;
  if (j.contains("preset")) {
    if (!j["preset"].is_string()) config_error("field 'preset' must be a string");
    config.preset = j["preset"].get<std::string>();
  }
  if (j.contains("spec")) config.inline_spec = spec_from_json(j["spec"]);
  if (j.contains("dim")) {
    if (!j["dim"].is_number_unsigned()) config_error("field 'dim' must be a positive integer");
    config.dim = j["dim"].get<std::size_t>();
  }
  if (j.contains("p")) {
    if (!j["p"].is_number()) config_error("field 'p' must be a number");
    config.p = j["p"].get<double>();
  }
  if (j.contains("n")) {
    if (!j["n"].is_array()) config_error("field 'n' must be an array of positive integers");
    config.ns.clear();
    for (const auto& v : j["n"]) {
      if (!v.is_number_unsigned()) config_error("field 'n' must be an array of positive integers");
      config.ns.push_back(v.get<std::size_t>());
    }
  }
  if (j.contains("learners")) {
    if (!j["learners"].is_array()) config_error("field 'learners' must be an array");
    config.learners.clear();
    std::size_t i = 0;
    for (const auto& lj : j["learners"]) {
      config.learners.push_back(learner_from_json(lj, "learners[" + std::to_string(i++) + "]"));
    }
  }
  if (j.contains("trials")) {
    if (!j["trials"].is_number_unsigned()) config_error("field 'trials' must be a positive integer");
    config.trials = j["trials"].get<std::size_t>();
  }
  if (j.contains("base_seed")) {
    if (!j["base_seed"].is_number_unsigned()) {
      config_error("field 'base_seed' must be an unsigned integer");
    }
    config.base_seed = j["base_seed"].get<std::uint64_t>();
  }
  if (j.contains("stop")) {
    if (!j["stop"].is_string()) config_error("field 'stop' must be 'all' or 'budget:K'");
    config.stop = parse_stop_rule(j["stop"].get<std::string>());
  }
  if (j.contains("checkpoints")) {
    if (!j["checkpoints"].is_number_unsigned()) {
      config_error("field 'checkpoints' must be a positive integer");
    }
    config.checkpoints = j["checkpoints"].get<std::size_t>();
  }
  if (j.contains("out_dir")) {
    if (!j["out_dir"].is_string()) config_error("field 'out_dir' must be a string");
    config.out_dir = j["out_dir"].get<std::string>();
  }
  if (j.contains("threads")) {
    if (!j["threads"].is_number_unsigned()) {
      config_error("field 'threads' must be a nonnegative integer");
    }
    config.threads = j["threads"].get<unsigned>();
  }
  if (j.contains("emit_query_logs")) {
    if (!j["emit_query_logs"].is_boolean()) config_error("field 'emit_query_logs' must be a boolean");
    config.emit_query_logs = j["emit_query_logs"].get<bool>();
  }
  return config;
}

void apply_overrides(ExperimentConfig& config, const Overrides& overrides) {
  if (overrides.preset) {
    config.preset = *overrides.preset;
    config.inline_spec.reset();  // a preset flag replaces any inline spec
  }
  if (overrides.dim) config.dim = *overrides.dim;
  if (overrides.p) config.p = *overrides.p;
  if (!overrides.ns.empty()) config.ns = overrides.ns;
  if (!overrides.learners.empty()) {
    config.learners.clear();
    for (const std::string& name : overrides.learners) {
      LearnerChoice choice;
      choice.kind = learner_kind_from_name(name);
      config.learners.push_back(choice);
    }
  }
  if (overrides.m) {
    for (std::size_t i = 0; i < config.learners.size(); ++i) {
      config.learners[i].m = m_rule_from_text(*overrides.m, "m");
    }
  }
  if (overrides.sigma) {
    for (std::size_t i = 0; i < config.learners.size(); ++i) {
      config.learners[i].sigma = sigma_rule_from_text(*overrides.sigma, "sigma");
    }
  }
  if (overrides.trials) config.trials = *overrides.trials;
  if (overrides.seed) config.base_seed = *overrides.seed;
  if (overrides.stop) config.stop = parse_stop_rule(*overrides.stop);
  if (overrides.checkpoints) config.checkpoints = *overrides.checkpoints;
  if (overrides.out) config.out_dir = *overrides.out;
  if (overrides.threads) config.threads = *overrides.threads;
  if (overrides.emit_query_logs) config.emit_query_logs = *overrides.emit_query_logs;
}

void validate_config(const ExperimentConfig& config) {
  if (config.dim == 0) config_error("field 'dim': must be at least 1");
  if (!config.inline_spec && !(config.p > 0.0 && config.p < 1.0)) {
    config_error("field 'p': must lie in (0,1)");
  }
  if (config.ns.empty()) config_error("field 'n': need at least one pool size");
  for (const std::size_t n : config.ns) {
    if (n == 0) config_error("field 'n': pool sizes must be positive");
  }
  if (config.learners.empty()) config_error("field 'learners': need at least one learner");
  for (std::size_t i = 0; i < config.learners.size(); ++i) {
    const LearnerChoice& choice = config.learners[i];
    const std::string where = "learners[" + std::to_string(i) + "]";
    if (has_explore_phase(choice.kind) && !choice.m.recommended) {
      if (choice.m.fixed == 0) config_error("field '" + where + ".m': must be at least 1");
      for (const std::size_t n : config.ns) {
        if (choice.m.fixed > n) {
          config_error("field '" + where + ".m': m (" + std::to_string(choice.m.fixed) +
                       ") exceeds n (" + std::to_string(n) + ")");
        }
      }
    }
    if (choice.kind == LearnerKind::kUcb && !choice.sigma.automatic &&
        !(choice.sigma.fixed > 0.0)) {
      config_error("field '" + where + ".sigma': must be positive");
    }
  }
  if (config.trials == 0) config_error("field 'trials': must be at least 1");
  if (config.checkpoints == 0) config_error("field 'checkpoints': must be at least 1");
  if (config.out_dir.empty()) config_error("field 'out': output directory must be nonempty");
  if (config.inline_spec) {
    config.inline_spec->validate();
    if (config.inline_spec->dim != config.dim) {
      config_error("field 'spec.dim': inline spec dimension " +
                   std::to_string(config.inline_spec->dim) + " conflicts with dim " +
                   std::to_string(config.dim));
    }
  }
}

DistributionSpec resolve_spec(const ExperimentConfig& config) {
  if (config.inline_spec) return *config.inline_spec;
  return make_preset(config.preset, config.dim, config.p);
}

LearnerConfig resolve_learner(const LearnerChoice& choice, std::size_t n, std::size_t dim) {
  LearnerConfig lc;
  lc.kind = choice.kind;
  lc.initial_sample_m = choice.m.recommended ? recommended_m(n, dim) : choice.m.fixed;
  lc.sigma = choice.sigma.automatic ? auto_sigma(n, dim) : choice.sigma.fixed;
  return lc;
}

std::string config_hash(const ExperimentConfig& config) {
  json j;
  if (config.inline_spec) {
    j["spec"] = spec_to_json(*config.inline_spec);
  } else {
    j["preset"] = config.preset;
    j["p"] = config.p;
  }
  j["dim"] = config.dim;
  j["n"] = config.ns;
  json learners = json::array();
  for (const LearnerChoice& choice : config.learners) {
    json lj;
    lj["kind"] = std::string(to_string(choice.kind));
    if (choice.m.recommended) {
      lj["m"] = "recommended";
    } else {
      lj["m"] = choice.m.fixed;
    }
    if (choice.sigma.automatic) {
      lj["sigma"] = "auto";
    } else {
      lj["sigma"] = choice.sigma.fixed;
    }
    learners.push_back(std::move(lj));
  }
  j["learners"] = std::move(learners);
  j["trials"] = config.trials;
  j["base_seed"] = config.base_seed;
  j["stop"] = config.stop.mode == StopRule::Mode::kAllPositivesFound
                  ? "all"
                  : "budget:" + std::to_string(config.stop.budget);
  j["checkpoints"] = config.checkpoints;

  const std::string canon = j.dump();
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (const unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << h;
  return hex.str();
}

int cmd_run(const ExperimentConfig& config) {
  validate_config(config);
  if (config.ns.size() != 1) {
    config_error("field 'n': run expects exactly one pool size (use sweep for several)");
  }
  const std::size_t n = config.ns.front();
  const DistributionSpec spec = resolve_spec(config);
  const std::string hash = config_hash(config);
  const std::string meta = metadata_line(hash, config.base_seed);
  const auto dir = prepare_out_dir(config.out_dir);

  std::ostringstream results;
  results << "# " << meta << "\n";
  results << "kind,n,trial,seed,q,q_opt,q_opt_kind,excess,n_pos,auc\n";

  for (const LearnerChoice& choice : config.learners) {
    const LearnerConfig lc = resolve_learner(choice, n, spec.dim);
    const TrialBatch batch =
        run_trials(spec, n, lc, config.stop, config.trials, config.base_seed,
                   config.checkpoints, config.threads, config.emit_query_logs);

    double mean_excess = 0.0, mean_auc = 0.0;
    for (std::size_t t = 0; t < batch.results.size(); ++t) {
      const RunResult& r = batch.results[t];
      results << to_string(lc.kind) << "," << n << "," << t << ","
              << csv::format_u64(mix64(config.base_seed, t)) << "," << r.q << "," << r.q_opt
              << "," << to_string(r.q_opt_kind) << "," << r.excess << ","
              << r.n_pos << "," << csv::format_double(r.auc) << "\n";
      mean_excess += static_cast<double>(r.excess);
      mean_auc += r.auc;
    }
    mean_excess /= static_cast<double>(batch.results.size());
    mean_auc /= static_cast<double>(batch.results.size());

    if (config.emit_query_logs) {
      for (std::size_t t = 0; t < batch.logs.size(); ++t) {
        std::ostringstream name;
        name << "querylog_" << to_string(lc.kind) << "_n" << n << "_trial" << t << ".csv";
        write_text_file(dir / name.str(), query_log_csv(batch.logs[t], meta));
      }
    }

    std::cout << "kind=" << to_string(lc.kind) << " n=" << n << " trials=" << config.trials
              << " mean_excess=" << csv::format_double(mean_excess)
              << " mean_auc=" << csv::format_double(mean_auc) << "\n";
  }

  write_text_file(dir / "results.csv", results.str());
  return 0;
}

namespace {

std::string sweep_csv_text(const std::vector<SweepResult>& sweeps, const std::string& meta) {
  std::ostringstream out;
  out << "# " << meta << "\n";
  out << "kind,D,n,trials,mean_excess,std_excess,ci_low,ci_high,mean_auc,mean_Q\n";
  for (const SweepResult& sweep : sweeps) {
    for (const SweepRow& row : sweep.rows) {
      out << to_string(sweep.kind) << "," << sweep.dim << "," << row.n << "," << row.trials
          << "," << csv::format_double(row.mean_excess) << ","
          << csv::format_double(row.std_excess) << "," << csv::format_double(row.ci_low) << ","
          << csv::format_double(row.ci_high) << "," << csv::format_double(row.mean_auc) << ","
          << csv::format_double(row.mean_q) << "\n";
    }
  }
  return out.str();
}

std::string rate_fit_csv_text(
    const std::vector<std::pair<SweepResult, RateFit>>& fits, const std::string& meta) {
  std::ostringstream out;
  out << "# " << meta << "\n";
  out << "kind,D,slope,slope_ci_low,slope_ci_high,intercept,r_squared,theoretical_exponent\n";
  for (const auto& [sweep, fit] : fits) {
    out << to_string(sweep.kind) << "," << sweep.dim << "," << csv::format_double(fit.slope)
        << "," << csv::format_double(fit.slope_ci_low) << ","
        << csv::format_double(fit.slope_ci_high) << "," << csv::format_double(fit.intercept)
        << "," << csv::format_double(fit.r_squared) << ","
        << csv::format_double(theoretical_exponent(sweep.kind, sweep.dim)) << "\n";
  }
  return out.str();
}

std::optional<RateFit> try_fit(const SweepResult& sweep) {
  std::vector<double> ns, means;
  for (const SweepRow& row : sweep.rows) {
    ns.push_back(static_cast<double>(row.n));
    means.push_back(row.mean_excess);
  }
  try {
    return fit_power_law(ns, means);
  } catch (const InsufficientDataError& e) {
    std::cerr << "warning: rate fit skipped for " << to_string(sweep.kind) << ": " << e.what()
              << "\n";
    return std::nullopt;
  }
}

}  // namespace

int cmd_sweep(const ExperimentConfig& config) {
  validate_config(config);
  const DistributionSpec spec = resolve_spec(config);
  const std::string hash = config_hash(config);
  const std::string meta = metadata_line(hash, config.base_seed);
  const auto dir = prepare_out_dir(config.out_dir);

  if (config.ns.size() < 3) {
    std::cerr << "warning: fewer than 3 pool sizes; rate fits will be skipped\n";
  }

  std::vector<SweepResult> sweeps;
  for (const LearnerChoice& choice : config.learners) {
    std::vector<TrialGroup> groups;
    for (const std::size_t n : config.ns) {
      const LearnerConfig lc = resolve_learner(choice, n, spec.dim);
      TrialBatch batch = run_trials(spec, n, lc, config.stop, config.trials, config.base_seed,
                                    config.checkpoints, config.threads, false);
      TrialGroup group;
      group.kind = choice.kind;
      group.n = n;
      group.results = std::move(batch.results);
      double mean_excess = 0.0;
      for (const RunResult& r : group.results) mean_excess += static_cast<double>(r.excess);
      mean_excess /= static_cast<double>(group.results.size());
      std::cerr << "[sweep] " << to_string(choice.kind) << " n=" << n
                << " mean_excess=" << csv::format_double(mean_excess) << "\n";
      groups.push_back(std::move(group));
    }
    sweeps.push_back(summarize_sweep(groups, spec.dim));
  }

  write_text_file(dir / "sweep.csv", sweep_csv_text(sweeps, meta));

  std::vector<std::pair<SweepResult, RateFit>> fits;
  for (const SweepResult& sweep : sweeps) {
    if (const auto fit = try_fit(sweep)) fits.emplace_back(sweep, *fit);
  }
  write_text_file(dir / "rate_fit.csv", rate_fit_csv_text(fits, meta));

  const std::size_t largest = *std::max_element(config.ns.begin(), config.ns.end());
  const OrderingReport report = compare_learners(sweeps, largest);
  write_text_file(dir / "comparison.txt", "# " + meta + "\n" + report.render());

  for (const auto& [sweep, fit] : fits) {
    std::cout << "kind=" << to_string(sweep.kind) << " slope=" << csv::format_double(fit.slope)
              << " ci=[" << csv::format_double(fit.slope_ci_low) << ", "
              << csv::format_double(fit.slope_ci_high)
              << "] theoretical=" << csv::format_double(theoretical_exponent(sweep.kind, sweep.dim))
              << "\n";
  }
  std::cout << (report.strict ? "strict ordering confirmed" : "no strict ordering") << " at n="
            << largest << "\n";
  return 0;
}

int cmd_gen_data(const std::string& preset, std::size_t dim, double p, std::size_t n,
                 std::uint64_t seed, const std::string& out_path) {
  const DistributionSpec spec = make_preset(preset, dim, p);
  const Dataset data = sample_dataset(spec, n, seed);

  json j;
  j["command"] = "gen-data";
  j["preset"] = preset;
  j["dim"] = dim;
  j["p"] = p;
  j["n"] = n;
  j["seed"] = seed;
  const std::string canon = j.dump();
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (const unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << h;

  const auto parent = std::filesystem::path(out_path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec) throw Error("cannot create directory '" + parent.string() + "': " + ec.message());
  }
  write_dataset_csv(out_path, data, metadata_line(hex.str(), seed));
  std::cout << "wrote " << out_path << " (n=" << n << ", dim=" << dim
            << ", positives=" << data.positive_count() << ")\n";
  return 0;
}

int cmd_fit_rate(const std::string& sweep_csv, const std::string& out_dir) {
  std::ifstream in(sweep_csv);
  if (!in) throw FormatError("cannot open '" + sweep_csv + "'");

  std::string line;
  std::size_t line_no = 0;
  std::map<std::string, std::size_t> cols;
  // (kind, D) -> rows, in first-seen order
  std::vector<std::pair<std::pair<std::string, std::size_t>, std::vector<std::pair<double, double>>>>
      groups;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> fields = csv::split_line(line);
    if (cols.empty()) {
      for (std::size_t c = 0; c < fields.size(); ++c) cols[fields[c]] = c;
      for (const char* need : {"kind", "D", "n", "mean_excess"}) {
        if (!cols.count(need)) {
          throw FormatError(line_no, std::string("sweep CSV header missing column '") + need +
                                         "'");
        }
      }
      continue;
    }
    if (fields.size() < cols.size()) {
      throw FormatError(line_no, "expected " + std::to_string(cols.size()) + " fields, got " +
                                     std::to_string(fields.size()));
    }
    const std::string kind_name = fields[cols["kind"]];
    learner_kind_from_name(kind_name);  // validates
    const auto dim = csv::parse_u64(fields[cols["D"]]);
    const auto n = csv::parse_double(fields[cols["n"]]);
    const auto mean = csv::parse_double(fields[cols["mean_excess"]]);
    if (!dim || !n || !mean) throw FormatError(line_no, "non-numeric D, n, or mean_excess");
    const std::pair<std::string, std::size_t> key(kind_name, static_cast<std::size_t>(*dim));
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&key](const auto& g) { return g.first == key; });
    if (it == groups.end()) {
      groups.push_back({key, {}});
      it = std::prev(groups.end());
    }
    it->second.push_back({*n, *mean});
  }
  if (cols.empty()) throw FormatError("empty sweep CSV: no header row");
  if (groups.empty()) throw FormatError("empty sweep CSV: no data rows");

  std::vector<std::pair<SweepResult, RateFit>> fits;
  for (const auto& [key, rows] : groups) {
    std::vector<double> ns, means;
    for (const auto& [n, mean] : rows) {
      ns.push_back(n);
      means.push_back(mean);
    }
    SweepResult sweep;
    sweep.kind = learner_kind_from_name(key.first);
    sweep.dim = key.second;
    try {
      fits.emplace_back(sweep, fit_power_law(ns, means));
    } catch (const InsufficientDataError& e) {
      std::cerr << "warning: rate fit skipped for " << key.first << ": " << e.what() << "\n";
    }
  }
  if (fits.empty()) {
    throw InsufficientDataError("fit-rate: no learner had 3 usable (n, mean_excess) points");
  }

  const auto dir = prepare_out_dir(out_dir);
  std::ostringstream meta;
  meta << "source=" << std::filesystem::path(sweep_csv).filename().string()
       << " version=" << kVersion;
  write_text_file(dir / "rate_fit.csv", rate_fit_csv_text(fits, meta.str()));
  for (const auto& [sweep, fit] : fits) {
    std::cout << "kind=" << to_string(sweep.kind) << " slope=" << csv::format_double(fit.slope)
              << " theoretical=" << csv::format_double(theoretical_exponent(sweep.kind, sweep.dim))
              << "\n";
  }
  return 0;
}

int run_main(int argc, char** argv) {
  CLI::App app{"active covering simulator: query all positives in an unlabeled pool"};
  app.require_subcommand(1);

  Overrides ov;
  std::string config_path;
  std::string gen_preset = "cube-overlap";
  std::size_t gen_n = 1000;
  std::string gen_out = "dataset.csv";
  std::string fit_input;

  const auto add_common = [&](CLI::App* cmd, bool experiment) {
    cmd->add_option("--config", config_path, "JSON config file");
    if (experiment) {
      cmd->add_option("--learner", ov.learners, "learner kind (repeatable)");
      cmd->add_option("--n", ov.ns, "pool size (repeatable)");
      cmd->add_option_function<std::string>(
          "--preset", [&](const std::string& v) { ov.preset = v; },
          "preset name (cube-overlap, two-clusters, ball-in-sea)");
      cmd->add_option_function<std::size_t>(
          "--dim", [&](std::size_t v) { ov.dim = v; }, "dimension D");
      cmd->add_option_function<double>("--p", [&](double v) { ov.p = v; },
                                       "positive mixture probability");
      cmd->add_option_function<std::string>(
          "--m", [&](const std::string& v) { ov.m = v; },
          "initial sample size: integer or 'recommended'");
      cmd->add_option_function<std::string>(
          "--sigma", [&](const std::string& v) { ov.sigma = v; },
          "ucb radius scale: float or 'auto'");
      cmd->add_option_function<std::size_t>(
          "--trials", [&](std::size_t v) { ov.trials = v; }, "trials per (learner, n) cell");
      cmd->add_option_function<std::uint64_t>(
          "--seed", [&](std::uint64_t v) { ov.seed = v; }, "base seed");
      cmd->add_option_function<std::string>(
          "--stop", [&](const std::string& v) { ov.stop = v; }, "stop rule: all or budget:K");
      cmd->add_option_function<std::size_t>(
          "--checkpoints", [&](std::size_t v) { ov.checkpoints = v; },
          "recall-curve checkpoints B");
      cmd->add_option_function<std::string>(
          "--out", [&](const std::string& v) { ov.out = v; }, "output directory");
      cmd->add_option_function<unsigned>("--threads", [&](unsigned v) { ov.threads = v; },
                                         "worker threads (0 = hardware)")
          ->envname("ACTIVE_COVER_THREADS");
      cmd->add_flag_function(
          "--emit-query-logs",
          [&](std::int64_t count) { ov.emit_query_logs = count > 0; },
          "write per-trial query logs");
    }
  };

  CLI::App* run = app.add_subcommand("run", "run one batch of trials at a single pool size");
  add_common(run, true);
  CLI::App* sweep = app.add_subcommand("sweep", "run all (learner, n, trial) cells and fit rates");
  add_common(sweep, true);

  CLI::App* gen = app.add_subcommand("gen-data", "sample a dataset CSV from a preset");
  gen->add_option("--preset", gen_preset, "preset name");
  gen->add_option_function<std::size_t>("--dim", [&](std::size_t v) { ov.dim = v; },
                                        "dimension D");
  gen->add_option_function<double>("--p", [&](double v) { ov.p = v; },
                                   "positive mixture probability");
  gen->add_option("--n", gen_n, "number of points");
  gen->add_option_function<std::uint64_t>("--seed", [&](std::uint64_t v) { ov.seed = v; },
                                          "sampling seed");
  gen->add_option("--out", gen_out, "output CSV path");

  CLI::App* fit = app.add_subcommand("fit-rate", "fit power-law slopes from a sweep CSV");
  fit->add_option("input", fit_input, "sweep CSV path")->required();
  fit->add_option_function<std::string>(
      "--out", [&](const std::string& v) { ov.out = v; }, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (gen->parsed()) {
      return cmd_gen_data(gen_preset, ov.dim.value_or(2), ov.p.value_or(0.3), gen_n,
                          ov.seed.value_or(1), gen_out);
    }
    if (fit->parsed()) {
      return cmd_fit_rate(fit_input, ov.out.value_or("results"));
    }
    ExperimentConfig config;
    if (!config_path.empty()) config = load_config(config_path);
    apply_overrides(config, ov);
    if (run->parsed()) return cmd_run(config);
    return cmd_sweep(config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace activecover::cli
