#include "knapq/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "knapq/json_io.hpp"
#include "knapq/local_solver.hpp"
#include "knapq/oracles.hpp"

namespace knapq {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kSchema = "knapq-report-v1";

// One-sided binomial tolerance around a target rate.
double three_sigma(double p, double n) { return 3.0 * std::sqrt(p * (1.0 - p) / n); }

std::string basename_of(const std::string& path) {
  const size_t slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

std::string source_label(const InstanceSource& src) {
  if (!src.label.empty()) return src.label;
  if (src.gen.has_value()) return instance_label(*src.gen);
  return basename_of(src.path);
}

KnapsackInstance resolve_source(const InstanceSource& src) {
  if (src.gen.has_value()) return generate_instance(*src.gen);
  if (src.path.empty()) throw std::invalid_argument("experiment: source has no path and no spec");
  return load_instance(src.path);
}

std::vector<uint32_t> to_u32(const std::vector<size_t>& indices) {
  return std::vector<uint32_t>(indices.begin(), indices.end());
}

// Run-derived parameter block; the run-dependent entries (q, t, a, samples)
// come from the row's first trial.
ordered_json params_block(const LcaConfig& cfg, const RunRecord& first) {
  ordered_json params;
  params["epsilon"] = cfg.epsilon.str();
  params["tau"] = cfg.tau.str();
  params["rho"] = cfg.rho.str();
  params["beta"] = cfg.beta.str();
  params["domain_bits"] = cfg.domain_bits;
  params["m"] = cfg.m;
  params["n_rq"] = cfg.n_rq;
  params["q"] = first.eps_branch ? ordered_json(first.q.str()) : ordered_json(nullptr);
  params["t"] = first.t;
  params["t_prime"] = first.t_prime;
  params["a"] = first.a;
  params["samples_per_query"] = first.samples_drawn;
  return params;
}

ordered_json row_head(ExperimentKind kind, const std::string& label, size_t n,
                      const Rational& eps, uint64_t trials) {
  ordered_json row;
  row["schema"] = kSchema;
  row["kind"] = experiment_kind_name(kind);
  row["instance"] = label;
  row["n"] = n;
  row["epsilon"] = eps.str();
  row["trials"] = trials;
  return row;
}

ordered_json check_block(const std::vector<std::string>& violations) {
  ordered_json check;
  check["ok"] = violations.empty();
  check["violations"] = violations;
  return check;
}

bool covers_large(const PartitionTable& part, const ReducedInstance& reduced) {
  std::set<size_t> sampled;
  for (const auto& item : reduced.large) sampled.insert(item.orig_index);
  for (int32_t index : part.large) {
    if (!sampled.count(static_cast<size_t>(index))) return false;
  }
  return true;
}

ordered_json run_consistency_row(const KnapsackInstance& inst, const std::string& label,
                                 const Rational& eps, const ExperimentConfig& config,
                                 std::vector<std::string>& violations) {
  const LcaConfig cfg = LcaConfig::derive(eps);
  const PartitionTable part = partition(inst, eps);
  const uint64_t pairs = config.trials;

  uint64_t agreements = 0, feasible_runs = 0, eps_valid = 0;
  uint64_t covered_runs = 0, eps_valid_covered = 0;
  uint64_t total_samples = 0;
  std::optional<RunRecord> first;
  for (uint64_t t = 0; t < pairs; ++t) {
    RandomnessPlan plan_a{config.seed, config.nonce_base + 2 * t};
    RandomnessPlan plan_b{config.seed, config.nonce_base + 2 * t + 1};
    const RunOutput a = run_pipeline(inst, cfg, plan_a);
    const RunOutput b = run_pipeline(inst, cfg, plan_b);
    if (!first.has_value()) first = a.build.record;
    if (a.solution == b.solution) ++agreements;
    for (const RunOutput* run : {&a, &b}) {
      const auto picked = evaluate_selection(inst, to_u32(run->solution));
      if (picked.weight <= inst.capacity()) ++feasible_runs;
      total_samples += run->build.record.samples_drawn;
      const bool valid = check_eps_sequence(inst, part, run->build.seq).ok;
      if (valid) ++eps_valid;
      if (covers_large(part, run->build.reduced)) {
        ++covered_runs;
        if (valid) ++eps_valid_covered;
      }
    }
  }

  const double runs = 2.0 * static_cast<double>(pairs);
  const double rate = static_cast<double>(agreements) / static_cast<double>(pairs);
  const double feasibility_rate = static_cast<double>(feasible_runs) / runs;
  const double eps_rate = static_cast<double>(eps_valid) / runs;

  ordered_json row = row_head(ExperimentKind::consistency, label, inst.size(), eps, pairs);
  row["params"] = params_block(cfg, *first);
  ordered_json metrics;
  metrics["pairs"] = pairs;
  metrics["agreements"] = agreements;
  metrics["consistency_rate"] = rate;
  metrics["feasible_runs"] = feasible_runs;
  metrics["feasibility_violations"] = 2 * pairs - feasible_runs;
  metrics["eps_valid_rate"] = eps_rate;
  metrics["large_covered_runs"] = covered_runs;
  metrics["eps_valid_given_covered"] =
      covered_runs ? ordered_json(static_cast<double>(eps_valid_covered) /
                                  static_cast<double>(covered_runs))
                   : ordered_json(nullptr);
  metrics["samples_per_query"] = static_cast<double>(total_samples) / runs;
  metrics["probes_per_query"] = static_cast<double>(inst.size());
  row["metrics"] = metrics;

  const double eps_d = eps.to_double();
  if (rate < 1.0 - eps_d - three_sigma(eps_d, static_cast<double>(pairs)))
    violations.push_back(label + "/" + eps.str() + ": consistency_rate");
  if (feasibility_rate < 0.999 - three_sigma(0.001, runs))
    violations.push_back(label + "/" + eps.str() + ": feasibility");
  return row;
}

ordered_json run_approx_row(const KnapsackInstance& inst, const std::string& label,
                            const Rational& eps, const ExperimentConfig& config,
                            std::vector<std::string>& violations) {
  const LcaConfig cfg = LcaConfig::derive(eps);
  ordered_json row = row_head(ExperimentKind::approx, label, inst.size(), eps, config.trials);

  std::optional<Rational> opt;
  try {
    opt = dp_value(inst);
  } catch (const std::length_error&) {
    // Oracle out of budget: mark the row and skip the trials.
  }
  if (!opt.has_value() || opt->is_zero()) {
    row["params"] = nullptr;
    ordered_json metrics;
    metrics["oracle_ok"] = false;
    row["metrics"] = metrics;
    return row;
  }

  const Rational bound = *opt / Rational(2) - Rational(6) * eps;
  uint64_t successes = 0, violations_count = 0, total_samples = 0;
  double ratio_sum = 0.0;
  std::optional<RunRecord> first;
  for (uint64_t t = 0; t < config.trials; ++t) {
    RandomnessPlan plan{config.seed, config.nonce_base + t};
    const RunOutput run = run_pipeline(inst, cfg, plan);
    if (!first.has_value()) first = run.build.record;
    const auto picked = evaluate_selection(inst, to_u32(run.solution));
    if (picked.weight > inst.capacity()) ++violations_count;
    if (picked.value >= bound) ++successes;
    ratio_sum += (picked.value / *opt).to_double();
    total_samples += run.build.record.samples_drawn;
  }

  const double trials_d = static_cast<double>(config.trials);
  const double rate = static_cast<double>(successes) / trials_d;
  row["params"] = params_block(cfg, *first);
  ordered_json metrics;
  metrics["oracle_ok"] = true;
  metrics["opt"] = opt->str();
  metrics["successes"] = successes;
  metrics["approx_success_rate"] = rate;
  metrics["mean_ratio"] = ratio_sum / trials_d;
  metrics["feasibility_violations"] = violations_count;
  metrics["samples_per_query"] = static_cast<double>(total_samples) / trials_d;
  metrics["probes_per_query"] = static_cast<double>(inst.size());
  row["metrics"] = metrics;

  const double eps_d = eps.to_double();
  if (rate < 1.0 - eps_d - three_sigma(eps_d, trials_d))
    violations.push_back(label + "/" + eps.str() + ": approx_success_rate");
  if (static_cast<double>(violations_count) / trials_d >
      0.001 + three_sigma(0.001, trials_d))
    violations.push_back(label + "/" + eps.str() + ": feasibility");
  return row;
}

ordered_json run_querycount_row(const KnapsackInstance& inst, const std::string& label,
                                const Rational& eps, const ExperimentConfig& config,
                                std::vector<std::string>& violations,
                                std::map<std::string, std::set<uint64_t>>& samples_by_eps) {
  const LcaConfig cfg = LcaConfig::derive(eps);
  uint64_t samples_min = UINT64_MAX, samples_max = 0, total_samples = 0;
  std::optional<RunRecord> first;
  for (uint64_t t = 0; t < config.trials; ++t) {
    RandomnessPlan plan{config.seed, config.nonce_base + t};
    const RunOutput run = run_pipeline(inst, cfg, plan);
    if (!first.has_value()) first = run.build.record;
    const uint64_t s = run.build.record.samples_drawn;
    samples_min = std::min(samples_min, s);
    samples_max = std::max(samples_max, s);
    total_samples += s;
    samples_by_eps[eps.str()].insert(s);
  }

  ordered_json row = row_head(ExperimentKind::querycount, label, inst.size(), eps, config.trials);
  row["params"] = params_block(cfg, *first);
  ordered_json metrics;
  metrics["samples_min"] = samples_min;
  metrics["samples_max"] = samples_max;
  metrics["samples_constant"] = samples_min == samples_max;
  metrics["samples_per_query"] = static_cast<double>(total_samples) /
                                 static_cast<double>(config.trials);
  metrics["probes_per_query"] = static_cast<double>(inst.size());
  row["metrics"] = metrics;

  if (samples_min != samples_max)
    violations.push_back(label + "/" + eps.str() + ": samples_constant");
  return row;
}

}  // namespace

ExperimentKind experiment_kind_from_name(const std::string& name) {
  if (name == "consistency") return ExperimentKind::consistency;
  if (name == "approx") return ExperimentKind::approx;
  if (name == "querycount") return ExperimentKind::querycount;
  throw std::invalid_argument("experiment: unknown kind " + name);
}

const char* experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::consistency: return "consistency";
    case ExperimentKind::approx: return "approx";
    case ExperimentKind::querycount: return "querycount";
  }
  throw std::invalid_argument("experiment: unknown kind");
}

std::vector<Rational> default_epsilons() {
  return {Rational::ratio(1, 2), Rational::ratio(1, 3), Rational::ratio(1, 4),
          Rational::ratio(1, 8)};
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.sources.empty()) throw std::invalid_argument("experiment: no instances");
  if (config.trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
  if (config.epsilons.empty()) throw std::invalid_argument("experiment: no epsilons");
  for (const auto& eps : config.epsilons) {
    if (!(eps > Rational(0)) || eps > Rational(1))
      throw std::invalid_argument("experiment: epsilon must lie in (0, 1]");
  }

  ExperimentResult result;
  std::vector<std::string> violations;
  std::map<std::string, std::set<uint64_t>> samples_by_eps;
  for (const auto& source : config.sources) {
    const KnapsackInstance inst = resolve_source(source);
    const std::string label = source_label(source);
    for (const auto& eps : config.epsilons) {
      std::vector<std::string> row_violations;
      ordered_json row;
      switch (config.kind) {
        case ExperimentKind::consistency:
          row = run_consistency_row(inst, label, eps, config, row_violations);
          break;
        case ExperimentKind::approx:
          row = run_approx_row(inst, label, eps, config, row_violations);
          break;
        case ExperimentKind::querycount:
          row = run_querycount_row(inst, label, eps, config, row_violations, samples_by_eps);
          break;
      }
      row["check"] = check_block(row_violations);
      violations.insert(violations.end(), row_violations.begin(), row_violations.end());
      result.rows.push_back(row.dump());
    }
  }

  // The query-count claim is cross-row: every instance must draw the same
  // sample count at a given epsilon.
  for (const auto& [eps, seen] : samples_by_eps) {
    if (seen.size() > 1) violations.push_back(eps + ": samples vary across instances");
  }

  result.check_ok = violations.empty();
  if (!config.out_path.empty()) {
    std::ofstream out(config.out_path, std::ios::binary | std::ios::app);
    if (!out) throw std::runtime_error("experiment: cannot open " + config.out_path);
    for (const auto& row : result.rows) out << row << '\n';
  }
  return result;
}

std::string summarize_csv(const std::vector<std::string>& rows) {
  static const char* kColumns[] = {
      "kind", "instance", "n", "epsilon", "trials",
      "consistency_rate", "approx_success_rate", "mean_ratio", "feasibility_violations",
      "eps_valid_rate", "samples_per_query", "probes_per_query", "samples_constant", "check_ok"};
  std::ostringstream out;
  for (size_t c = 0; c < std::size(kColumns); ++c)
    out << (c ? "," : "") << kColumns[c];
  out << '\n';
  for (const auto& line : rows) {
    const auto row = ordered_json::parse(line);
    const auto& metrics = row.contains("metrics") ? row.at("metrics") : ordered_json();
    const auto cell = [&](const std::string& name) -> std::string {
      ordered_json value;
      if (name == "check_ok") {
        if (row.contains("check")) value = row.at("check").at("ok");
      } else if (row.contains(name)) {
        value = row.at(name);
      } else if (metrics.is_object() && metrics.contains(name)) {
        value = metrics.at(name);
      }
      if (value.is_null()) return "";
      if (value.is_string()) return value.get<std::string>();
      return value.dump();
    };
    for (size_t c = 0; c < std::size(kColumns); ++c)
      out << (c ? "," : "") << cell(kColumns[c]);
    out << '\n';
  }
  return out.str();
}

std::string summarize_report_file(const std::string& jsonl_path) {
  std::ifstream in(jsonl_path, std::ios::binary);
  if (!in) throw std::runtime_error("summarize: cannot open " + jsonl_path);
  std::vector<std::string> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(line);
  }
  return summarize_csv(rows);
}

}  // namespace knapq
