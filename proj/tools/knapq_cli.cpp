#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "knapq/experiment.hpp"
#include "knapq/generators.hpp"
#include "knapq/hardness.hpp"
#include "knapq/json_io.hpp"
#include "knapq/local_solver.hpp"
#include "knapq/oracles.hpp"

namespace {

using knapq::Rational;
using ordered_json = nlohmann::ordered_json;

Rational parse_epsilon(const std::string& text) {
  const Rational eps = Rational::parse(text);
  if (!(eps > Rational(0)) || eps > Rational(1))
    throw CLI::ValidationError("--epsilon", "must lie in (0, 1]");
  return eps;
}

// Solver knobs shared by query and materialize. Empty strings mean "keep the
// derived default".
struct SolverFlags {
  std::string epsilon;
  std::string tau;
  std::string rho;
  std::string beta;
  int domain_bits = 0;
  double rep_constant = -1.0;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& flags) {
  cmd->add_option("--epsilon", flags.epsilon, "accuracy parameter, a rational in (0, 1]")
      ->required();
  cmd->add_option("--tau", flags.tau, "quantile accuracy override (rational)");
  cmd->add_option("--rho", flags.rho, "quantile reproducibility override (rational)");
  cmd->add_option("--beta", flags.beta, "quantile failure budget override (rational)");
  cmd->add_option("--domain-bits", flags.domain_bits, "efficiency code width override");
  cmd->add_option("--rq-rep-constant", flags.rep_constant,
                  "replication constant of the quantile sample bound");
}

knapq::LcaConfig config_from_flags(const SolverFlags& flags) {
  auto cfg = knapq::LcaConfig::derive(parse_epsilon(flags.epsilon));
  if (!flags.tau.empty()) cfg.tau = Rational::parse(flags.tau);
  if (!flags.rho.empty()) cfg.rho = Rational::parse(flags.rho);
  if (!flags.beta.empty()) cfg.beta = Rational::parse(flags.beta);
  if (flags.domain_bits > 0) cfg.domain_bits = flags.domain_bits;
  if (flags.rep_constant >= 0.0) cfg.rep_constant = flags.rep_constant;
  cfg.refresh();
  return cfg;
}

ordered_json query_record(uint64_t samples, int branch,
                          const std::optional<Rational>& e_small, uint64_t t_prime) {
  ordered_json out;
  out["samples_drawn"] = samples;
  out["branch"] = branch;
  out["e_small"] = e_small.has_value() ? ordered_json(e_small->str()) : ordered_json(nullptr);
  out["t_prime"] = t_prime;
  return out;
}

void emit(const ordered_json& doc) { std::cout << doc.dump() << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"knapsack local-computation toolkit"};
  app.require_subcommand(1);

  // gen
  std::string gen_profile = "uniform", gen_seed, gen_out;
  size_t gen_n = 0;
  uint64_t gen_nonce = 0;
  auto* gen = app.add_subcommand("gen", "generate an instance file");
  gen->add_option("--profile", gen_profile, "uniform | small_items | large_heavy | mixed");
  gen->add_option("--n", gen_n, "item count")->required();
  gen->add_option("--seed", gen_seed, "hex seed, up to 64 digits");
  gen->add_option("--nonce", gen_nonce, "generator stream nonce");
  gen->add_option("--out", gen_out, "output path")->required();

  // query / materialize
  std::string q_instance, q_seed;
  uint64_t q_nonce = 0;
  size_t q_item = 0;
  SolverFlags q_flags;
  auto* query = app.add_subcommand("query", "answer one membership query");
  query->add_option("--instance", q_instance, "instance file")->required();
  query->add_option("--seed", q_seed, "hex seed shared by all queries of a run");
  query->add_option("--run-nonce", q_nonce, "per-run nonce");
  query->add_option("--item", q_item, "item index to test")->required();
  add_solver_flags(query, q_flags);

  std::string m_instance, m_seed;
  uint64_t m_nonce = 0;
  SolverFlags m_flags;
  auto* materialize = app.add_subcommand("materialize", "materialize the full solution");
  materialize->add_option("--instance", m_instance, "instance file")->required();
  materialize->add_option("--seed", m_seed, "hex seed shared by all queries of a run");
  materialize->add_option("--run-nonce", m_nonce, "per-run nonce");
  add_solver_flags(materialize, m_flags);

  // solve
  std::string s_instance, s_oracle;
  auto* solve = app.add_subcommand("solve", "run a reference solver");
  solve->add_option("--instance", s_instance, "instance file")->required();
  solve->add_option("--oracle", s_oracle, "brute | dp | greedy | fractional")->required();

  // experiment
  std::vector<std::string> e_instances, e_epsilons;
  std::string e_profile = "uniform", e_seed, e_out, e_csv;
  std::vector<size_t> e_ns;
  uint64_t e_trials = 100, e_nonce_base = 0, e_gen_nonce = 0;
  bool e_check = false;
  auto* experiment = app.add_subcommand("experiment", "run a batch experiment");
  experiment->require_subcommand(1);
  std::vector<CLI::App*> kinds;
  for (const char* kind : {"consistency", "approx", "querycount"}) {
    auto* sub = experiment->add_subcommand(kind);
    sub->add_option("--instance", e_instances, "instance file (repeatable)");
    sub->add_option("--profile", e_profile, "generator profile for --n sources");
    sub->add_option("--n", e_ns, "generate an instance of this size (repeatable)");
    sub->add_option("--gen-nonce", e_gen_nonce, "generator stream nonce");
    sub->add_option("--epsilon", e_epsilons, "epsilon (repeatable; default grid otherwise)");
    sub->add_option("--trials", e_trials, "trials (pairs for consistency) per row");
    sub->add_option("--seed", e_seed, "hex seed");
    sub->add_option("--nonce-base", e_nonce_base, "first run nonce");
    sub->add_option("--out", e_out, "append report rows to this JSONL file");
    sub->add_option("--csv", e_csv, "write a CSV summary of this run's rows");
    sub->add_flag("--check", e_check, "exit nonzero when a threshold is violated");
    kinds.push_back(sub);
  }

  // hardness
  std::string h_family = "maximal_pair", h_strategy, h_seed;
  size_t h_n = 0;
  uint64_t h_trials = 1000, h_budget = 0;
  auto* hardness = app.add_subcommand("hardness", "play the probe-budget adversary game");
  hardness->add_option("--family", h_family, "instance family (maximal_pair)");
  hardness->add_option("--n", h_n, "items per drawn instance")->required();
  hardness->add_option("--trials", h_trials, "independent two-query trials");
  hardness->add_option("--budget", h_budget, "probe budget per query")->required();
  hardness->add_option("--strategy", h_strategy, "always_yes | scan_all | random_probe")
      ->required();
  hardness->add_option("--seed", h_seed, "hex seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      knapq::GenSpec spec;
      spec.profile = knapq::profile_from_name(gen_profile);
      spec.n = gen_n;
      spec.seed = knapq::RandomnessPlan::seed_from_hex(gen_seed);
      spec.nonce = gen_nonce;
      const auto inst = knapq::generate_instance(spec);
      knapq::save_instance(inst, gen_out);
      ordered_json out;
      out["instance"] = knapq::instance_label(spec);
      out["path"] = gen_out;
      out["n"] = inst.size();
      emit(out);
      return 0;
    }

    if (query->parsed()) {
      const auto inst = knapq::load_instance(q_instance);
      const auto cfg = config_from_flags(q_flags);
      const auto plan = knapq::RandomnessPlan::from_hex(q_seed, q_nonce);
      const auto result = knapq::answer_query(inst, q_item, cfg, plan);
      ordered_json out;
      out["answer"] = result.answer;
      out.update(query_record(result.samples_drawn, result.branch, result.e_small,
                              result.t_prime));
      emit(out);
      return 0;
    }

    if (materialize->parsed()) {
      const auto inst = knapq::load_instance(m_instance);
      const auto cfg = config_from_flags(m_flags);
      const auto plan = knapq::RandomnessPlan::from_hex(m_seed, m_nonce);
      const auto run = knapq::run_pipeline(inst, cfg, plan);
      ordered_json out;
      out["answer"] = run.solution;
      out.update(query_record(run.build.record.samples_drawn, run.summary.branch,
                              run.summary.e_small, run.build.record.t_prime));
      emit(out);
      return 0;
    }

    if (solve->parsed()) {
      const auto inst = knapq::load_instance(s_instance);
      ordered_json out;
      out["oracle"] = s_oracle;
      if (s_oracle == "fractional") {
        out["chosen"] = nullptr;
        out["value"] = knapq::fractional_greedy_value(inst).str();
        out["weight"] = nullptr;
      } else {
        knapq::SolveResult result;
        if (s_oracle == "brute") {
          result = knapq::brute_force(inst);
        } else if (s_oracle == "dp") {
          result = knapq::dp_exact(inst);
        } else if (s_oracle == "greedy") {
          result = knapq::greedy_half(inst);
        } else {
          throw CLI::ValidationError("--oracle", "unknown oracle " + s_oracle);
        }
        out["chosen"] = result.chosen;
        out["value"] = result.value.str();
        out["weight"] = result.weight.str();
      }
      emit(out);
      return 0;
    }

    if (experiment->parsed()) {
      knapq::ExperimentConfig config;
      for (size_t k = 0; k < kinds.size(); ++k) {
        if (kinds[k]->parsed())
          config.kind = knapq::experiment_kind_from_name(kinds[k]->get_name());
      }
      for (const auto& path : e_instances) {
        knapq::InstanceSource src;
        src.path = path;
        config.sources.push_back(src);
      }
      for (const size_t n : e_ns) {
        knapq::InstanceSource src;
        knapq::GenSpec spec;
        spec.profile = knapq::profile_from_name(e_profile);
        spec.n = n;
        spec.seed = knapq::RandomnessPlan::seed_from_hex(e_seed);
        spec.nonce = e_gen_nonce;
        src.gen = spec;
        config.sources.push_back(src);
      }
      if (e_epsilons.empty()) {
        config.epsilons = knapq::default_epsilons();
      } else {
        for (const auto& text : e_epsilons) config.epsilons.push_back(parse_epsilon(text));
      }
      config.trials = e_trials;
      config.seed = knapq::RandomnessPlan::seed_from_hex(e_seed);
      config.nonce_base = e_nonce_base;
      config.out_path = e_out;
      config.check = e_check;

      const auto result = knapq::run_experiment(config);
      for (const auto& row : result.rows) std::cout << row << '\n';
      if (!e_csv.empty()) {
        std::ofstream csv(e_csv, std::ios::binary | std::ios::trunc);
        if (!csv) throw std::runtime_error("experiment: cannot open " + e_csv);
        csv << knapq::summarize_csv(result.rows);
      }
      if (e_check && !result.check_ok) {
        std::cerr << "experiment: threshold violated\n";
        return 1;
      }
      return 0;
    }

    if (hardness->parsed()) {
      std::unique_ptr<knapq::ProbeStrategy> strategy;
      if (h_strategy == "always_yes") {
        strategy = std::make_unique<knapq::AlwaysYesStrategy>();
      } else if (h_strategy == "scan_all") {
        strategy = std::make_unique<knapq::ScanAllStrategy>();
      } else if (h_strategy == "random_probe") {
        strategy = std::make_unique<knapq::RandomProbeStrategy>();
      } else {
        throw CLI::ValidationError("--strategy", "unknown strategy " + h_strategy);
      }
      knapq::HardFamily family;
      if (h_family == "maximal_pair") {
        family = knapq::HardFamily::maximal_pair;
      } else if (h_family == "or_optimal") {
        family = knapq::HardFamily::or_optimal;
      } else if (h_family == "or_approx") {
        family = knapq::HardFamily::or_approx;
      } else {
        throw CLI::ValidationError("--family", "unknown family " + h_family);
      }
      const auto seed = knapq::RandomnessPlan::seed_from_hex(h_seed);
      const auto report = knapq::run_adversary(*strategy, family, h_n, h_trials, h_budget, seed);
      ordered_json out;
      out["error_rate"] = report.error_rate;
      out["mean_probes"] = report.mean_probes;
      out["trials"] = report.trials;
      out["errors"] = report.errors;
      out["budget_exceeded"] = report.budget_exceeded;
      out["total_probes"] = report.total_probes;
      emit(out);
      return 0;
    }
  } catch (const CLI::Error& err) {
    return app.exit(err);
  } catch (const std::exception& err) {
    std::cerr << "knapq: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
