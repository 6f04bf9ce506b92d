#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "knapq/generators.hpp"
#include "knapq/instance.hpp"
#include "knapq/rational.hpp"

namespace knapq {

enum class ExperimentKind { consistency, approx, querycount };

ExperimentKind experiment_kind_from_name(const std::string& name);
const char* experiment_kind_name(ExperimentKind kind);

// One instance to run: a file path or a generator spec. The label names the
// report rows; when empty it is derived from the source.
struct InstanceSource {
  std::string label;
  std::string path;
  std::optional<GenSpec> gen;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::consistency;
  std::vector<InstanceSource> sources;
  std::vector<Rational> epsilons;
  uint64_t trials = 1;  // consistency interprets this as pair count
  std::array<uint8_t, 32> seed{};
  uint64_t nonce_base = 0;
  std::string out_path;  // when set, rows are appended here as JSON lines
  bool check = false;
};

// The standard epsilon grid; 1/8 is the practical floor, since the quantile
// sample size grows with the eighth power of 1/epsilon.
std::vector<Rational> default_epsilons();

struct ExperimentResult {
  std::vector<std::string> rows;  // serialized JSON objects, one per (instance, epsilon)
  bool check_ok = true;           // every per-row and cross-row threshold held
};

// Runs the configured experiment. One row per (instance, epsilon); rows are
// byte-for-byte reproducible from the config. Trial t of a row derives its
// run nonce as nonce_base + t; consistency pairs use nonce_base + 2t and
// nonce_base + 2t + 1. Oracle budget overruns mark the row instead of
// failing the run.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Flattens report rows into a fixed-column CSV (header included). Fields a
// row lacks stay empty.
std::string summarize_csv(const std::vector<std::string>& rows);

// Reads a JSON-lines report file and summarizes it.
std::string summarize_report_file(const std::string& jsonl_path);

}  // namespace knapq
