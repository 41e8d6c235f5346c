#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gnnseed/gcn.hpp"
#include "gnnseed/io.hpp"
#include "gnnseed/pipelines.hpp"
#include "gnnseed/synth.hpp"
#include "gnnseed/types.hpp"

namespace gnnseed {

enum class Task { Cluster, Classify };
enum class OutputFormat { Csv, Json };

std::string task_name(Task t);

struct GeneratorSpec {
  std::string model = "dcsbm";  // "sbm" | "dcsbm"
  int n = 0;
  int k = 0;
  double intra = 0.3;
  std::vector<double> r_grid;       // inter-community probabilities
  std::vector<double> proportions;  // community size weights
  double beta_a = 1.0;
  double beta_b = 4.0;
};

// Either a pair of files or a generator; `name` keys the output rows and the
// seed derivation.
struct SourceSpec {
  std::string name;
  std::string edges_path, labels_path;
  bool synthetic = false;
  GeneratorSpec gen;
};

struct ExperimentConfig {
  Task task = Task::Cluster;
  SourceSpec source;
  std::vector<Method> methods;
  std::vector<double> ratios;  // train+val fractions, classification only
  int trials = 1;
  uint64_t base_seed = 0;
  TrainConfig train;
  int gee_replicates = 10;
  int gee_max_iter = 30;
  std::string out_path;  // empty: no file written
  OutputFormat format = OutputFormat::Csv;
  int threads = 0;  // 0 = GNNSEED_THREADS env or hardware concurrency
  std::string trace_dir;   // per-cell epoch traces when non-empty
  std::string export_dir;  // synthetic graphs exported when non-empty

  void validate() const;
};

struct RunRow {
  int cell = 0;  // canonical cell index; row order is independent of scheduling
  std::string dataset, task, method;
  double ratio = -1.0;  // negative = not applicable
  double r = -1.0;      // negative = not applicable
  int trial = 0;
  uint64_t seed = 0;
  std::string metric;
  double value = 0.0;
  bool has_value = false;
  int epochs = 0;
  double wall_time = 0.0;
  std::string status;  // "ok" or "error: reason"
};

struct Aggregate {
  std::string dataset, task, method, metric;
  double ratio = -1.0, r = -1.0;
  int n_trials = 0;
  double mean = 0.0;
  double stderr_ = 0.0;  // sample stddev / sqrt(n_trials)
};

struct RunReport {
  std::vector<RunRow> rows;
  std::vector<Aggregate> aggregates;
  bool any_failed = false;
};

// Executes trials x methods x (ratios and/or r-grid) cells on a bounded
// worker pool. Every cell's seed is a pure function of (base_seed, dataset,
// method, ratio, r, trial), so scheduling and pool size never change any
// metric. Rows are journaled to <out_path>.partial as cells finish and the
// canonical sorted report (with aggregates) replaces out_path at the end.
RunReport run_experiment(const ExperimentConfig& cfg);

std::string report_csv(const RunReport& report);
std::string report_json(const RunReport& report);

// "a:b:step" (inclusive of b up to rounding), "x,y,z", or a single number.
std::vector<double> parse_grid(const std::string& text);

// flag value if positive, else GNNSEED_THREADS if set and positive, else
// hardware concurrency.
int resolve_threads(int flag_value);

// Pure seed derivation helpers, exposed for tests.
uint64_t method_cell_seed(uint64_t base, const std::string& dataset, const std::string& method,
                          double ratio, double r, int trial);
uint64_t graph_cell_seed(uint64_t base, const std::string& dataset, double r, int trial);
uint64_t split_cell_seed(uint64_t base, const std::string& dataset, double ratio, double r,
                         int trial);

}  // namespace gnnseed
