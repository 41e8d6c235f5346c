// Command-line front end: batch clustering/classification sweeps over file or
// generated graphs, standalone graph generation, and raw embedding export.
#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gnnseed/experiment.hpp"
#include "gnnseed/gee.hpp"
#include "gnnseed/metrics.hpp"

namespace {

using namespace gnnseed;

// Options shared by every subcommand that runs experiments.
struct SourceOpts {
  std::string edges, labels, name;
  std::string model = "dcsbm";
  int n = 0, k = 0;
  double intra = 0.3;
  std::string r_grid;
  std::string theta = "beta:1,4";
  std::string sizes;
};

struct TrainOpts {
  double lr = -1.0;
  int max_epochs = -1;
  int patience = -1;
  double loss_tolerance = -1.0;
  double dropout = -1.0;
  double weight_decay = -1.0;
};

struct RunOpts {
  std::string methods;
  int trials = 1;
  uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
  int threads = 0;
  std::string trace_dir, export_dir;
  int gee_replicates = 10;
  int gee_max_iter = 30;
};

void add_source_options(CLI::App* cmd, SourceOpts& s) {
  cmd->add_option("--edges", s.edges, "Edge-list file (one 'u v' pair per line)");
  cmd->add_option("--labels", s.labels, "Label file (one integer per line, -1 = unknown)");
  cmd->add_option("--name", s.name, "Dataset name used in output rows and seed derivation");
  cmd->add_option("--model", s.model, "Generator model: sbm | dcsbm")
      ->check(CLI::IsMember({"sbm", "dcsbm"}));
  cmd->add_option("--n", s.n, "Generator: node count");
  cmd->add_option("--k", s.k, "Generator: community count");
  cmd->add_option("--intra", s.intra, "Generator: within-community edge probability");
  cmd->add_option("--r-grid", s.r_grid,
                  "Generator: cross-community probabilities, 'a:b:step' or 'x,y,z'");
  cmd->add_option("--theta", s.theta,
                  "Generator: degree propensity law, 'beta:a,b' or 'none'");
  cmd->add_option("--sizes", s.sizes,
                  "Generator: community size proportions, e.g. '1:2:3:4' (default equal)");
}

void add_train_options(CLI::App* cmd, TrainOpts& t) {
  cmd->add_option("--lr", t.lr, "Learning rate");
  cmd->add_option("--max-epochs", t.max_epochs, "Training epoch cap");
  cmd->add_option("--patience", t.patience, "Early-stopping patience in epochs");
  cmd->add_option("--loss-tolerance", t.loss_tolerance, "Minimum loss improvement that counts");
  cmd->add_option("--dropout", t.dropout, "Hidden-layer dropout probability");
  cmd->add_option("--weight-decay", t.weight_decay, "L2 coefficient on the weights");
}

void add_run_options(CLI::App* cmd, RunOpts& r, const std::string& default_methods) {
  r.methods = default_methods;
  cmd->add_option("--methods", r.methods, "Comma-separated subset of gee,gnn,gg,ggc");
  cmd->add_option("--trials", r.trials, "Independent trials per cell")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", r.seed, "Base seed; every cell derives its own from it");
  cmd->add_option("--out", r.out, "Output file (default: print to stdout)");
  cmd->add_option("--format", r.format, "Output format: csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads", r.threads,
                  "Worker pool size (default: GNNSEED_THREADS env, then CPU count)");
  cmd->add_option("--trace-dir", r.trace_dir, "Write per-cell epoch traces into this directory");
  cmd->add_option("--export-dir", r.export_dir, "Write generated graphs into this directory");
  cmd->add_option("--gee-replicates", r.gee_replicates,
                  "Random restarts of the encoder clustering loop");
  cmd->add_option("--gee-max-iter", r.gee_max_iter, "Iteration cap of the encoder clustering loop");
}

std::vector<double> parse_proportions(const std::string& text, int k) {
  if (text.empty()) return std::vector<double>(static_cast<size_t>(std::max(k, 0)), 1.0);
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ':')) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size())
      throw ConfigError("--sizes: expected a number, got '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("--sizes: empty specification");
  return out;
}

void parse_theta(const std::string& text, GeneratorSpec& gen) {
  if (text == "none") return;  // only meaningful for sbm; dcsbm validates later
  const std::string prefix = "beta:";
  if (text.rfind(prefix, 0) != 0)
    throw ConfigError("--theta: expected 'beta:a,b' or 'none', got '" + text + "'");
  std::vector<double> ab = parse_grid(text.substr(prefix.size()));
  if (ab.size() != 2) throw ConfigError("--theta: beta law needs exactly two parameters");
  gen.beta_a = ab[0];
  gen.beta_b = ab[1];
}

std::vector<Method> parse_methods(const std::string& text) {
  std::vector<Method> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_method(tok));
  if (out.empty()) throw ConfigError("--methods: empty list");
  return out;
}

// Ratios arrive as percentages (the documented form, e.g. 5,10,20,50);
// values below 1 are taken as fractions directly so 0.05 also works.
std::vector<double> parse_ratios(const std::string& text) {
  std::vector<double> out = parse_grid(text);
  for (double& v : out) {
    if (v >= 1.0) v /= 100.0;
    if (!(v > 0.0 && v < 1.0))
      throw ConfigError("--ratios: values must be percentages in (0,100) or fractions in (0,1)");
  }
  return out;
}

SourceSpec make_source(const SourceOpts& s) {
  SourceSpec src;
  if (!s.edges.empty() || !s.labels.empty()) {
    if (s.edges.empty() || s.labels.empty())
      throw ConfigError("file sources need both --edges and --labels");
    src.edges_path = s.edges;
    src.labels_path = s.labels;
    src.name = !s.name.empty() ? s.name : std::filesystem::path(s.edges).stem().string();
    return src;
  }
  src.synthetic = true;
  src.gen.model = s.model;
  src.gen.n = s.n;
  src.gen.k = s.k;
  src.gen.intra = s.intra;
  if (s.r_grid.empty()) throw ConfigError("generator sources need --r-grid");
  src.gen.r_grid = parse_grid(s.r_grid);
  src.gen.proportions = parse_proportions(s.sizes, s.k);
  parse_theta(s.theta, src.gen);
  src.name = !s.name.empty() ? s.name : s.model;
  return src;
}

TrainConfig make_train(const TrainOpts& t, TrainConfig base) {
  if (t.lr >= 0.0) base.learning_rate = t.lr;
  if (t.max_epochs >= 0) base.max_epochs = t.max_epochs;
  if (t.patience >= 0) base.patience = t.patience;
  if (t.loss_tolerance >= 0.0) base.loss_tolerance = t.loss_tolerance;
  if (t.dropout >= 0.0) base.dropout = t.dropout;
  if (t.weight_decay >= 0.0) base.weight_decay = t.weight_decay;
  return base;
}

int emit_report(const ExperimentConfig& cfg) {
  RunReport report = run_experiment(cfg);
  if (cfg.out_path.empty())
    std::fputs((cfg.format == OutputFormat::Csv ? report_csv(report) : report_json(report)).c_str(),
               stdout);
  int failed = 0;
  for (const RunRow& row : report.rows)
    if (row.status != "ok") {
      ++failed;
      std::fprintf(stderr, "gnnseed: cell %d (%s, trial %d): %s\n", row.cell, row.method.c_str(),
                   row.trial, row.status.c_str());
    }
  if (failed > 0) {
    std::fprintf(stderr, "gnnseed: %d of %zu cells failed\n", failed, report.rows.size());
    return 1;
  }
  return 0;
}

int run_sweep(Task task, const SourceOpts& s, const TrainOpts& t, const RunOpts& r,
              const std::string& ratios_text) {
  ExperimentConfig cfg;
  cfg.task = task;
  cfg.source = make_source(s);
  cfg.methods = parse_methods(r.methods);
  if (task == Task::Classify) cfg.ratios = parse_ratios(ratios_text);
  cfg.trials = r.trials;
  cfg.base_seed = r.seed;
  cfg.train = make_train(t, task == Task::Cluster ? clustering_train_defaults()
                                                  : classification_train_defaults());
  cfg.gee_replicates = r.gee_replicates;
  cfg.gee_max_iter = r.gee_max_iter;
  cfg.out_path = r.out;
  cfg.format = r.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
  cfg.threads = r.threads;
  cfg.trace_dir = r.trace_dir;
  cfg.export_dir = r.export_dir;
  return emit_report(cfg);
}

int run_synth(const SourceOpts& s, int trials, uint64_t seed, const std::string& out_dir) {
  SourceSpec src = make_source(s);
  if (!src.synthetic) throw ConfigError("synth: file flags make no sense here; use the generator flags");
  if (out_dir.empty()) throw ConfigError("synth: --out-dir is required");
  std::filesystem::create_directories(out_dir);

  int written = 0;
  for (double r : src.gen.r_grid) {
    BlockModelConfig bm;
    bm.n = src.gen.n;
    bm.k = src.gen.k;
    bm.block_probs = planted_block_probs(src.gen.k, src.gen.intra, r);
    bm.community_proportions = src.gen.proportions;
    bm.degree_correction =
        src.gen.model == "dcsbm" ? DegreeCorrection::Beta : DegreeCorrection::None;
    bm.beta_a = src.gen.beta_a;
    bm.beta_b = src.gen.beta_b;
    for (int trial = 0; trial < trials; ++trial) {
      // Same derivation as the sweep runner, so 'synth --seed S' writes the
      // exact graphs a sweep with base seed S would consume.
      Rng rng(graph_cell_seed(seed, src.name, r, trial));
      Graph g;
      LabelVector y;
      if (bm.degree_correction == DegreeCorrection::Beta) {
        DcsbmSample sample = sample_dcsbm(bm, rng);
        g = std::move(sample.g);
        y = std::move(sample.y);
      } else {
        auto pair = sample_sbm(bm, rng);
        g = std::move(pair.first);
        y = std::move(pair.second);
      }
      char rbuf[32];
      std::snprintf(rbuf, sizeof rbuf, "%g", r);
      std::string base = src.name + "_r" + rbuf + "_trial" + std::to_string(trial);
      auto dir = std::filesystem::path(out_dir);
      write_edge_list((dir / (base + ".edges")).string(), g);
      write_labels((dir / (base + ".labels")).string(), y);
      ++written;
    }
  }
  std::fprintf(stderr, "gnnseed: wrote %d graph(s) to %s\n", written, out_dir.c_str());
  return 0;
}

int run_embed(const std::string& method_text, const SourceOpts& s, const TrainOpts& t,
              uint64_t seed, const std::string& out, int gee_replicates, int gee_max_iter) {
  if (out.empty()) throw ConfigError("embed: --out is required");
  if (s.edges.empty() || s.labels.empty())
    throw ConfigError("embed: needs --edges and --labels");
  Method method = parse_method(method_text);
  if (method == Method::GGC) throw ConfigError("embed: gg-c has no single embedding; use gg");

  Dataset ds = load_dataset(s.edges, s.labels);
  std::string name = !s.name.empty() ? s.name : std::filesystem::path(s.edges).stem().string();
  Rng rng(method_cell_seed(seed, name, method_name(method), -1.0, -1.0, 0));

  Mat z;
  if (method == Method::GEE && !std::any_of(ds.y.values.begin(), ds.y.values.end(),
                                            [](int v) { return v < 0; })) {
    // Fully labeled: the plain supervised encoder embedding.
    z = supervised_gee(ds.g, ds.y);
  } else {
    TrainConfig cfg = make_train(t, clustering_train_defaults());
    MethodResult res =
        cluster(method, ds.g, ds.y.k, nullptr, cfg, rng, gee_replicates, gee_max_iter);
    z = std::move(res.embedding);
  }
  write_matrix_csv(out, z);
  std::fprintf(stderr, "gnnseed: wrote %lld x %lld embedding to %s\n",
               static_cast<long long>(z.rows()), static_cast<long long>(z.cols()), out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph encoder embeddings, GCN baselines, and warm-started hybrids"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from an INI file (sections per subcommand)");

  SourceOpts cluster_src, classify_src, synth_src, embed_src;
  TrainOpts cluster_train, classify_train, embed_train;
  RunOpts cluster_run, classify_run;
  std::string ratios = "5,10,20,50";
  int synth_trials = 1;
  uint64_t synth_seed = 0, embed_seed = 0;
  std::string synth_out_dir, embed_out, embed_method = "gee";
  int embed_replicates = 10, embed_max_iter = 30;

  CLI::App* cluster_cmd =
      app.add_subcommand("cluster", "Unsupervised community recovery, scored by ARI");
  add_source_options(cluster_cmd, cluster_src);
  add_train_options(cluster_cmd, cluster_train);
  add_run_options(cluster_cmd, cluster_run, "gee,gnn,gg");

  CLI::App* classify_cmd =
      app.add_subcommand("classify", "Transductive node classification, scored by test accuracy");
  add_source_options(classify_cmd, classify_src);
  add_train_options(classify_cmd, classify_train);
  add_run_options(classify_cmd, classify_run, "gee,gnn,gg,ggc");
  classify_cmd->add_option("--ratios", ratios,
                           "Train+val percentages, e.g. 5,10,20,50 (fractions below 1 also work)");

  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate block-model graphs to files");
  add_source_options(synth_cmd, synth_src);
  synth_cmd->add_option("--trials", synth_trials, "Graphs per grid point")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--seed", synth_seed, "Base seed (matches sweep graph seeds)");
  synth_cmd->add_option("--out-dir", synth_out_dir, "Directory for the edge/label files");

  CLI::App* embed_cmd = app.add_subcommand("embed", "Write one embedding matrix as CSV");
  embed_cmd->add_option("--method", embed_method, "gee | gnn | gg");
  add_source_options(embed_cmd, embed_src);
  add_train_options(embed_cmd, embed_train);
  embed_cmd->add_option("--seed", embed_seed, "Base seed");
  embed_cmd->add_option("--out", embed_out, "Output CSV path");
  embed_cmd->add_option("--gee-replicates", embed_replicates,
                        "Random restarts of the encoder clustering loop");
  embed_cmd->add_option("--gee-max-iter", embed_max_iter,
                        "Iteration cap of the encoder clustering loop");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cluster_cmd->parsed())
      return run_sweep(gnnseed::Task::Cluster, cluster_src, cluster_train, cluster_run, "");
    if (classify_cmd->parsed())
      return run_sweep(gnnseed::Task::Classify, classify_src, classify_train, classify_run, ratios);
    if (synth_cmd->parsed()) return run_synth(synth_src, synth_trials, synth_seed, synth_out_dir);
    if (embed_cmd->parsed())
      return run_embed(embed_method, embed_src, embed_train, embed_seed, embed_out,
                       embed_replicates, embed_max_iter);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "gnnseed: error: %s\n", e.what());
    return 1;
  }
  return 0;
}
