#include "gnnseed/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "gnnseed/metrics.hpp"

namespace gnnseed {

std::string task_name(Task t) { return t == Task::Cluster ? "cluster" : "classify"; }

void ExperimentConfig::validate() const {
  if (methods.empty()) throw ConfigError("experiment: no methods selected");
  if (trials < 1) throw ConfigError("experiment: trials must be >= 1");
  if (task == Task::Cluster)
    for (Method m : methods)
      if (m == Method::GGC) throw ConfigError("experiment: gg-c is classification-only");
  if (task == Task::Classify) {
    if (ratios.empty()) throw ConfigError("experiment: classification needs at least one ratio");
    for (double r : ratios)
      if (!(r > 0.0 && r < 1.0)) throw ConfigError("experiment: ratios must be fractions in (0,1)");
  }
  if (source.name.empty()) throw ConfigError("experiment: source needs a name");
  if (source.synthetic) {
    if (source.gen.model != "sbm" && source.gen.model != "dcsbm")
      throw ConfigError("experiment: generator model must be sbm or dcsbm");
    if (source.gen.n < 1 || source.gen.k < 1) throw ConfigError("experiment: generator needs n and k");
    if (source.gen.r_grid.empty()) throw ConfigError("experiment: generator needs an r grid");
    if (source.gen.proportions.empty()) throw ConfigError("experiment: generator needs community proportions");
  } else {
    if (source.edges_path.empty() || source.labels_path.empty())
      throw ConfigError("experiment: file source needs edge and label paths");
  }
  if (threads < 0) throw ConfigError("experiment: threads must be >= 0");
  if (gee_replicates < 1 || gee_max_iter < 1)
    throw ConfigError("experiment: gee replicates and max_iter must be >= 1");
}

namespace {

constexpr uint64_t kAbsentKey = ~0ULL;

uint64_t key_of(double x) {
  return x < 0.0 ? kAbsentKey : static_cast<uint64_t>(std::llround(x * 1e6));
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_short(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

// One unit of work; negative ratio / r mean "not applicable".
struct Cell {
  int index;
  Method method;
  double ratio;
  double r;
  int trial;
};

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::string row_csv(const RunRow& row) {
  std::ostringstream os;
  os << "1," << "cell," << row.cell << "," << csv_escape(row.dataset) << "," << row.task << ","
     << row.method << ",";
  if (row.ratio >= 0.0) os << fmt_short(row.ratio);
  os << ",";
  if (row.r >= 0.0) os << fmt_short(row.r);
  os << "," << row.trial << "," << row.seed << "," << row.metric << ",";
  if (row.has_value) os << fmt_double(row.value);
  os << ",,," << row.epochs << "," << fmt_double(row.wall_time) << "," << csv_escape(row.status);
  return os.str();
}

std::string aggregate_csv(const Aggregate& a) {
  std::ostringstream os;
  os << "1,aggregate,," << csv_escape(a.dataset) << "," << a.task << "," << a.method << ",";
  if (a.ratio >= 0.0) os << fmt_short(a.ratio);
  os << ",";
  if (a.r >= 0.0) os << fmt_short(a.r);
  os << ",,," << a.metric << "," << fmt_double(a.mean) << "," << fmt_double(a.stderr_) << ","
     << a.n_trials << ",,,";
  return os.str();
}

constexpr const char* kCsvHeader =
    "schema,kind,cell,dataset,task,method,ratio,r,trial,seed,metric,value,stderr,n_trials,"
    "epochs,wall_time_s,status";

}  // namespace

uint64_t method_cell_seed(uint64_t base, const std::string& dataset, const std::string& method,
                          double ratio, double r, int trial) {
  return derive_seed(base, {fnv1a64("method"), fnv1a64(dataset), fnv1a64(method), key_of(ratio),
                            key_of(r), static_cast<uint64_t>(trial)});
}

uint64_t graph_cell_seed(uint64_t base, const std::string& dataset, double r, int trial) {
  return derive_seed(base, {fnv1a64("graph"), fnv1a64(dataset), key_of(r),
                            static_cast<uint64_t>(trial)});
}

uint64_t split_cell_seed(uint64_t base, const std::string& dataset, double ratio, double r,
                         int trial) {
  return derive_seed(base, {fnv1a64("split"), fnv1a64(dataset), key_of(ratio), key_of(r),
                            static_cast<uint64_t>(trial)});
}

std::vector<double> parse_grid(const std::string& text) {
  auto parse_one = [&](const std::string& tok) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size())
      throw ParseError("grid: expected a number, got '" + tok + "'");
    return v;
  };
  std::vector<std::string> parts;
  if (text.find(':') != std::string::npos) {
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    if (parts.size() != 3) throw ParseError("grid: expected start:stop:step, got '" + text + "'");
    double start = parse_one(parts[0]), stop = parse_one(parts[1]), step = parse_one(parts[2]);
    if (!(step > 0.0)) throw ParseError("grid: step must be positive");
    if (stop < start) throw ParseError("grid: stop below start");
    int count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
  }
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_one(tok));
  if (out.empty()) throw ParseError("grid: empty specification");
  return out;
}

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("GNNSEED_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

struct PreparedFixture {
  Graph g;
  LabelVector y;
};

BlockModelConfig make_block_config(const GeneratorSpec& gen, double r) {
  BlockModelConfig cfg;
  cfg.n = gen.n;
  cfg.k = gen.k;
  cfg.block_probs = planted_block_probs(gen.k, gen.intra, r);
  cfg.community_proportions = gen.proportions;
  cfg.degree_correction = gen.model == "dcsbm" ? DegreeCorrection::Beta : DegreeCorrection::None;
  cfg.beta_a = gen.beta_a;
  cfg.beta_b = gen.beta_b;
  return cfg;
}

std::pair<Graph, LabelVector> make_graph(const ExperimentConfig& cfg, double r, int trial) {
  BlockModelConfig bm = make_block_config(cfg.source.gen, r);
  Rng rng(graph_cell_seed(cfg.base_seed, cfg.source.name, r, trial));
  if (bm.degree_correction == DegreeCorrection::Beta) {
    DcsbmSample s = sample_dcsbm(bm, rng);
    return {std::move(s.g), std::move(s.y)};
  }
  auto [g, y] = sample_sbm(bm, rng);
  return {std::move(g), std::move(y)};
}

std::string trace_file_name(const ExperimentConfig& cfg, const Cell& cell) {
  std::ostringstream os;
  os << cfg.source.name << "_" << method_name(cell.method);
  if (cell.r >= 0.0) os << "_r" << fmt_short(cell.r);
  if (cell.ratio >= 0.0) os << "_ratio" << fmt_short(cell.ratio);
  os << "_trial" << cell.trial << ".csv";
  return os.str();
}

RunRow execute_cell(const ExperimentConfig& cfg, const Cell& cell,
                    const PreparedFixture* fixture) {
  RunRow row;
  row.cell = cell.index;
  row.dataset = cfg.source.name;
  row.task = task_name(cfg.task);
  row.method = method_name(cell.method);
  row.ratio = cell.ratio;
  row.r = cell.r;
  row.trial = cell.trial;
  row.seed = method_cell_seed(cfg.base_seed, cfg.source.name, row.method, cell.ratio, cell.r,
                              cell.trial);
  row.metric = cfg.task == Task::Cluster ? "ari" : "accuracy";

  auto t0 = std::chrono::steady_clock::now();
  try {
    Graph g;
    LabelVector y;
    const Graph* gp = nullptr;
    const LabelVector* yp = nullptr;
    if (cfg.source.synthetic) {
      std::tie(g, y) = make_graph(cfg, cell.r, cell.trial);
      gp = &g;
      yp = &y;
    } else {
      gp = &fixture->g;
      yp = &fixture->y;
    }

    EpochCallback cb;
    std::ofstream trace_out;
    if (!cfg.trace_dir.empty()) {
      std::filesystem::create_directories(cfg.trace_dir);
      trace_out.open(std::filesystem::path(cfg.trace_dir) / trace_file_name(cfg, cell));
      trace_out << "epoch,loss,val_metric\n";
      cb = [&trace_out](int epoch, double loss, double val) {
        trace_out << epoch << "," << fmt_double(loss) << ",";
        if (!std::isnan(val)) trace_out << fmt_double(val);
        trace_out << "\n";
      };
    }

    Rng rng(row.seed);
    if (cfg.task == Task::Cluster) {
      MethodResult res = cluster(cell.method, *gp, yp->k, yp, cfg.train, rng,
                                 cfg.gee_replicates, cfg.gee_max_iter, cb);
      row.value = res.metric;
      row.has_value = res.has_metric;
      row.epochs = res.epochs;
    } else {
      Rng split_rng(split_cell_seed(cfg.base_seed, cfg.source.name, cell.ratio, cell.r,
                                    cell.trial));
      SplitMasks masks = split_nodes(*yp, cell.ratio, split_rng);
      MethodResult res = classify(cell.method, *gp, *yp, masks, cfg.train, rng, cb);
      row.value = res.metric;
      row.has_value = res.has_metric;
      row.epochs = res.epochs;
    }
    row.status = "ok";
  } catch (const std::exception& e) {
    row.status = std::string("error: ") + e.what();
    row.has_value = false;
  }
  row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

}  // namespace

std::string report_csv(const RunReport& report) {
  std::ostringstream os;
  os << kCsvHeader << "\n";
  for (const RunRow& row : report.rows) os << row_csv(row) << "\n";
  for (const Aggregate& a : report.aggregates) os << aggregate_csv(a) << "\n";
  return os.str();
}

std::string report_json(const RunReport& report) {
  nlohmann::json j;
  j["schema"] = 1;
  j["rows"] = nlohmann::json::array();
  for (const RunRow& row : report.rows) {
    nlohmann::json r;
    r["cell"] = row.cell;
    r["dataset"] = row.dataset;
    r["task"] = row.task;
    r["method"] = row.method;
    if (row.ratio >= 0.0) r["ratio"] = row.ratio;
    if (row.r >= 0.0) r["r"] = row.r;
    r["trial"] = row.trial;
    r["seed"] = row.seed;
    r["metric"] = row.metric;
    if (row.has_value) r["value"] = row.value;
    r["epochs"] = row.epochs;
    r["wall_time_s"] = row.wall_time;
    r["status"] = row.status;
    j["rows"].push_back(std::move(r));
  }
  j["aggregates"] = nlohmann::json::array();
  for (const Aggregate& a : report.aggregates) {
    nlohmann::json r;
    r["dataset"] = a.dataset;
    r["task"] = a.task;
    r["method"] = a.method;
    if (a.ratio >= 0.0) r["ratio"] = a.ratio;
    if (a.r >= 0.0) r["r"] = a.r;
    r["metric"] = a.metric;
    r["n_trials"] = a.n_trials;
    r["mean"] = a.mean;
    r["stderr"] = a.stderr_;
    j["aggregates"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

RunReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();

  PreparedFixture fixture;
  if (!cfg.source.synthetic) {
    Dataset ds = load_dataset(cfg.source.edges_path, cfg.source.labels_path);
    fixture.g = std::move(ds.g);
    fixture.y = std::move(ds.y);
  }

  // Canonical cell enumeration: r (outer), ratio, trial, method. The index
  // fixes the report order regardless of completion order.
  std::vector<double> r_values = cfg.source.synthetic ? cfg.source.gen.r_grid
                                                      : std::vector<double>{-1.0};
  std::vector<double> ratio_values =
      cfg.task == Task::Classify ? cfg.ratios : std::vector<double>{-1.0};
  std::vector<Cell> cells;
  int index = 0;
  for (double r : r_values)
    for (double ratio : ratio_values)
      for (int trial = 0; trial < cfg.trials; ++trial)
        for (Method m : cfg.methods) cells.push_back({index++, m, ratio, r, trial});

  // Optional one-off export of the generated graphs for inspection.
  if (!cfg.export_dir.empty() && cfg.source.synthetic) {
    std::filesystem::create_directories(cfg.export_dir);
    for (double r : r_values)
      for (int trial = 0; trial < cfg.trials; ++trial) {
        auto [g, y] = make_graph(cfg, r, trial);
        std::ostringstream base;
        base << cfg.source.name << "_r" << fmt_short(r) << "_trial" << trial;
        auto dir = std::filesystem::path(cfg.export_dir);
        write_edge_list((dir / (base.str() + ".edges")).string(), g);
        write_labels((dir / (base.str() + ".labels")).string(), y);
      }
  }

  // Crash journal: finished rows are appended as they arrive, in completion order.
  std::ofstream journal;
  std::string journal_path;
  if (!cfg.out_path.empty()) {
    journal_path = cfg.out_path + ".partial";
    journal.open(journal_path);
    journal << kCsvHeader << "\n" << std::flush;
  }

  RunReport report;
  report.rows.resize(cells.size());
  std::atomic<size_t> next{0};
  std::mutex journal_mutex;

  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      RunRow row = execute_cell(cfg, cells[i], &fixture);
      if (journal.is_open()) {
        std::lock_guard<std::mutex> lock(journal_mutex);
        journal << row_csv(row) << "\n" << std::flush;
      }
      report.rows[i] = std::move(row);
    }
  };

  int threads = resolve_threads(cfg.threads);
  threads = std::min<int>(threads, static_cast<int>(cells.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Aggregates per (method, ratio, r), in cell order of first appearance.
  for (const RunRow& row : report.rows)
    if (row.status != "ok") report.any_failed = true;
  std::vector<Aggregate> aggs;
  for (double r : r_values)
    for (double ratio : ratio_values)
      for (Method m : cfg.methods) {
        Aggregate a;
        a.dataset = cfg.source.name;
        a.task = task_name(cfg.task);
        a.method = method_name(m);
        a.metric = cfg.task == Task::Cluster ? "ari" : "accuracy";
        a.ratio = ratio;
        a.r = r;
        double sum = 0.0;
        std::vector<double> vals;
        for (const RunRow& row : report.rows)
          if (row.method == a.method && row.ratio == ratio && row.r == r && row.has_value &&
              row.status == "ok") {
            vals.push_back(row.value);
            sum += row.value;
          }
        if (vals.empty()) continue;
        a.n_trials = static_cast<int>(vals.size());
        a.mean = sum / static_cast<double>(vals.size());
        double ss = 0.0;
        for (double v : vals) ss += (v - a.mean) * (v - a.mean);
        a.stderr_ = vals.size() > 1
                        ? std::sqrt(ss / static_cast<double>(vals.size() - 1)) /
                              std::sqrt(static_cast<double>(vals.size()))
                        : 0.0;
        aggs.push_back(std::move(a));
      }
  report.aggregates = std::move(aggs);

  if (!cfg.out_path.empty()) {
    std::ofstream out(cfg.out_path);
    if (!out) throw ParseError(cfg.out_path + ": cannot open for writing");
    out << (cfg.format == OutputFormat::Csv ? report_csv(report) : report_json(report));
    out.close();
    journal.close();
    std::error_code ec;
    std::filesystem::remove(journal_path, ec);
  }
  return report;
}

}  // namespace gnnseed
