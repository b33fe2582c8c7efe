#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "specemd/dataset_io.hpp"
#include "specemd/errors.hpp"
#include "specemd/evaluation.hpp"
#include "specemd/graph.hpp"
#include "specemd/kernels.hpp"
#include "specemd/random_graphs.hpp"
#include "specemd/spectral.hpp"
#include "svg.hpp"

namespace fs = std::filesystem;

namespace specemd::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kSubcommands{"spectra",  "gram",     "classify",
                                            "baseline", "simulate", "density"};
const std::set<std::string> kFlagKeys{"clip-psd", "nested-cv", "no-scale", "svg",
                                      "group-average", "global-best-c"};

struct RunConfig {
  std::string subcommand;
  std::string manifest;
  std::string coords;
  std::string weighting = "combined";
  std::string kernel = "emd";
  std::string c_grid = "0.1,1,10,50";
  std::size_t repetitions = 100;
  std::size_t folds = 10;
  std::uint64_t seed = 20160101;
  std::string out = "out";
  int workers = 0;
  double sigma = kDefaultDensitySigma;
  double grid_lo = -0.1;
  double grid_hi = 2.1;
  double grid_step = 0.002;
  double ws_rewire = 0.2;
  double gamma = 1.0;
  bool clip_psd = false;
  bool nested_cv = false;
  bool no_scale = false;
  bool global_best_c = false;
  bool svg = false;
  bool group_average = false;
  std::string reference;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::vector<std::string> matrices;
  std::string models = "er,ba,ws";
  std::string config_file;
};

// ---------------------------------------------------------------------------
// config file

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v, const std::string& where) {
  std::string lower = v;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "true" || lower == "1" || lower == "yes" || lower == "on") return true;
  if (lower == "false" || lower == "0" || lower == "no" || lower == "off") return false;
  throw UsageError(where + ": expected a boolean, got '" + v + "'");
}

std::vector<std::string> config_arguments(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path.string());
  std::vector<std::string> args;
  std::string line;
  for (int line_no = 1; std::getline(in, line); ++line_no) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (eq == std::string::npos) throw UsageError(where + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    while (!key.empty() && key.front() == '-') key.erase(key.begin());
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.empty() || key == "config") throw UsageError(where + ": invalid key");
    if (kFlagKeys.count(key)) {
      if (parse_bool(value, where)) args.push_back("--" + key);
    } else {
      args.push_back("--" + key);
      args.push_back(value);
    }
  }
  return args;
}

/// Config values go right after the subcommand name so that later command-line
/// occurrences win under the take-last policy.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::optional<std::string> config;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) config = args[i].substr(9);
  }
  if (!config) return args;
  auto sub = std::find_if(args.begin() + 1, args.end(), [](const std::string& a) {
    return std::find(kSubcommands.begin(), kSubcommands.end(), a) != kSubcommands.end();
  });
  if (sub == args.end()) return args;
  const auto extra = config_arguments(*config);
  args.insert(sub + 1, extra.begin(), extra.end());
  return args;
}

// ---------------------------------------------------------------------------
// output helpers

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  f << text;
  if (!f) throw InputError("failed writing " + path.string());
}

std::string fixed(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string short_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string file_stem_for(const std::string& id) {
  std::string s;
  for (char c : id) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    s += ok ? c : '_';
  }
  if (s.empty() || s == "." || s == "..") s = "_" + s;
  return s;
}

std::string density_csv(const DensityCurve& curve) {
  std::string text = "x,f\n";
  for (std::size_t i = 0; i < curve.grid.size(); ++i)
    text += format_double(curve.grid[i]) + "," + format_double(curve.density[i]) + "\n";
  return text;
}

// ---------------------------------------------------------------------------
// shared pipeline pieces

struct Dataset {
  DatasetManifest manifest;
  std::vector<ConnectivityGraph> graphs;
  std::optional<CoordinateTable> coords;
};

Weighting weighting_of(const RunConfig& cfg) {
  const auto w = parse_weighting(cfg.weighting);
  if (!w) throw UsageError("unknown weighting '" + cfg.weighting + "'");
  return *w;
}

Execution execution_of(const RunConfig& cfg) { return Execution::with_workers(cfg.workers); }

Dataset load_dataset(const RunConfig& cfg, std::ostream& err) {
  Dataset d;
  d.manifest = load_manifest(cfg.manifest);
  Warnings warnings;
  d.graphs = load_graphs(d.manifest, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  if (!cfg.coords.empty()) {
    d.coords = load_coordinates(cfg.coords);
    for (std::size_t i = 0; i < d.graphs.size(); ++i) {
      if (d.graphs[i].size() != d.coords->size()) {
        throw InputError("subject " + d.manifest.entries[i].subject_id + ": matrix has " +
                         std::to_string(d.graphs[i].size()) + " nodes but coordinates have " +
                         std::to_string(d.coords->size()));
      }
    }
  }
  return d;
}

const CoordinateTable* coords_ptr(const Dataset& d) { return d.coords ? &*d.coords : nullptr; }

std::vector<double> parse_c_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    double v = 0.0;
    std::size_t used = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !(v > 0.0) || !std::isfinite(v))
      throw UsageError("--c-grid: invalid value '" + item + "'");
    grid.push_back(v);
  }
  if (grid.empty()) throw UsageError("--c-grid: empty");
  return grid;
}

ExperimentConfig experiment_config(const RunConfig& cfg, KernelKind kernel) {
  ExperimentConfig ec;
  ec.weighting = weighting_of(cfg);
  ec.kernel = kernel;
  ec.scale = !cfg.no_scale;
  ec.emd.gamma = cfg.gamma;
  ec.emd.clip_psd = cfg.clip_psd;
  ec.cv.c_grid = parse_c_grid(cfg.c_grid);
  ec.cv.repetitions = cfg.repetitions;
  ec.cv.folds = cfg.folds;
  ec.cv.base_seed = cfg.seed;
  ec.cv.nested_cv = cfg.nested_cv;
  ec.cv.best_c = cfg.global_best_c ? BestCPolicy::global : BestCPolicy::per_repetition;
  return ec;
}

/// Rows and columns ordered class 0 first, then class 1, manifest order within
/// a class.
std::string gram_heatmap_csv(const Matrix& gram, const DatasetManifest& manifest) {
  std::vector<std::size_t> order;
  for (int label : {0, 1})
    for (std::size_t i = 0; i < manifest.size(); ++i)
      if (manifest.entries[i].label == label) order.push_back(i);
  std::string text = "subject_id,label";
  for (auto j : order) text += "," + manifest.entries[j].subject_id;
  text += "\n";
  for (auto i : order) {
    text += manifest.entries[i].subject_id + "," + std::to_string(manifest.entries[i].label);
    for (auto j : order) text += "," + format_double(gram(i, j));
    text += "\n";
  }
  return text;
}

std::string optional_number(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::string metrics_row(std::size_t r, std::uint64_t seed, const Metrics& m) {
  return std::to_string(r) + "," + std::to_string(seed) + "," + format_double(m.c) + "," +
         format_double(m.roc_auc) + "," + optional_number(m.precision) + "," +
         format_double(m.recall) + "\n";
}

std::string mean_sd_text(const MeanSd& m) {
  if (m.count == 0) return "undefined";
  return fixed(m.mean) + " +/- " + fixed(m.sd) + " (n=" + std::to_string(m.count) + ")";
}

std::string summary_text(const CvReport& report, const GramMatrix& gram, const MeanRoc& roc) {
  const auto& c = report.config;
  std::string t;
  t += "kernel: " + report.kernel + "\n";
  t += "weighting: " + report.weighting + "\n";
  std::size_t pos = 0;
  for (int l : report.labels) pos += l > 0;
  t += "subjects: " + std::to_string(report.labels.size()) + " (" + std::to_string(pos) +
       " positive, " + std::to_string(report.labels.size() - pos) + " negative)\n";
  t += "repetitions: " + std::to_string(c.repetitions) + " x " + std::to_string(c.folds) +
       "-fold, seeds " + std::to_string(c.base_seed) + ".." +
       std::to_string(c.base_seed + c.repetitions - 1) + "\n";
  t += "C grid:";
  for (double v : c.c_grid) t += " " + short_number(v);
  t += "\n";
  t += std::string("C selection: ") +
       (c.nested_cv ? "nested"
                    : (c.best_c == BestCPolicy::global ? "global" : "per-repetition")) +
       "\n";
  t += "gram min eigenvalue: " + format_double(gram.min_eigenvalue) + "\n";
  const auto s = report.summary();
  t += "\n";
  t += "ROC AUC:   " + mean_sd_text(s.roc_auc) + "\n";
  t += "precision: " + mean_sd_text(s.precision) + "\n";
  t += "recall:    " + mean_sd_text(s.recall) + "\n";
  t += "mean ROC curve AUC: " + fixed(roc.auc) + "\n";
  t += "\nper C:\n";
  for (std::size_t k = 0; k < c.c_grid.size(); ++k) {
    const auto sk = report.summary_for_c(k);
    std::size_t chosen = 0;
    for (auto idx : report.best_c_index) chosen += idx == k;
    t += "  C=" + short_number(c.c_grid[k]) + "  ROC AUC " + mean_sd_text(sk.roc_auc) +
         "  precision " + mean_sd_text(sk.precision) + "  recall " + mean_sd_text(sk.recall);
    if (!c.nested_cv) t += "  selected " + std::to_string(chosen);
    t += "\n";
  }
  return t;
}

void write_classification(const fs::path& dir, const ExperimentResult& result,
                          const DatasetManifest& manifest, bool svg, std::ostream& out) {
  const auto& report = result.report;
  std::string all = "repetition,seed,C,roc_auc,precision,recall\n";
  std::string best = all;
  for (std::size_t r = 0; r < report.repetitions.size(); ++r) {
    const auto& rep = report.repetitions[r];
    for (const auto& m : rep.per_c) all += metrics_row(r, rep.seed, m);
    best += metrics_row(r, rep.seed, report.best(r));
  }
  write_text(dir / "repetitions.csv", all);
  write_text(dir / "best.csv", best);

  const auto roc = mean_roc_curve(report);
  std::string roc_text = "fpr,tpr\n";
  for (std::size_t i = 0; i < roc.curve.fpr.size(); ++i)
    roc_text += format_double(roc.curve.fpr[i]) + "," + format_double(roc.curve.tpr[i]) + "\n";
  write_text(dir / "mean_roc.csv", roc_text);

  save_gram(result.gram, dir / "gram.txt");
  write_text(dir / "gram_heatmap.csv", gram_heatmap_csv(result.gram.values, manifest));
  write_text(dir / "summary.txt", summary_text(report, result.gram, roc));
  if (svg) {
    std::vector<Series> series{{"mean ROC", roc.curve.fpr, roc.curve.tpr},
                               {"chance", {0.0, 1.0}, {0.0, 1.0}}};
    write_text(dir / "mean_roc.svg",
               render_line_chart(series, "Mean ROC (" + report.kernel + ")", "FPR", "TPR"));
  }
  const auto s = report.summary();
  out << report.kernel << ": ROC AUC " << mean_sd_text(s.roc_auc) << ", precision "
      << mean_sd_text(s.precision) << ", recall " << mean_sd_text(s.recall) << "\n";
  out << "wrote " << dir.string() << "\n";
}

void require_coords(const RunConfig& cfg) {
  if (needs_coordinates(weighting_of(cfg)) && cfg.coords.empty())
    throw UsageError("--coords is required for weighting '" + cfg.weighting + "'");
}

// ---------------------------------------------------------------------------
// subcommands

void cmd_spectra(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto data = load_dataset(cfg, err);
  const auto prepared =
      prepare_graphs(data.graphs, weighting_of(cfg), !cfg.no_scale, coords_ptr(data));
  const auto spectra = spectra_of(prepared, execution_of(cfg));
  const fs::path dir(cfg.out);
  std::string summary =
      "subject_id,label,nodes,min,max,eigenvalue_sum,laplacian_trace,zero_multiplicity\n";
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    const auto& e = data.manifest.entries[i];
    const auto values = spectra[i].values();
    std::string text = "eigenvalue\n";
    double sum = 0.0;
    for (double v : values) text += format_double(v) + "\n", sum += v;
    write_text(dir / "spectra" / (file_stem_for(e.subject_id) + ".csv"), text);
    const double tr = trace(normalized_laplacian(prepared[i]));
    summary += e.subject_id + "," + std::to_string(e.label) + "," +
               std::to_string(values.size()) + "," + format_double(values.front()) + "," +
               format_double(values.back()) + "," + format_double(sum) + "," +
               format_double(tr) + "," + std::to_string(spectra[i].zero_multiplicity()) + "\n";
  }
  write_text(dir / "spectra_summary.csv", summary);
  out << "wrote " << spectra.size() << " spectra to " << (dir / "spectra").string() << "\n";
}

void cmd_gram(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto kernel = *parse_kernel(cfg.kernel);
  const auto data = load_dataset(cfg, err);
  const auto prepared =
      prepare_graphs(data.graphs, weighting_of(cfg), !cfg.no_scale, coords_ptr(data));
  const auto ec = experiment_config(cfg, kernel);
  const auto gram = build_gram(prepared, kernel, ec.emd, execution_of(cfg));
  const fs::path dir(cfg.out);
  save_gram(gram, dir / "gram.txt");
  write_text(dir / "gram_heatmap.csv", gram_heatmap_csv(gram.values, data.manifest));
  std::string info;
  info += "kernel: " + std::string(to_string(kernel)) + "\n";
  info += "weighting: " + cfg.weighting + "\n";
  info += "subjects: " + std::to_string(gram.size()) + "\n";
  info += "min eigenvalue: " + format_double(gram.min_eigenvalue) + "\n";
  info += std::string("positive semidefinite: ") + (gram.positive_semidefinite() ? "yes" : "no") +
          "\n";
  write_text(dir / "gram_info.txt", info);
  out << "gram " << gram.size() << "x" << gram.size() << ", min eigenvalue "
      << format_double(gram.min_eigenvalue) << "\n";
  out << "wrote " << (dir / "gram.txt").string() << "\n";
}

void cmd_classify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto kernel = *parse_kernel(cfg.kernel);
  const auto data = load_dataset(cfg, err);
  const auto labels = data.manifest.svm_labels();
  const auto result = run_experiment(data.graphs, labels, coords_ptr(data),
                                     experiment_config(cfg, kernel), execution_of(cfg));
  write_classification(cfg.out, result, data.manifest, cfg.svg, out);
}

void cmd_baseline(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto data = load_dataset(cfg, err);
  const auto labels = data.manifest.svm_labels();
  std::string table =
      "kernel,roc_auc_mean,roc_auc_sd,precision_mean,precision_sd,recall_mean,recall_sd\n";
  for (auto kernel : {KernelKind::emd, KernelKind::linear_spectra, KernelKind::linear_edges}) {
    const auto result = run_experiment(data.graphs, labels, coords_ptr(data),
                                       experiment_config(cfg, kernel), execution_of(cfg));
    const std::string name(to_string(kernel));
    write_classification(fs::path(cfg.out) / name, result, data.manifest, cfg.svg, out);
    const auto s = result.report.summary();
    auto cell = [](const MeanSd& m) {
      return m.count ? format_double(m.mean) + "," + format_double(m.sd) : std::string(",");
    };
    table += name + "," + cell(s.roc_auc) + "," + cell(s.precision) + "," + cell(s.recall) + "\n";
  }
  write_text(fs::path(cfg.out) / "comparison.csv", table);
  out << "wrote " << (fs::path(cfg.out) / "comparison.csv").string() << "\n";
}

DensityCurve density_of(const ConnectivityGraph& g, const RunConfig& cfg) {
  const auto grid = uniform_grid(cfg.grid_lo, cfg.grid_hi, cfg.grid_step);
  return density_curve(spectrum_of(g).values(), cfg.sigma, grid);
}

void write_densities(const fs::path& dir, const std::vector<std::string>& names,
                     const std::vector<DensityCurve>& curves, const RunConfig& cfg,
                     const std::string& title) {
  for (std::size_t i = 0; i < names.size(); ++i)
    write_text(dir / ("density_" + file_stem_for(names[i]) + ".csv"), density_csv(curves[i]));
  if (cfg.svg) {
    std::vector<Series> series;
    for (std::size_t i = 0; i < names.size(); ++i)
      series.push_back({names[i], curves[i].grid, curves[i].density});
    write_text(dir / "density.svg", render_line_chart(series, title, "eigenvalue", "density"));
  }
}

void cmd_density(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto weighting = weighting_of(cfg);
  std::optional<CoordinateTable> coords;
  if (!cfg.coords.empty()) coords = load_coordinates(cfg.coords);
  const CoordinateTable* cp = coords ? &*coords : nullptr;

  std::vector<std::string> names;
  std::vector<ConnectivityGraph> inputs;
  auto add = [&](std::string name, ConnectivityGraph g) {
    std::string unique = name;
    for (int k = 2; std::find(names.begin(), names.end(), unique) != names.end(); ++k)
      unique = name + "_" + std::to_string(k);
    names.push_back(unique);
    inputs.push_back(std::move(g));
  };

  if (!cfg.manifest.empty()) {
    const auto manifest = load_manifest(cfg.manifest);
    Warnings warnings;
    const auto graphs = load_graphs(manifest, &warnings);
    for (const auto& w : warnings) err << "warning: " << w << "\n";
    if (cfg.group_average) {
      for (int label : {0, 1}) {
        std::vector<ConnectivityGraph> group;
        for (std::size_t i = 0; i < graphs.size(); ++i)
          if (manifest.entries[i].label == label)
            group.push_back(apply_weighting(graphs[i], weighting, cp));
        if (!group.empty()) add("group_" + std::to_string(label), group_average(group));
      }
    } else {
      for (std::size_t i = 0; i < graphs.size(); ++i)
        add(manifest.entries[i].subject_id, apply_weighting(graphs[i], weighting, cp));
    }
  }
  for (const auto& path : cfg.matrices) {
    Warnings warnings;
    auto g = load_matrix(path, &warnings);
    for (const auto& w : warnings) err << "warning: " << w << "\n";
    add(fs::path(path).stem().string(), apply_weighting(g, weighting, cp));
  }

  std::vector<DensityCurve> curves(inputs.size());
  parallel_for(execution_of(cfg), inputs.size(),
               [&](std::size_t i) { curves[i] = density_of(inputs[i], cfg); });
  write_densities(cfg.out, names, curves, cfg,
                  "Spectral density (sigma " + short_number(cfg.sigma) + ")");
  out << "wrote " << curves.size() << " density curves to " << cfg.out << "\n";
}

std::vector<GraphModel> models_of(const RunConfig& cfg) {
  std::vector<GraphModel> models;
  std::stringstream ss(cfg.models);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item == "er") models.push_back(GraphModel::erdos_renyi);
    else if (item == "ba") models.push_back(GraphModel::barabasi_albert);
    else if (item == "ws") models.push_back(GraphModel::watts_strogatz);
    else throw UsageError("--models: unknown model '" + item + "'");
  }
  if (models.empty()) throw UsageError("--models: empty");
  return models;
}

void cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::optional<ConnectivityGraph> reference;
  std::size_t n = cfg.nodes, m = cfg.edges;
  if (!cfg.reference.empty()) {
    Warnings warnings;
    reference = load_matrix(cfg.reference, &warnings);
    for (const auto& w : warnings) err << "warning: " << w << "\n";
  } else if (!cfg.manifest.empty()) {
    const auto manifest = load_manifest(cfg.manifest);
    Warnings warnings;
    const auto graphs = load_graphs(manifest, &warnings);
    for (const auto& w : warnings) err << "warning: " << w << "\n";
    reference = group_average(graphs);
  }
  if (reference) n = reference->size(), m = reference->edge_count();

  const fs::path dir(cfg.out);
  std::vector<std::string> names;
  std::vector<DensityCurve> curves;
  if (reference) {
    names.push_back("reference");
    curves.push_back(density_of(*reference, cfg));
  }
  std::size_t generated = 0;
  for (auto model : models_of(cfg)) {
    const std::string name(to_string(model));
    ConnectivityGraph g;
    try {
      g = generate(GraphSpec{n, m, model, cfg.ws_rewire, cfg.seed});
    } catch (const InvalidArgument& e) {
      err << "warning: skipping " << name << ": " << e.what() << "\n";
      continue;
    }
    ++generated;
    save_matrix(g.weights(), dir / (name + ".csv"));
    names.push_back(name);
    curves.push_back(density_of(g, cfg));
    out << name << ": " << g.size() << " nodes, " << g.edge_count() << " edges\n";
  }
  if (generated == 0)
    throw InvalidArgument("no random graph model is feasible for n=" + std::to_string(n) +
                          ", m=" + std::to_string(m));
  write_densities(dir, names, curves, cfg, "Random graphs matched to n=" + std::to_string(n) +
                                               ", m=" + std::to_string(m));
  out << "wrote " << dir.string() << "\n";
}

// ---------------------------------------------------------------------------
// argument wiring

void add_common(CLI::App* app, RunConfig& cfg) {
  app->add_option("--out", cfg.out, "Output directory")->capture_default_str();
  app->add_option("--workers", cfg.workers, "Worker threads, 0 = all available")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app->add_option("--config", cfg.config_file, "File of key=value defaults");
}

void add_dataset(CLI::App* app, RunConfig& cfg, bool required) {
  auto* manifest = app->add_option("--manifest", cfg.manifest, "CSV of path,label,subject_id");
  if (required) manifest->required();
  app->add_option("--coords", cfg.coords, "Region centre coordinates, x,y,z per line");
  app->add_option("--weighting", cfg.weighting, "original | distance | combined")
      ->check(CLI::IsMember({"original", "distance", "combined"}))
      ->capture_default_str();
  app->add_flag("--no-scale", cfg.no_scale, "Skip division by the total weight");
}

void add_kernel(CLI::App* app, RunConfig& cfg) {
  app->add_option("--gamma", cfg.gamma, "EMD kernel exp(-gamma * d)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_flag("--clip-psd", cfg.clip_psd, "Clip negative Gram eigenvalues instead of failing");
}

void add_cv(CLI::App* app, RunConfig& cfg) {
  app->add_option("--c-grid", cfg.c_grid, "Comma-separated SVM C values")->capture_default_str();
  app->add_option("--repetitions", cfg.repetitions, "Cross-validation repetitions")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}))
      ->capture_default_str();
  app->add_option("--folds", cfg.folds, "Folds per repetition")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000000}))
      ->capture_default_str();
  app->add_option("--seed", cfg.seed, "Base seed; repetition r uses seed + r")
      ->capture_default_str();
  app->add_flag("--nested-cv", cfg.nested_cv, "Select C inside each training fold");
  app->add_flag("--global-best-c", cfg.global_best_c,
                "Use one C for all repetitions (best mean AUC)");
  app->add_flag("--svg", cfg.svg, "Also render the mean ROC curve as SVG");
}

void add_density(CLI::App* app, RunConfig& cfg) {
  app->add_option("--sigma", cfg.sigma, "Gaussian bandwidth")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--grid-lo", cfg.grid_lo)->capture_default_str();
  app->add_option("--grid-hi", cfg.grid_hi)->capture_default_str();
  app->add_option("--grid-step", cfg.grid_step)->check(CLI::PositiveNumber)->capture_default_str();
  app->add_flag("--svg", cfg.svg, "Also render the curves as SVG");
}

void validate(const RunConfig& cfg) {
  const auto& s = cfg.subcommand;
  if (s == "density" || s == "simulate") {
    if (!(cfg.grid_hi > cfg.grid_lo)) throw UsageError("--grid-hi must exceed --grid-lo");
  }
  if (s == "density") {
    if (cfg.manifest.empty() && cfg.matrices.empty())
      throw UsageError("density needs --manifest or --matrix");
    if (cfg.group_average && cfg.manifest.empty())
      throw UsageError("--group-average needs --manifest");
  }
  if (s == "simulate") {
    const int sources = !cfg.reference.empty() + !cfg.manifest.empty() + (cfg.nodes > 0);
    if (sources != 1)
      throw UsageError("simulate needs exactly one of --reference, --manifest, --nodes/--edges");
    if (cfg.nodes > 0 && cfg.edges == 0) throw UsageError("--nodes needs --edges");
    if (cfg.ws_rewire < 0.0 || cfg.ws_rewire > 1.0)
      throw UsageError("--ws-rewire must lie in [0, 1]");
    models_of(cfg);
  } else {
    require_coords(cfg);
  }
  if (s == "classify" || s == "baseline") parse_c_grid(cfg.c_grid);
}

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto& s = cfg.subcommand;
  if (s == "spectra") cmd_spectra(cfg, out, err);
  else if (s == "gram") cmd_gram(cfg, out, err);
  else if (s == "classify") cmd_classify(cfg, out, err);
  else if (s == "baseline") cmd_baseline(cfg, out, err);
  else if (s == "simulate") cmd_simulate(cfg, out, err);
  else if (s == "density") cmd_density(cfg, out, err);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Spectral graph classification with an earth mover's distance kernel", "specemd"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  auto* spectra = app.add_subcommand("spectra", "Normalized-Laplacian spectrum per subject");
  add_common(spectra, cfg);
  add_dataset(spectra, cfg, true);

  auto* gram = app.add_subcommand("gram", "Kernel Gram matrix over the dataset");
  add_common(gram, cfg);
  add_dataset(gram, cfg, true);
  add_kernel(gram, cfg);
  gram->add_option("--kernel", cfg.kernel, "emd | linear-spectra | linear-edges")
      ->check(CLI::IsMember({"emd", "linear-spectra", "linear-edges"}))
      ->capture_default_str();

  auto* classify = app.add_subcommand("classify", "Repeated cross-validated SVM classification");
  add_common(classify, cfg);
  add_dataset(classify, cfg, true);
  add_kernel(classify, cfg);
  add_cv(classify, cfg);
  classify->add_option("--kernel", cfg.kernel, "emd | linear-spectra | linear-edges")
      ->check(CLI::IsMember({"emd", "linear-spectra", "linear-edges"}))
      ->capture_default_str();

  auto* baseline =
      app.add_subcommand("baseline", "EMD kernel against linear spectra and bag-of-edges");
  add_common(baseline, cfg);
  add_dataset(baseline, cfg, true);
  add_kernel(baseline, cfg);
  add_cv(baseline, cfg);

  auto* simulate = app.add_subcommand("simulate", "ER, BA and WS graphs matched to a reference");
  add_common(simulate, cfg);
  add_density(simulate, cfg);
  simulate->add_option("--reference", cfg.reference, "Matrix whose n and edge count are matched");
  simulate->add_option("--manifest", cfg.manifest, "Match the dataset's group average instead");
  simulate->add_option("--nodes", cfg.nodes);
  simulate->add_option("--edges", cfg.edges);
  simulate->add_option("--ws-rewire", cfg.ws_rewire, "Watts-Strogatz rewiring probability")
      ->capture_default_str();
  simulate->add_option("--seed", cfg.seed)->capture_default_str();
  simulate->add_option("--models", cfg.models, "Comma-separated subset of er, ba, ws")
      ->capture_default_str();

  auto* density = app.add_subcommand("density", "Gaussian-smoothed spectral density curves");
  add_common(density, cfg);
  add_dataset(density, cfg, false);
  add_density(density, cfg);
  density->add_option("--matrix", cfg.matrices, "Extra matrix file (repeatable)")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  density->add_flag("--group-average", cfg.group_average,
                    "One curve per label from the average weighted matrix");

  std::vector<std::string> args;
  try {
    args = expand_config(raw_args);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return kExitUsage;
  }
  for (auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();

  try {
    validate(cfg);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    return dispatch(cfg, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  return run_cli(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace specemd::cli
