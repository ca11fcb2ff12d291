#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "psmds/psmds.hpp"

namespace fs = std::filesystem;
using namespace psmds;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDataCondition = 3;

// Raised for bad flag combinations that CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverFlags {
  std::string radius = "auto";
  double epsilon = 1e-4;
  double delta = 1e-4;
  bool monotone = false;
  double sample_fraction = 1.0;
  std::size_t max_epochs = 100000;
  std::size_t radius_probes = 10;
  std::size_t smacof_max_iters = 3000;
  std::optional<double> stress_tol;
};

struct InputFlags {
  std::string in_path;
  std::string in_format = "csv";
  bool geodesic = false;
  std::size_t k = 12;
  bool ensure_connected = false;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--radius", f.radius, "Starting radius r0, or 'auto'")->capture_default_str();
  cmd->add_option("--epsilon", f.epsilon, "Plateau threshold")->capture_default_str();
  cmd->add_option("--delta", f.delta, "Termination radius")->capture_default_str();
  auto* bad = cmd->add_flag("--bad-moves", "Accept the best move even when it raises the error (default)");
  cmd->add_flag("--monotone", f.monotone, "Only accept improving moves")->excludes(bad);
  cmd->add_option("--sample-fraction", f.sample_fraction, "Fraction of axes searched per epoch")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--max-epochs", f.max_epochs)->capture_default_str();
  cmd->add_option("--radius-probes", f.radius_probes, "Dry-run epochs for --radius auto")
      ->capture_default_str();
  cmd->add_option("--max-iters", f.smacof_max_iters, "SMACOF iteration cap")->capture_default_str();
  cmd->add_option("--stress-tol", f.stress_tol, "SMACOF stress decrease threshold");
}

void add_input_flags(CLI::App* cmd, InputFlags& f) {
  cmd->add_option("--in", f.in_path, "Input points (CSV with header, or word vectors)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--in-format", f.in_format)->check(CLI::IsMember({"csv", "words"}))->capture_default_str();
  cmd->add_flag("--geodesic", f.geodesic, "Use shortest paths on the k-NN graph");
  cmd->add_option("--k", f.k, "Neighbours per point for --geodesic")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_flag("--ensure-connected", f.ensure_connected,
                "Raise k until the neighbour graph is connected instead of failing");
}

struct LoadedInput {
  PointMatrix points;
  std::optional<std::vector<std::string>> labels;  // CSV label column or the words
  bool words = false;
};

LoadedInput load_points(const InputFlags& f) {
  if (f.in_format == "words") {
    WordVectors wv = read_word_vectors(f.in_path);
    return {PointMatrix(wv.vectors), wv.words, true};
  }
  PointTable table = read_point_csv(f.in_path);
  return {std::move(table.points), std::move(table.labels), false};
}

struct Dissimilarities {
  DissimilarityMatrix matrix;
  std::size_t k_used = 0;
};

Dissimilarities build_dissimilarities(const PointMatrix& points, const InputFlags& f) {
  if (!f.geodesic) return {pairwise_distances(points), 0};
  if (f.k >= points.n_points()) throw UsageError("--k must be smaller than the number of points");
  if (f.ensure_connected) {
    GeodesicResult g = geodesic_from_points(points, f.k);
    return {std::move(g.distances), g.k_used};
  }
  return {geodesic_distances(knn_graph(points, f.k)), f.k};
}

SolverConfig make_solver_config(const SolverFlags& f, std::uint64_t seed) {
  SolverConfig cfg;
  if (f.radius != "auto") {
    try {
      std::size_t used = 0;
      cfg.initial_radius = std::stod(f.radius, &used);
      if (used != f.radius.size()) throw std::invalid_argument(f.radius);
    } catch (const std::logic_error&) {
      throw UsageError("--radius must be 'auto' or a positive number");
    }
  }
  cfg.epsilon = f.epsilon;
  cfg.delta = f.delta;
  cfg.allow_bad_moves = !f.monotone;
  cfg.direction_sample_fraction = f.sample_fraction;
  cfg.max_epochs = f.max_epochs;
  cfg.radius_probes = f.radius_probes;
  cfg.seed = seed;
  cfg.validate();
  return cfg;
}

struct MethodRun {
  PointMatrix embedding;
  ConvergenceTrace trace;
  double wall_time = 0.0;
};

MethodRun run_method(const std::string& method, const DissimilarityMatrix& delta, std::size_t dims,
                     const SolverFlags& flags, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  auto finish = [&](PointMatrix emb, ConvergenceTrace trace) {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return MethodRun{std::move(emb), std::move(trace), wall};
  };

  if (method == "pattern-search") {
    FitResult r = fit(delta, dims, make_solver_config(flags, seed));
    return finish(std::move(r.embedding), std::move(r.trace));
  }
  if (method == "smacof") {
    SmacofConfig cfg;
    cfg.max_iters = flags.smacof_max_iters;
    cfg.stress_tol = flags.stress_tol;
    cfg.seed = seed;
    cfg.validate();
    SmacofResult r = smacof_fit(delta, dims, cfg);
    return finish(std::move(r.embedding), std::move(r.trace));
  }
  // classical: a one-record trace holding the MSE of the spectral solution
  ClassicalMdsResult r = classical_mds_embed(delta, dims);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  ConvergenceTrace trace;
  const double err = mse_stress(delta, pairwise_distances(r.embedding));
  trace.records.push_back({0, err, std::numeric_limits<double>::quiet_NaN(), 0.0});
  trace.termination_reason = TerminationReason::stress_converged;
  trace.metadata["method"] = "classical";
  trace.metadata["objective"] = "mse";
  return finish(std::move(r.embedding), std::move(trace));
}

void strip_timing(ConvergenceTrace& trace) {
  for (auto& rec : trace.records) rec.elapsed_sec = 0.0;
}

std::vector<std::string> coordinate_names(std::size_t dims) {
  std::vector<std::string> names;
  for (std::size_t l = 0; l < dims; ++l) names.push_back("x" + std::to_string(l));
  return names;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string shape;
  std::size_t n = 1000;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  std::size_t clusters = 3;
  std::string out;
};

int cmd_generate(const GenerateArgs& a) {
  LabeledPointCloud cloud = [&] {
    if (a.shape == "swissroll") return swissroll(a.n, false, Sparsity::dense, a.seed);
    if (a.shape == "swissroll-hole") return swissroll(a.n, true, Sparsity::dense, a.seed);
    if (a.shape == "swissroll-hole-sparse") return swissroll(a.n, true, Sparsity::sparse, a.seed);
    if (a.shape == "clusters3d") return clusters_3d(a.n, a.clusters, a.seed);
    return toroid_helix(a.n, a.seed);
  }();
  if (a.noise_sigma > 0.0)
    cloud.points = add_gaussian_noise(cloud.points, a.noise_sigma, a.seed ^ 0x9e3779b97f4a7c15ULL);
  write_dataset_csv(a.out, cloud);
  std::cout << "n=" << cloud.points.n_points() << "\nshape=" << a.shape << "\nseed=" << a.seed << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- embed

struct EmbedArgs {
  InputFlags input;
  SolverFlags solver;
  std::string method = "pattern-search";
  std::size_t dims = 2;
  std::uint64_t seed = 0;
  std::string out;
  std::string trace;
  bool no_timing = false;
};

int cmd_embed(const EmbedArgs& a) {
  LoadedInput in = load_points(a.input);
  Dissimilarities d = build_dissimilarities(in.points, a.input);
  MethodRun run = run_method(a.method, d.matrix, a.dims, a.solver, a.seed);

  run.trace.metadata["input"] = fs::path(a.input.in_path).filename().string();
  run.trace.metadata["dims"] = std::to_string(a.dims);
  run.trace.metadata["dissimilarity"] = a.input.geodesic ? "geodesic" : "euclidean";
  if (a.input.geodesic) run.trace.metadata["k"] = std::to_string(d.k_used);
  if (a.no_timing) strip_timing(run.trace);

  if (in.words) {
    write_word_vectors(a.out, *in.labels, run.embedding);
  } else {
    write_point_csv(a.out, run.embedding, coordinate_names(a.dims), in.labels);
  }
  if (!a.trace.empty()) write_trace_csv(a.trace, run.trace);

  std::cout << "n=" << run.embedding.n_points() << "\nmethod=" << a.method << "\ndims=" << a.dims
            << "\nepochs=" << run.trace.epochs()
            << "\nfinal_mse=" << format_number(mse_stress(d.matrix, pairwise_distances(run.embedding)))
            << '\n';
  if (auto it = run.trace.metadata.find("initial_radius"); it != run.trace.metadata.end())
    std::cout << "initial_radius=" << it->second << '\n';
  if (a.input.geodesic) std::cout << "k=" << d.k_used << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string task;
  std::string in;
  std::vector<std::string> pairs;
  std::size_t folds = 10;
  std::size_t k = 1;
  std::uint64_t seed = 0;
  std::string target = "swissroll";
  std::string truth;
  std::string json;
};

using Metrics = std::vector<std::pair<std::string, nlohmann::json>>;

Metrics eval_semantic(const EvalArgs& a) {
  if (a.pairs.empty()) throw UsageError("--task semantic needs at least one --pairs file");
  WordVectors vectors = read_word_vectors(a.in);
  Metrics m;
  for (const auto& path : a.pairs) {
    const std::string prefix = a.pairs.size() == 1 ? "" : fs::path(path).stem().string() + ".";
    SemanticResult r = evaluate_semantic_similarity(vectors, read_word_pairs(path));
    m.emplace_back(prefix + "spearman", r.spearman);
    m.emplace_back(prefix + "pairs_used", r.pairs_used);
    m.emplace_back(prefix + "pairs_dropped", r.pairs_dropped);
  }
  return m;
}

Metrics eval_knn(const EvalArgs& a) {
  PointTable table = read_point_csv(a.in);
  if (!table.labels) throw UsageError("--task knn needs a 'label' column in " + a.in);
  const std::vector<int> labels = labels_as_classes(*table.labels);
  const double f1 = knn_cv_f1(table.points, labels, a.folds, a.k, a.seed);
  return {{"macro_f1", f1}, {"folds", a.folds}, {"k", a.k}};
}

Metrics eval_recovery(const EvalArgs& a) {
  PointTable emb = read_point_csv(a.in);
  if (a.target == "circle") return {{"score", circle_recovery_score(emb.points)}};
  if (a.truth.empty()) throw UsageError("--target " + a.target + " needs --truth");
  PointTable truth = read_point_csv(a.truth);
  if (truth.points.n_points() != emb.points.n_points())
    throw UsageError("--truth and --in have different row counts");
  if (a.target == "plane") return {{"score", plane_recovery_score(emb.points, truth.points)}};

  // swissroll: t from the label column, y from the y coordinate column
  if (!truth.labels) throw UsageError("swissroll truth needs a 'label' column holding t");
  const auto& cols = truth.coordinate_columns;
  const auto y_col = std::find(cols.begin(), cols.end(), "y");
  if (y_col == cols.end()) throw UsageError("swissroll truth needs a 'y' column");
  const std::size_t yi = static_cast<std::size_t>(y_col - cols.begin());
  const std::vector<double> t = labels_as_reals(*truth.labels);
  Matrix ty(t.size(), 2);
  for (std::size_t i = 0; i < t.size(); ++i) {
    ty(i, 0) = t[i];
    ty(i, 1) = truth.points(i, yi);
  }
  return {{"score", plane_recovery_score(emb.points, swissroll_unrolled(ty))},
          {"score_parameter_grid", manifold_recovery_score(emb.points, ty)}};
}

int cmd_eval(const EvalArgs& a) {
  const Metrics m = a.task == "semantic" ? eval_semantic(a)
                    : a.task == "knn"    ? eval_knn(a)
                                         : eval_recovery(a);
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [key, value] : m) {
    if (value.is_number_float()) {
      std::cout << key << '=' << format_number(value.get<double>()) << '\n';
    } else {
      std::cout << key << '=' << value.dump() << '\n';
    }
    out[key] = value;
  }
  if (!a.json.empty()) {
    std::ofstream f(a.json);
    if (!f) throw InvalidArgument("cannot open " + a.json + " for writing");
    f << out.dump(2) << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------- compare

struct CompareArgs {
  InputFlags input;
  SolverFlags solver;
  std::vector<std::string> methods;
  std::size_t dims = 2;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool no_timing = false;
};

int cmd_compare(const CompareArgs& a) {
  if (a.methods.size() < 2) throw UsageError("--methods needs at least two entries");
  LoadedInput in = load_points(a.input);
  Dissimilarities d = build_dissimilarities(in.points, a.input);
  fs::create_directories(a.out_dir);

  std::ofstream summary(fs::path(a.out_dir) / "summary.csv");
  if (!summary) throw InvalidArgument("cannot write summary.csv in " + a.out_dir);
  summary << "method,epochs,final_error,wall_time\n";
  std::cout << "method,epochs,final_error,wall_time\n";
  for (const auto& method : a.methods) {
    MethodRun run = run_method(method, d.matrix, a.dims, a.solver, a.seed);
    run.trace.metadata["dims"] = std::to_string(a.dims);
    if (a.input.geodesic) run.trace.metadata["k"] = std::to_string(d.k_used);
    if (a.no_timing) {
      strip_timing(run.trace);
      run.wall_time = 0.0;
    }
    write_trace_csv((fs::path(a.out_dir) / (method + ".trace.csv")).string(), run.trace);
    const std::string row = method + ',' + std::to_string(run.trace.epochs()) + ',' +
                            format_number(mse_stress(d.matrix, pairwise_distances(run.embedding))) +
                            ',' + format_number(run.wall_time);
    summary << row << '\n';
    std::cout << row << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads_from_env();

  CLI::App app{"Pattern-search multidimensional scaling toolkit"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic manifold dataset");
  generate->add_option("--shape", gen.shape)
      ->required()
      ->check(CLI::IsMember({"swissroll", "swissroll-hole", "swissroll-hole-sparse", "clusters3d",
                             "toroid-helix"}));
  generate->add_option("--n", gen.n)->check(CLI::Range(std::size_t{4}, std::size_t{10000000}))->capture_default_str();
  generate->add_option("--noise-sigma", gen.noise_sigma)->check(CLI::NonNegativeNumber)->capture_default_str();
  generate->add_option("--seed", gen.seed)->capture_default_str();
  generate->add_option("--clusters", gen.clusters, "Cluster count for clusters3d")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000}))
      ->capture_default_str();
  generate->add_option("--out", gen.out)->required();

  EmbedArgs emb;
  auto* embed = app.add_subcommand("embed", "Embed points with one MDS method");
  add_input_flags(embed, emb.input);
  add_solver_flags(embed, emb.solver);
  embed->add_option("--method", emb.method)
      ->check(CLI::IsMember({"pattern-search", "smacof", "classical"}))
      ->capture_default_str();
  embed->add_option("--dims", emb.dims)->check(CLI::PositiveNumber)->capture_default_str();
  embed->add_option("--seed", emb.seed)->capture_default_str();
  embed->add_option("--out", emb.out)->required();
  embed->add_option("--trace", emb.trace, "Convergence trace CSV");
  embed->add_flag("--no-timing", emb.no_timing, "Write zero timings so outputs are byte-identical");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Score an embedding");
  eval->add_option("--task", ev.task)->required()->check(CLI::IsMember({"semantic", "knn", "recovery"}));
  eval->add_option("--in", ev.in, "Embedding (CSV, or word vectors for semantic)")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--pairs", ev.pairs, "Word-pair similarity files")->check(CLI::ExistingFile);
  eval->add_option("--folds", ev.folds)->check(CLI::Range(std::size_t{2}, std::size_t{1000}))->capture_default_str();
  eval->add_option("--k", ev.k, "Neighbours for the k-NN classifier")->check(CLI::PositiveNumber)->capture_default_str();
  eval->add_option("--seed", ev.seed)->capture_default_str();
  eval->add_option("--target", ev.target)
      ->check(CLI::IsMember({"swissroll", "plane", "circle"}))
      ->capture_default_str();
  eval->add_option("--truth", ev.truth, "Ground-truth CSV for plane and swissroll targets")
      ->check(CLI::ExistingFile);
  eval->add_option("--json", ev.json, "Also write the metrics as JSON");

  CompareArgs cmp;
  auto* compare = app.add_subcommand("compare", "Run several methods from the same start");
  add_input_flags(compare, cmp.input);
  add_solver_flags(compare, cmp.solver);
  compare->add_option("--methods", cmp.methods)
      ->required()
      ->delimiter(',')
      ->check(CLI::IsMember({"pattern-search", "smacof", "classical"}));
  compare->add_option("--dims", cmp.dims)->check(CLI::PositiveNumber)->capture_default_str();
  compare->add_option("--seed", cmp.seed)->capture_default_str();
  compare->add_option("--out-dir", cmp.out_dir)->required();
  compare->add_flag("--no-timing", cmp.no_timing, "Write zero timings so outputs are byte-identical");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*generate) return cmd_generate(gen);
    if (*embed) return cmd_embed(emb);
    if (*eval) return cmd_eval(ev);
    return cmd_compare(cmp);
  } catch (const DisconnectedGraph& e) {
    std::cerr << "error: " << e.what() << "\ncomponents=" << e.component_sizes().size() << "\nsizes=";
    for (std::size_t c = 0; c < e.component_sizes().size(); ++c)
      std::cerr << (c ? "," : "") << e.component_sizes()[c];
    std::cerr << "\nhint: raise --k or pass --ensure-connected\n";
    return kExitDataCondition;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
