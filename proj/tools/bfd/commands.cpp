#include "commands.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bfd/benchmark_functions.hpp"
#include "bfd/csv.hpp"
#include "bfd/error.hpp"
#include "bfd/gbdt.hpp"
#include "bfd/metrics.hpp"
#include "bfd/optimizer.hpp"
#include "bfd/pipeline.hpp"
#include "bfd/shapelet.hpp"
#include "bfd/signal.hpp"
#include "bfd/tuner.hpp"
#include "config.hpp"

namespace bfd::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Error raised inside a subcommand, tagged with the stage that failed.
struct StageError : std::runtime_error {
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(what), stage(std::move(stage)) {}
  std::string stage;
};

template <typename F>
auto stage(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed for " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

fs::path or_default(const std::string& flag, const fs::path& fallback) {
  return flag.empty() ? fallback : fs::path(flag);
}

// Flag values that override config keys when given.
struct Overrides {
  std::uint64_t seed = 0;
  std::string config_path;
  std::string out_dir;

  std::string dataset;
  std::size_t min_len = 0, max_len = 0, r = 0, k = 0;
  double quality = 0.0;

  std::string features, model;
  int n_estimators = 0, max_depth = 0;
  double learning_rate = 0.0;
  bool use_tuned = false;

  std::string algorithm;
  std::size_t colony_size = 0, iterations = 0, folds = 0, regions = 0, limit = 0;
  double weight_step = 0.0;

  std::string function;
  std::size_t repetitions = 0;
};

bool given(const CLI::App& app, const char* name) { return app.count(name) > 0; }

Dataset load_source(const PipelineConfig& c) {
  const auto& d = c.dataset;
  Dataset ds = d.path.empty()
                   ? synthesize_dataset(d.synthetic.classes, d.synthetic.per_class,
                                        d.synthetic.length, c.seed)
                   : load_dataset(d.path);
  if (!ds.has_split() && d.per_class_train > 0) {
    ds = split(ds, d.per_class_train, d.per_class_test, c.seed);
  }
  return ds;
}

int cmd_extract(const PipelineConfig& c, std::ostream& out) {
  const Dataset ds = stage("dataset.load", [&] { return load_source(c); });

  shapelet::DiscoveryOptions opts;
  opts.min_length = c.shapelet.min_len;
  opts.max_length = c.shapelet.max_len;
  opts.max_shapelets = c.shapelet.r;
  opts.quality = c.shapelet.quality;
  opts.candidate_budget = c.shapelet.candidate_budget;
  opts.seed = c.seed;
  const auto set = stage("shapelet.discover", [&] { return shapelet::discover(ds, opts); });

  const auto train_rows = ds.training_indices();
  const auto train = stage("ternary.featurize", [&] {
    return pipeline::shapelet_ternary_table(ds, train_rows, set, c.ternary_k);
  });
  const auto test = stage("ternary.featurize", [&] {
    return pipeline::shapelet_ternary_table(ds, ds.split().test, set, c.ternary_k);
  });

  stage("extract.write", [&] {
    write_json(c.out_dir / "shapelets.json", shapelet::to_json(set));
    csv::write_labeled_rows(c.out_dir / "features_train.csv", train.features, train.labels);
    const auto test_path = c.out_dir / "features_test.csv";
    if (test.labels.empty()) {
      fs::remove(test_path);
    } else {
      csv::write_labeled_rows(test_path, test.features, test.labels);
    }
    return 0;
  });
  out << "extract: " << set.shapelets.size() << " shapelets, beta " << set.beta << ", "
      << train.labels.size() << " train rows, " << test.labels.size() << " test rows\n";
  return kOk;
}

int cmd_train(const PipelineConfig& c, const Overrides& o, std::ostream& out) {
  const auto data = stage("features.load", [&] {
    return csv::read_feature_matrix(or_default(o.features, c.out_dir / "features_train.csv"));
  });
  gbdt::BoosterParams params = c.gbdt;
  if (o.use_tuned) {
    params = stage("tune_result.load", [&] {
      auto p = gbdt::params_from_json(read_json(c.out_dir / "tune_result.json").at("best_params"));
      p.seed = c.seed;
      return p;
    });
  }
  const auto [model, secs] =
      stage("gbdt.train", [&] { return metrics::timed([&] { return gbdt::train(data.features, data.labels, params); }); });

  const auto pred = gbdt::predict(model, data.features);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == data.labels[i];
  const double train_acc = static_cast<double>(hits) / static_cast<double>(pred.size());

  stage("train.write", [&] {
    write_json(c.out_dir / "model.json", gbdt::to_json(model));
    write_json(c.out_dir / "train_report.json", {{"fit_seconds", secs},
                                                 {"rounds", model.rounds()},
                                                 {"class_count", model.class_count},
                                                 {"feature_count", model.feature_count},
                                                 {"train_accuracy", train_acc}});
    return 0;
  });
  out << "train: " << model.rounds() << " rounds, train accuracy " << train_acc << '\n';
  return kOk;
}

int cmd_evaluate(const PipelineConfig& c, const Overrides& o, std::ostream& out) {
  const auto model = stage("model.load", [&] {
    return gbdt::model_from_json(read_json(or_default(o.model, c.out_dir / "model.json")));
  });
  const auto data = stage("features.load", [&] {
    return csv::read_feature_matrix(or_default(o.features, c.out_dir / "features_test.csv"));
  });

  const auto [cm, curves] = stage("metrics.compute", [&] {
    if (data.features.cols() != model.feature_count) {
      throw ArgumentError("feature file has " + std::to_string(data.features.cols()) +
                          " columns, model expects " + std::to_string(model.feature_count));
    }
    const auto proba = gbdt::predict_proba(model, data.features);
    const auto pred = gbdt::predict(model, data.features);
    return std::pair{metrics::confusion(data.labels, pred, model.class_count),
                     metrics::roc_auc(data.labels, proba)};
  });
  const double macro = metrics::macro_auc(curves);

  json fit_seconds = nullptr;
  if (const auto report = c.out_dir / "train_report.json"; fs::exists(report)) {
    fit_seconds = stage("train_report.load", [&] { return read_json(report).at("fit_seconds"); });
  }

  stage("evaluate.write", [&] {
    std::ostringstream cm_csv;
    cm.write_csv(cm_csv);
    write_text(c.out_dir / "confusion.csv", cm_csv.str());
    for (const auto& curve : curves) {
      std::ostringstream roc;
      metrics::write_roc_csv(roc, curve);
      write_text(c.out_dir / ("roc_class_" + std::to_string(curve.positive_class) + ".csv"),
                 roc.str());
    }
    write_json(c.out_dir / "summary.json",
               {{"accuracy", cm.accuracy()}, {"macro_auc", macro}, {"fit_seconds", fit_seconds}});
    return 0;
  });
  out << "evaluate: accuracy " << cm.accuracy() << ", macro AUC " << macro << '\n';
  return kOk;
}

int cmd_tune(const PipelineConfig& c, const Overrides& o, std::ostream& out) {
  const auto data = stage("features.load", [&] {
    return csv::read_feature_matrix(or_default(o.features, c.out_dir / "features_train.csv"));
  });
  auto space = c.tuner.all_parameters ? tune::TuneSpace::all_parameters()
                                      : tune::TuneSpace::estimators_and_rate();
  space.base = c.gbdt;
  tune::Validation validation;
  validation.folds = c.tuner.folds;
  validation.seed = c.seed;

  const auto result = stage("tuner.tune", [&] {
    return tune::tune(data.features, data.labels, space, run_config(c.tuner, c.seed),
                      c.tuner.algorithm, validation);
  });

  stage("tune.write", [&] {
    auto best = gbdt::to_json(result.best_params);
    best.erase("seed");
    write_json(c.out_dir / "tune_result.json",
               {{"algorithm", algorithm_name(c.tuner.algorithm)},
                {"best_params", best},
                {"best_accuracy", result.best_accuracy},
                {"convergence_iteration", result.trace.convergence_iteration},
                {"evaluations", result.trace.evaluations},
                {"distinct_evaluations", result.distinct_evaluations}});
    std::ostringstream trace;
    trace << "iteration,best_accuracy\n0," << csv::format_double(result.trace.initial_best) << '\n';
    for (std::size_t i = 0; i < result.trace.best_values.size(); ++i) {
      trace << i + 1 << ',' << csv::format_double(result.trace.best_values[i]) << '\n';
    }
    write_text(c.out_dir / "tune_trace.csv", trace.str());
    return 0;
  });
  out << "tune: best accuracy " << result.best_accuracy << " at n_estimators "
      << result.best_params.n_estimators << ", learning_rate " << result.best_params.learning_rate
      << '\n';
  return kOk;
}

int cmd_benchmark(const PipelineConfig& c, std::ostream& out) {
  const auto fn = *opt::find_benchmark(c.benchmark.function);
  const auto space = fn.space();
  for (std::size_t rep = 0; rep < c.benchmark.repetitions; ++rep) {
    const std::uint64_t seed = c.seed + rep;
    const auto trace = stage("optimizer.run", [&] {
      const auto rc = run_config(c.benchmark, seed);
      return c.benchmark.algorithm == tune::Algorithm::kIabc ? opt::run_iabc(space, rc)
                                                             : opt::run_abc(space, rc);
    });
    stage("benchmark.write", [&] {
      std::ostringstream csv_out;
      csv_out << "iteration,best_f\n0," << csv::format_double(trace.initial_best) << '\n';
      for (std::size_t i = 0; i < trace.best_values.size(); ++i) {
        csv_out << i + 1 << ',' << csv::format_double(trace.best_values[i]) << '\n';
      }
      const auto suffix = std::to_string(rep);
      write_text(c.out_dir / ("benchmark_trace_" + suffix + ".csv"), csv_out.str());
      write_json(c.out_dir / ("benchmark_summary_" + suffix + ".json"),
                 {{"function", fn.name},
                  {"algorithm", algorithm_name(c.benchmark.algorithm)},
                  {"seed", seed},
                  {"best_f", trace.best_value},
                  {"best_x", trace.best_position},
                  {"convergence_iteration", trace.convergence_iteration},
                  {"evaluations", trace.evaluations}});
      return 0;
    });
    out << "benchmark " << fn.name << " seed " << seed << ": best_f " << trace.best_value
        << " (converged at iteration " << trace.convergence_iteration << ")\n";
  }
  return kOk;
}

void apply_overrides(PipelineConfig& c, const CLI::App& app, const CLI::App& sub,
                     const Overrides& o) {
  if (given(app, "--seed")) {
    c.seed = o.seed;
    c.gbdt.seed = o.seed;
  }
  if (given(app, "--out")) c.out_dir = o.out_dir;
  const std::string name = sub.get_name();
  if (name == "extract") {
    if (given(sub, "--dataset")) c.dataset.path = o.dataset;
    if (given(sub, "--min-len")) c.shapelet.min_len = o.min_len;
    if (given(sub, "--max-len")) c.shapelet.max_len = o.max_len;
    if (given(sub, "--r")) c.shapelet.r = o.r;
    if (given(sub, "--quality")) c.shapelet.quality = o.quality;
    if (given(sub, "--k")) c.ternary_k = o.k;
  } else if (name == "train") {
    if (given(sub, "--n-estimators")) c.gbdt.n_estimators = o.n_estimators;
    if (given(sub, "--learning-rate")) c.gbdt.learning_rate = o.learning_rate;
    if (given(sub, "--max-depth")) c.gbdt.max_depth = o.max_depth;
  } else if (name == "tune") {
    if (given(sub, "--algorithm")) c.tuner.algorithm = parse_algorithm(o.algorithm);
    if (given(sub, "--colony-size")) c.tuner.colony_size = o.colony_size;
    if (given(sub, "--iterations")) c.tuner.max_iterations = o.iterations;
    if (given(sub, "--folds")) c.tuner.folds = o.folds;
  } else if (name == "benchmark") {
    if (given(sub, "--function")) c.benchmark.function = o.function;
    if (given(sub, "--algorithm")) c.benchmark.algorithm = parse_algorithm(o.algorithm);
    if (given(sub, "--colony-size")) c.benchmark.colony_size = o.colony_size;
    if (given(sub, "--iterations")) c.benchmark.max_iterations = o.iterations;
    if (given(sub, "--regions")) c.benchmark.regions = o.regions;
    if (given(sub, "--weight-step")) c.benchmark.weight_step = o.weight_step;
    if (given(sub, "--limit")) c.benchmark.limit = o.limit;
    if (given(sub, "--repetitions")) c.benchmark.repetitions = o.repetitions;
  }
  c.validate();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bearing fault diagnosis toolkit: shapelet + ternary pattern features, "
               "boosted trees, bee colony tuning"};
  app.name("bfd");
  app.require_subcommand(1, 1);
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "Seed for every random stage");
  app.add_option("--out", o.out_dir, "Output directory");

  auto* extract = app.add_subcommand("extract", "Discover shapelets and write feature tables");
  extract->add_option("--dataset", o.dataset, "Labeled CSV dataset (default: synthetic)");
  extract->add_option("--min-len", o.min_len, "Shortest shapelet length");
  extract->add_option("--max-len", o.max_len, "Longest shapelet length");
  extract->add_option("--r", o.r, "Shapelets to keep (0: ten per training record)");
  extract->add_option("--quality", o.quality, "Minimum information gain");
  extract->add_option("--k", o.k, "Ternary neighbors per side");

  auto* train = app.add_subcommand("train", "Fit the boosted-tree classifier");
  train->add_option("--features", o.features, "Training feature CSV");
  train->add_option("--n-estimators", o.n_estimators, "Boosting rounds");
  train->add_option("--learning-rate", o.learning_rate, "Shrinkage");
  train->add_option("--max-depth", o.max_depth, "Maximum tree depth");
  train->add_flag("--tuned", o.use_tuned, "Use best_params from tune_result.json");

  auto* tune_cmd = app.add_subcommand("tune", "Search booster parameters with a bee colony");
  tune_cmd->add_option("--features,--dataset", o.features, "Training feature CSV");
  tune_cmd->add_option("--algorithm", o.algorithm, "abc or iabc");
  tune_cmd->add_option("--colony-size", o.colony_size, "Food sources");
  tune_cmd->add_option("--iterations", o.iterations, "Colony iterations");
  tune_cmd->add_option("--folds", o.folds, "Cross-validation folds");

  auto* bench = app.add_subcommand("benchmark", "Run the colony optimizer on a test function");
  bench->add_option("--function", o.function, "f1..f5");
  bench->add_option("--algorithm", o.algorithm, "abc or iabc");
  bench->add_option("--colony-size,-N", o.colony_size, "Food sources");
  bench->add_option("--iterations", o.iterations, "Iterations per run");
  bench->add_option("--regions,-v", o.regions, "Sub-regions (iabc)");
  bench->add_option("--weight-step,--eta", o.weight_step, "Region weight step (iabc)");
  bench->add_option("--limit", o.limit, "Scout threshold (0: N * D)");
  bench->add_option("--repetitions", o.repetitions, "Runs; run i uses seed + i");

  auto* evaluate = app.add_subcommand("evaluate", "Score a model on a feature table");
  evaluate->add_option("--features", o.features, "Feature CSV (default: features_test.csv)");
  evaluate->add_option("--model", o.model, "Model JSON (default: model.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  PipelineConfig config;
  try {
    if (!o.config_path.empty()) config = load_config(o.config_path);
    apply_overrides(config, app, *sub, o);
    fs::create_directories(config.out_dir);
  } catch (const std::exception& e) {
    err << "error [config]: " << e.what() << '\n';
    return kUsage;
  }

  const std::string name = sub->get_name();
  int failure = kUsage;
  try {
    if (name == "extract") {
      failure = kExtractFailed;
      return cmd_extract(config, out);
    }
    if (name == "train") {
      failure = kTrainFailed;
      return cmd_train(config, o, out);
    }
    if (name == "tune") {
      failure = kTuneFailed;
      return cmd_tune(config, o, out);
    }
    if (name == "benchmark") {
      failure = kBenchmarkFailed;
      return cmd_benchmark(config, out);
    }
    failure = kEvaluateFailed;
    return cmd_evaluate(config, o, out);
  } catch (const StageError& e) {
    err << "error [" << e.stage << "]: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error [" << name << "]: " << e.what() << '\n';
  }
  return failure;
}

}  // namespace bfd::cli
