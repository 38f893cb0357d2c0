#include "config.hpp"

#include <fstream>
#include <initializer_list>
#include <string_view>
#include <type_traits>

#include "bfd/benchmark_functions.hpp"
#include "bfd/error.hpp"
#include "bfd/signal.hpp"

namespace bfd::cli {

namespace {

using nlohmann::json;

// Rejects keys outside `allowed` in the object at `where`.
void check_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ArgumentError(std::string(where) + " must be an object");
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ArgumentError("unknown config key '" + std::string(where) + "." + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, std::string_view where, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
      if (!it->is_number_unsigned()) throw ArgumentError("not a non-negative integer");
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_integer()) throw ArgumentError("not an integer");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!it->is_number()) throw ArgumentError("not a number");
    }
    out = it->get<T>();
  } catch (const std::exception& e) {
    throw ArgumentError("config key '" + std::string(where) + "." + key + "': " + e.what());
  }
}

void read_algorithm(const json& j, std::string_view where, tune::Algorithm& out) {
  std::string name;
  read(j, "algorithm", where, name);
  if (!name.empty()) out = parse_algorithm(name);
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ArgumentError(message);
}

}  // namespace

tune::Algorithm parse_algorithm(const std::string& name) {
  if (name == "abc") return tune::Algorithm::kAbc;
  if (name == "iabc") return tune::Algorithm::kIabc;
  throw ArgumentError("unknown algorithm '" + name + "' (expected abc or iabc)");
}

std::string algorithm_name(tune::Algorithm algorithm) {
  return algorithm == tune::Algorithm::kIabc ? "iabc" : "abc";
}

PipelineConfig config_from_json(const json& j) {
  PipelineConfig c;
  check_keys(j, "config",
             {"seed", "out_dir", "dataset", "shapelet", "ternary", "gbdt", "tuner", "benchmark"});
  read(j, "seed", "config", c.seed);
  std::string out_dir = c.out_dir.string();
  read(j, "out_dir", "config", out_dir);
  c.out_dir = out_dir;

  if (auto it = j.find("dataset"); it != j.end()) {
    const auto& d = *it;
    check_keys(d, "dataset", {"path", "synthetic", "split"});
    std::string path;
    read(d, "path", "dataset", path);
    c.dataset.path = path;
    if (auto s = d.find("synthetic"); s != d.end()) {
      check_keys(*s, "dataset.synthetic", {"classes", "per_class", "length"});
      read(*s, "classes", "dataset.synthetic", c.dataset.synthetic.classes);
      read(*s, "per_class", "dataset.synthetic", c.dataset.synthetic.per_class);
      read(*s, "length", "dataset.synthetic", c.dataset.synthetic.length);
    }
    if (auto s = d.find("split"); s != d.end()) {
      check_keys(*s, "dataset.split", {"per_class_train", "per_class_test"});
      read(*s, "per_class_train", "dataset.split", c.dataset.per_class_train);
      read(*s, "per_class_test", "dataset.split", c.dataset.per_class_test);
    }
  }

  if (auto it = j.find("shapelet"); it != j.end()) {
    check_keys(*it, "shapelet", {"min_len", "max_len", "r", "quality", "candidate_budget"});
    read(*it, "min_len", "shapelet", c.shapelet.min_len);
    read(*it, "max_len", "shapelet", c.shapelet.max_len);
    read(*it, "r", "shapelet", c.shapelet.r);
    read(*it, "quality", "shapelet", c.shapelet.quality);
    read(*it, "candidate_budget", "shapelet", c.shapelet.candidate_budget);
  }

  if (auto it = j.find("ternary"); it != j.end()) {
    check_keys(*it, "ternary", {"k"});
    read(*it, "k", "ternary", c.ternary_k);
  }

  if (auto it = j.find("gbdt"); it != j.end()) {
    if (it->is_object() && it->contains("seed")) {
      throw ArgumentError("unknown config key 'gbdt.seed' (the top-level seed is used)");
    }
    c.gbdt = gbdt::params_from_json(*it);
  }

  if (auto it = j.find("tuner"); it != j.end()) {
    check_keys(*it, "tuner",
               {"algorithm", "colony_size", "max_iterations", "folds", "regions", "weight_step",
                "limit", "space"});
    read_algorithm(*it, "tuner", c.tuner.algorithm);
    read(*it, "colony_size", "tuner", c.tuner.colony_size);
    read(*it, "max_iterations", "tuner", c.tuner.max_iterations);
    read(*it, "folds", "tuner", c.tuner.folds);
    read(*it, "regions", "tuner", c.tuner.regions);
    read(*it, "weight_step", "tuner", c.tuner.weight_step);
    read(*it, "limit", "tuner", c.tuner.limit);
    std::string space;
    read(*it, "space", "tuner", space);
    if (space == "all") c.tuner.all_parameters = true;
    else if (space.empty() || space == "estimators_and_rate") c.tuner.all_parameters = false;
    else throw ArgumentError("config key 'tuner.space': expected estimators_and_rate or all");
  }

  if (auto it = j.find("benchmark"); it != j.end()) {
    check_keys(*it, "benchmark",
               {"function", "algorithm", "colony_size", "max_iterations", "regions",
                "weight_step", "limit", "repetitions"});
    read(*it, "function", "benchmark", c.benchmark.function);
    read_algorithm(*it, "benchmark", c.benchmark.algorithm);
    read(*it, "colony_size", "benchmark", c.benchmark.colony_size);
    read(*it, "max_iterations", "benchmark", c.benchmark.max_iterations);
    read(*it, "regions", "benchmark", c.benchmark.regions);
    read(*it, "weight_step", "benchmark", c.benchmark.weight_step);
    read(*it, "limit", "benchmark", c.benchmark.limit);
    read(*it, "repetitions", "benchmark", c.benchmark.repetitions);
  }

  c.gbdt.seed = c.seed;
  c.validate();
  return c;
}

void PipelineConfig::validate() const {
  require(!out_dir.empty(), "out_dir must not be empty");
  require(dataset.synthetic.classes >= 2, "dataset.synthetic.classes must be >= 2");
  require(dataset.synthetic.classes <= kPresetClassCount,
          "dataset.synthetic.classes must be <= " + std::to_string(kPresetClassCount));
  require(dataset.synthetic.per_class >= 1, "dataset.synthetic.per_class must be >= 1");
  require(dataset.synthetic.length >= 1, "dataset.synthetic.length must be >= 1");
  require(shapelet.min_len >= 2, "shapelet.min_len must be >= 2");
  require(shapelet.max_len >= shapelet.min_len, "shapelet.max_len must be >= shapelet.min_len");
  require(shapelet.quality >= 0.0 && shapelet.quality <= 1.0, "shapelet.quality must be in [0, 1]");
  require(shapelet.candidate_budget >= 1, "shapelet.candidate_budget must be >= 1");
  require(ternary_k >= 1 && ternary_k <= 10, "ternary.k must be in [1, 10]");
  gbdt.validate();
  require(tuner.colony_size >= 2, "tuner.colony_size must be >= 2");
  require(tuner.max_iterations >= 1, "tuner.max_iterations must be >= 1");
  require(tuner.folds >= 2, "tuner.folds must be >= 2");
  require(tuner.regions >= 1 && tuner.regions <= tuner.colony_size,
          "tuner.regions must be in [1, colony_size]");
  require(tuner.weight_step > 0.0 && tuner.weight_step < 1.0, "tuner.weight_step must be in (0, 1)");
  require(opt::find_benchmark(benchmark.function).has_value(),
          "benchmark.function: unknown function '" + benchmark.function + "'");
  require(benchmark.colony_size >= 2, "benchmark.colony_size must be >= 2");
  require(benchmark.max_iterations >= 1, "benchmark.max_iterations must be >= 1");
  require(benchmark.regions >= 1 && benchmark.regions <= benchmark.colony_size,
          "benchmark.regions must be in [1, colony_size]");
  require(benchmark.weight_step > 0.0 && benchmark.weight_step < 1.0,
          "benchmark.weight_step must be in (0, 1)");
  require(benchmark.repetitions >= 1, "benchmark.repetitions must be >= 1");
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ArgumentError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

json to_json(const PipelineConfig& c) {
  auto params = gbdt::to_json(c.gbdt);
  params.erase("seed");
  return {
      {"seed", c.seed},
      {"out_dir", c.out_dir.string()},
      {"dataset",
       {{"path", c.dataset.path.string()},
        {"synthetic",
         {{"classes", c.dataset.synthetic.classes},
          {"per_class", c.dataset.synthetic.per_class},
          {"length", c.dataset.synthetic.length}}},
        {"split",
         {{"per_class_train", c.dataset.per_class_train},
          {"per_class_test", c.dataset.per_class_test}}}}},
      {"shapelet",
       {{"min_len", c.shapelet.min_len},
        {"max_len", c.shapelet.max_len},
        {"r", c.shapelet.r},
        {"quality", c.shapelet.quality},
        {"candidate_budget", c.shapelet.candidate_budget}}},
      {"ternary", {{"k", c.ternary_k}}},
      {"gbdt", params},
      {"tuner",
       {{"algorithm", algorithm_name(c.tuner.algorithm)},
        {"colony_size", c.tuner.colony_size},
        {"max_iterations", c.tuner.max_iterations},
        {"folds", c.tuner.folds},
        {"regions", c.tuner.regions},
        {"weight_step", c.tuner.weight_step},
        {"limit", c.tuner.limit},
        {"space", c.tuner.all_parameters ? "all" : "estimators_and_rate"}}},
      {"benchmark",
       {{"function", c.benchmark.function},
        {"algorithm", algorithm_name(c.benchmark.algorithm)},
        {"colony_size", c.benchmark.colony_size},
        {"max_iterations", c.benchmark.max_iterations},
        {"regions", c.benchmark.regions},
        {"weight_step", c.benchmark.weight_step},
        {"limit", c.benchmark.limit},
        {"repetitions", c.benchmark.repetitions}}},
  };
}

opt::RunConfig run_config(const TunerConfig& tuner, std::uint64_t seed) {
  opt::RunConfig rc;
  rc.colony_size = tuner.colony_size;
  rc.max_iterations = tuner.max_iterations;
  rc.regions = tuner.regions;
  rc.weight_step = tuner.weight_step;
  rc.limit = tuner.limit;
  rc.seed = seed;
  return rc;
}

opt::RunConfig run_config(const BenchmarkConfig& bench, std::uint64_t seed) {
  opt::RunConfig rc;
  rc.colony_size = bench.colony_size;
  rc.max_iterations = bench.max_iterations;
  rc.regions = bench.regions;
  rc.weight_step = bench.weight_step;
  rc.limit = bench.limit;
  rc.seed = seed;
  return rc;
}

}  // namespace bfd::cli
