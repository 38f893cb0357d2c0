#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "bfd/gbdt.hpp"
#include "bfd/optimizer.hpp"
#include "bfd/tuner.hpp"

namespace bfd::cli {

struct SyntheticSource {
  int classes = 10;
  std::size_t per_class = 600;
  std::size_t length = 1024;
};

struct DatasetConfig {
  std::filesystem::path path;  // empty: generate from `synthetic`
  SyntheticSource synthetic;
  // Stratified split made when the dataset carries none. Zero train count
  // leaves the dataset unsplit.
  std::size_t per_class_train = 450;
  std::size_t per_class_test = 150;
};

struct ShapeletConfig {
  std::size_t min_len = 3;
  std::size_t max_len = 24;
  std::size_t r = 0;  // 0: ten per training record
  double quality = 0.05;
  std::size_t candidate_budget = 50000;
};

struct TunerConfig {
  tune::Algorithm algorithm = tune::Algorithm::kIabc;
  std::size_t colony_size = 20;
  std::size_t max_iterations = 15;
  std::size_t folds = 3;
  std::size_t regions = 4;
  double weight_step = 0.1;
  std::size_t limit = 0;
  bool all_parameters = false;  // false: n_estimators and learning_rate only
};

struct BenchmarkConfig {
  std::string function = "f3";
  tune::Algorithm algorithm = tune::Algorithm::kIabc;
  std::size_t colony_size = 200;
  std::size_t max_iterations = 1000;
  std::size_t regions = 4;
  double weight_step = 0.1;
  std::size_t limit = 0;
  std::size_t repetitions = 1;
};

struct PipelineConfig {
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "out";
  DatasetConfig dataset;
  ShapeletConfig shapelet;
  std::size_t ternary_k = 4;
  gbdt::BoosterParams gbdt;
  TunerConfig tuner;
  BenchmarkConfig benchmark;

  // Throws ArgumentError naming the offending key.
  void validate() const;
};

/// Parses a config document. Missing keys keep their defaults; unknown keys
/// and wrongly typed values throw ArgumentError.
PipelineConfig config_from_json(const nlohmann::json& j);
PipelineConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const PipelineConfig& config);

tune::Algorithm parse_algorithm(const std::string& name);
std::string algorithm_name(tune::Algorithm algorithm);

opt::RunConfig run_config(const TunerConfig& tuner, std::uint64_t seed);
opt::RunConfig run_config(const BenchmarkConfig& bench, std::uint64_t seed);

}  // namespace bfd::cli
