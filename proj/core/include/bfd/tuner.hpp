#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bfd/gbdt.hpp"
#include "bfd/matrix.hpp"
#include "bfd/optimizer.hpp"

namespace bfd::tune {

enum class ParamKind { kInteger, kReal };

struct ParamDescriptor {
  std::string name;  // a BoosterParams field name
  ParamKind kind = ParamKind::kReal;
  double lower = 0.0;
  double upper = 0.0;
};

/// Hyperparameter box searched by the optimizer. Fields not listed keep the
/// value in `base`. Integer parameters are rounded to the nearest integer
/// and clamped into their bounds when decoded.
struct TuneSpace {
  std::vector<ParamDescriptor> params;
  gbdt::BoosterParams base;

  // n_estimators in [1, 1000] and learning_rate in [0.01, 1].
  static TuneSpace estimators_and_rate();
  // Adds max_depth, min_child_weight and colsample_bytree over their full ranges.
  static TuneSpace all_parameters();

  void validate() const;
  gbdt::BoosterParams decode(std::span<const double> coordinates) const;
};

enum class Algorithm { kAbc, kIabc };

// Row indices for the single train/test evaluation mode.
struct Holdout {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

struct Validation {
  std::size_t folds = 3;
  std::uint64_t seed = 0;
  std::optional<Holdout> holdout;  // replaces cross-validation when set
};

/// Mean accuracy over stratified k folds. Throws ArgumentError when folds < 2
/// or a present class has fewer than `folds` rows.
double objective(const Matrix& features, std::span<const int> labels,
                 const gbdt::BoosterParams& params, std::size_t folds, std::uint64_t seed);

// Accuracy on `holdout.test` of a model trained on `holdout.train`.
double holdout_accuracy(const Matrix& features, std::span<const int> labels,
                        const gbdt::BoosterParams& params, const Holdout& holdout);

double evaluate(const Matrix& features, std::span<const int> labels,
                const gbdt::BoosterParams& params, const Validation& validation);

struct TuneResult {
  gbdt::BoosterParams best_params;
  double best_accuracy = 0.0;
  opt::RunTrace trace;
  std::size_t distinct_evaluations = 0;  // model fits after de-duplication
};

/// Maximizes validation accuracy over `space` with the chosen colony
/// algorithm. Evaluations are cached by decoded parameter values.
TuneResult tune(const Matrix& features, std::span<const int> labels, const TuneSpace& space,
                const opt::RunConfig& config, Algorithm algorithm,
                const Validation& validation = {});

}  // namespace bfd::tune
