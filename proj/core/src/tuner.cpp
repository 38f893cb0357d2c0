#include "bfd/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "bfd/error.hpp"

namespace bfd::tune {

TuneSpace TuneSpace::estimators_and_rate() {
  TuneSpace s;
  s.params = {
      {"n_estimators", ParamKind::kInteger, 1.0, 1000.0},
      {"learning_rate", ParamKind::kReal, 0.01, 1.0},
  };
  return s;
}

TuneSpace TuneSpace::all_parameters() {
  TuneSpace s = estimators_and_rate();
  s.params.push_back({"max_depth", ParamKind::kInteger, 1.0, 15.0});
  s.params.push_back({"min_child_weight", ParamKind::kReal, 1.0, 100.0});
  s.params.push_back({"colsample_bytree", ParamKind::kReal, 0.05, 1.0});
  return s;
}

namespace {

bool known_integer(const std::string& name) {
  return name == "n_estimators" || name == "max_depth";
}

bool known_real(const std::string& name) {
  return name == "learning_rate" || name == "min_child_weight" || name == "colsample_bytree";
}

void assign(gbdt::BoosterParams& p, const std::string& name, double v) {
  if (name == "n_estimators") p.n_estimators = static_cast<int>(v);
  else if (name == "max_depth") p.max_depth = static_cast<int>(v);
  else if (name == "learning_rate") p.learning_rate = v;
  else if (name == "min_child_weight") p.min_child_weight = v;
  else if (name == "colsample_bytree") p.colsample_bytree = v;
}

std::string describe(const gbdt::BoosterParams& p) {
  std::ostringstream os;
  os << "n_estimators=" << p.n_estimators << " learning_rate=" << p.learning_rate
     << " max_depth=" << p.max_depth << " min_child_weight=" << p.min_child_weight
     << " colsample_bytree=" << p.colsample_bytree;
  return os.str();
}

}  // namespace

void TuneSpace::validate() const {
  if (params.empty()) throw ArgumentError("tune space has no parameters");
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& d = params[i];
    const bool integer = d.kind == ParamKind::kInteger;
    if (integer ? !known_integer(d.name) : !known_real(d.name)) {
      throw ArgumentError("tune space: '" + d.name + "' is not a tunable " +
                          (integer ? "integer" : "real") + " parameter");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (params[j].name == d.name) throw ArgumentError("tune space: duplicate '" + d.name + "'");
    }
    if (!(d.lower <= d.upper) || !std::isfinite(d.lower) || !std::isfinite(d.upper)) {
      throw ArgumentError("tune space: bad bounds for '" + d.name + "'");
    }
    if (integer && std::ceil(d.lower) > std::floor(d.upper)) {
      throw ArgumentError("tune space: no integer inside bounds of '" + d.name + "'");
    }
  }
  // Both box corners must decode to valid booster parameters.
  std::vector<double> lo, hi;
  for (const auto& d : params) {
    lo.push_back(d.lower);
    hi.push_back(d.upper);
  }
  decode(lo).validate();
  decode(hi).validate();
}

gbdt::BoosterParams TuneSpace::decode(std::span<const double> x) const {
  if (x.size() != params.size()) throw ArgumentError("coordinate count does not match tune space");
  gbdt::BoosterParams p = base;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& d = params[i];
    double v = x[i];
    if (d.kind == ParamKind::kInteger) {
      v = std::clamp(std::nearbyint(v), std::ceil(d.lower), std::floor(d.upper));
    } else {
      v = std::clamp(v, d.lower, d.upper);
    }
    assign(p, d.name, v);
  }
  return p;
}

namespace {

double accuracy_on(const Matrix& x, std::span<const int> y, const gbdt::BoosterParams& params,
                   std::span<const std::size_t> train_rows, std::span<const std::size_t> test_rows) {
  std::vector<int> y_train(train_rows.size()), y_test(test_rows.size());
  for (std::size_t i = 0; i < train_rows.size(); ++i) y_train[i] = y[train_rows[i]];
  for (std::size_t i = 0; i < test_rows.size(); ++i) y_test[i] = y[test_rows[i]];
  const auto model = gbdt::train(x.select_rows(train_rows), y_train, params);
  const auto pred = gbdt::predict(model, x.select_rows(test_rows));
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == y_test[i];
  return test_rows.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(test_rows.size());
}

}  // namespace

double objective(const Matrix& x, std::span<const int> y, const gbdt::BoosterParams& params,
                 std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw ArgumentError("folds must be >= 2");
  if (y.size() != x.rows()) throw ArgumentError("label count does not match feature rows");
  int max_label = -1;
  for (int l : y) {
    if (l < 0) throw ArgumentError("negative class label");
    max_label = std::max(max_label, l);
  }
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(max_label + 1));
  for (std::size_t i = 0; i < y.size(); ++i) by_class[static_cast<std::size_t>(y[i])].push_back(i);

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> fold_of(y.size());
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& idx = by_class[c];
    if (idx.empty()) continue;
    if (idx.size() < folds) {
      throw ArgumentError("class " + std::to_string(c) + " has " + std::to_string(idx.size()) +
                          " rows, fewer than " + std::to_string(folds) + " folds");
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t k = 0; k < idx.size(); ++k) fold_of[idx[k]] = k % folds;
  }

  double total = 0.0;
  std::vector<std::size_t> train_rows, test_rows;
  for (std::size_t f = 0; f < folds; ++f) {
    train_rows.clear();
    test_rows.clear();
    for (std::size_t i = 0; i < y.size(); ++i) (fold_of[i] == f ? test_rows : train_rows).push_back(i);
    total += accuracy_on(x, y, params, train_rows, test_rows);
  }
  return total / static_cast<double>(folds);
}

double holdout_accuracy(const Matrix& x, std::span<const int> y,
                        const gbdt::BoosterParams& params, const Holdout& holdout) {
  if (holdout.test.empty()) throw ArgumentError("holdout test set is empty");
  for (auto i : holdout.train) {
    if (i >= x.rows()) throw ArgumentError("holdout index out of range");
  }
  for (auto i : holdout.test) {
    if (i >= x.rows()) throw ArgumentError("holdout index out of range");
  }
  return accuracy_on(x, y, params, holdout.train, holdout.test);
}

double evaluate(const Matrix& x, std::span<const int> y, const gbdt::BoosterParams& params,
                const Validation& validation) {
  if (validation.holdout) return holdout_accuracy(x, y, params, *validation.holdout);
  return objective(x, y, params, validation.folds, validation.seed);
}

TuneResult tune(const Matrix& x, std::span<const int> y, const TuneSpace& space,
                const opt::RunConfig& config, Algorithm algorithm, const Validation& validation) {
  space.validate();

  std::map<std::vector<double>, double> cache;
  auto key_of = [](const gbdt::BoosterParams& p) {
    return std::vector<double>{static_cast<double>(p.n_estimators), p.learning_rate,
                               static_cast<double>(p.max_depth), p.min_child_weight,
                               p.colsample_bytree};
  };

  opt::SearchSpace search;
  search.sense = opt::Sense::kMaximize;
  for (const auto& d : space.params) {
    search.lower.push_back(d.lower);
    search.upper.push_back(d.upper);
  }
  search.objective = [&](std::span<const double> coords) {
    const auto params = space.decode(coords);
    auto key = key_of(params);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    double acc = 0.0;
    try {
      acc = evaluate(x, y, params, validation);
    } catch (const ArgumentError& e) {
      throw ArgumentError("tune objective at " + describe(params) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("tune objective at " + describe(params) + ": " + e.what());
    }
    cache.emplace(std::move(key), acc);
    return acc;
  };

  TuneResult result;
  result.trace = algorithm == Algorithm::kIabc ? opt::run_iabc(search, config)
                                               : opt::run_abc(search, config);
  result.best_params = space.decode(result.trace.best_position);
  result.best_accuracy = result.trace.best_value;
  result.distinct_evaluations = cache.size();
  return result;
}

}  // namespace bfd::tune
