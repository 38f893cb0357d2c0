#include "bfd/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "bfd/error.hpp"

namespace bfd::gbdt {

void BoosterParams::validate() const {
  auto fail = [](const std::string& what) { throw ArgumentError("BoosterParams: " + what); };
  if (n_estimators < 1 || n_estimators > 1000) fail("n_estimators must be in [1, 1000]");
  if (!(learning_rate >= 0.001 && learning_rate <= 1.0)) {
    fail("learning_rate must be in [0.001, 1]");
  }
  if (max_depth < 1 || max_depth > 15) fail("max_depth must be in [1, 15]");
  if (!(min_child_weight >= 1.0 && min_child_weight <= 100.0)) {
    fail("min_child_weight must be in [1, 100]");
  }
  if (!(colsample_bytree > 0.0 && colsample_bytree <= 1.0)) {
    fail("colsample_bytree must be in (0, 1]");
  }
  if (!(reg_lambda >= 0.0) || !std::isfinite(reg_lambda)) fail("reg_lambda must be >= 0");
  if (!(reg_gamma >= 0.0) || !std::isfinite(reg_gamma)) fail("reg_gamma must be >= 0");
}

RegressionTree::RegressionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw ArgumentError("tree needs at least one node");
  const int n = static_cast<int>(nodes_.size());
  for (const auto& node : nodes_) {
    if (node.is_leaf()) {
      if (!std::isfinite(node.value)) throw DataError("non-finite leaf weight");
    } else if (node.left <= 0 || node.right <= 0 || node.left >= n || node.right >= n) {
      throw DataError("tree child index out of range");
    }
  }
}

double RegressionTree::predict(std::span<const double> row) const {
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const auto& node = nodes_[i];
    i = static_cast<std::size_t>(row[static_cast<std::size_t>(node.feature)] < node.threshold
                                     ? node.left
                                     : node.right);
  }
  return nodes_[i].value;
}

int RegressionTree::depth() const {
  std::vector<int> d(nodes_.size(), 0);
  int deepest = 0;
  // Children always follow their parent in node order.
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, d[i]);
    if (!nodes_[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
    }
  }
  return deepest;
}

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

void softmax_gradients(std::span<const double> margins, int label, std::span<double> grad,
                       std::span<double> hess) {
  const double mx = *std::max_element(margins.begin(), margins.end());
  double z = 0.0;
  for (std::size_t c = 0; c < margins.size(); ++c) {
    grad[c] = std::exp(margins[c] - mx);
    z += grad[c];
  }
  for (std::size_t c = 0; c < margins.size(); ++c) {
    const double p = grad[c] / z;
    grad[c] = p - (static_cast<int>(c) == label ? 1.0 : 0.0);
    hess[c] = p * (1.0 - p);
  }
}

namespace {

void check_inputs(const Matrix& x, std::span<const int> y) {
  if (x.rows() < 2) throw ArgumentError("training needs at least 2 rows");
  if (y.size() != x.rows()) throw ArgumentError("label count does not match feature rows");
  if (x.cols() == 0) throw ArgumentError("training needs at least 1 feature");
  for (int l : y) {
    if (l < 0) throw ArgumentError("negative class label");
  }
  if (std::adjacent_find(y.begin(), y.end(), std::not_equal_to<>()) == y.end()) {
    throw ArgumentError("labels contain a single class");
  }
  for (double v : x.data()) {
    if (!std::isfinite(v)) throw DataError("non-finite feature value");
  }
}

// Rank-binned view of the training matrix: bins[f][row] indexes the sorted
// unique values of feature f.
struct BinnedFeatures {
  std::vector<std::vector<double>> thresholds;  // between bin b and b+1
  std::vector<std::vector<std::uint32_t>> bins;

  explicit BinnedFeatures(const Matrix& x) {
    const std::size_t n = x.rows(), d = x.cols();
    thresholds.resize(d);
    bins.resize(d);
    std::vector<double> col(n);
    for (std::size_t f = 0; f < d; ++f) {
      for (std::size_t r = 0; r < n; ++r) col[r] = x(r, f);
      std::vector<double> uniq = col;
      std::sort(uniq.begin(), uniq.end());
      uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
      auto& th = thresholds[f];
      th.resize(uniq.size() - 1);
      for (std::size_t b = 0; b + 1 < uniq.size(); ++b) {
        double mid = uniq[b] + 0.5 * (uniq[b + 1] - uniq[b]);
        // x < mid must hold exactly for values up to uniq[b].
        if (!(mid > uniq[b]) || !(mid <= uniq[b + 1])) mid = uniq[b + 1];
        th[b] = mid;
      }
      auto& bf = bins[f];
      bf.resize(n);
      for (std::size_t r = 0; r < n; ++r) {
        bf[r] = static_cast<std::uint32_t>(
            std::lower_bound(uniq.begin(), uniq.end(), col[r]) - uniq.begin());
      }
    }
  }

  std::size_t bin_count(std::size_t f) const { return thresholds[f].size() + 1; }
};

struct GradPair {
  double g = 0.0;
  double h = 0.0;
};

struct SplitChoice {
  double gain = 0.0;
  int feature = -1;
  std::uint32_t bin = 0;  // bins <= this go left
};

class TreeGrower {
 public:
  TreeGrower(const BinnedFeatures& binned, const BoosterParams& p) : binned_(binned), p_(p) {}

  // Fits one tree and writes each row's leaf weight into `row_output`.
  RegressionTree grow(std::vector<std::uint32_t> rows, const std::vector<int>& features,
                      std::span<const GradPair> gh, std::span<double> row_output) {
    features_ = &features;
    gh_ = gh;
    out_ = row_output;
    nodes_.clear();
    nodes_.emplace_back();
    build(0, rows, 0);
    return RegressionTree(std::move(nodes_));
  }

 private:
  double score(double g, double h) const { return g * g / (h + p_.reg_lambda); }

  void build(std::size_t node, std::vector<std::uint32_t>& rows, int depth) {
    double G = 0.0, H = 0.0;
    for (auto r : rows) {
      G += gh_[r].g;
      H += gh_[r].h;
    }
    SplitChoice best;
    if (depth < p_.max_depth && rows.size() >= 2 && H >= 2.0 * p_.min_child_weight) {
      best = find_split(rows, G, H);
    }
    if (best.feature < 0) {
      const double denom = H + p_.reg_lambda;
      const double w = denom > 0.0 ? -G / denom * p_.learning_rate : 0.0;
      nodes_[node].value = w;
      for (auto r : rows) out_[r] = w;
      return;
    }

    const auto f = static_cast<std::size_t>(best.feature);
    const auto& bf = binned_.bins[f];
    std::vector<std::uint32_t> left, right;
    left.reserve(rows.size());
    right.reserve(rows.size());
    for (auto r : rows) (bf[r] <= best.bin ? left : right).push_back(r);
    std::vector<std::uint32_t>().swap(rows);

    const auto li = nodes_.size();
    nodes_.emplace_back();
    nodes_.emplace_back();
    nodes_[node].feature = best.feature;
    nodes_[node].threshold = binned_.thresholds[f][best.bin];
    nodes_[node].left = static_cast<int>(li);
    nodes_[node].right = static_cast<int>(li + 1);
    build(li, left, depth + 1);
    build(li + 1, right, depth + 1);
  }

  SplitChoice find_split(const std::vector<std::uint32_t>& rows, double G, double H) {
    SplitChoice best;
    const double parent = score(G, H);
    for (int fi : *features_) {
      const auto f = static_cast<std::size_t>(fi);
      const std::size_t nb = binned_.bin_count(f);
      if (nb < 2) continue;
      const auto& bf = binned_.bins[f];
      if (hist_.size() < nb) {
        hist_.resize(nb);
        hist_n_.resize(nb, 0);
      }
      // Empty bins never produce a split of their own: with min_child_weight
      // >= 1 they are skipped at either end and in between they only repeat
      // the previous gain, which the strict comparison ignores.
      if (4 * rows.size() >= nb) {
        for (auto r : rows) {
          auto& cell = hist_[bf[r]];
          cell.g += gh_[r].g;
          cell.h += gh_[r].h;
        }
        double gl = 0.0, hl = 0.0;
        for (std::uint32_t b = 0; b + 1 < nb; ++b) {
          gl += hist_[b].g;
          hl += hist_[b].h;
          if (hl < p_.min_child_weight) continue;
          const double gr = G - gl, hr = H - hl;
          if (hr < p_.min_child_weight) break;
          const double gain = 0.5 * (score(gl, hl) + score(gr, hr) - parent) - p_.reg_gamma;
          if (gain > best.gain) best = {gain, fi, b};
        }
        std::fill_n(hist_.begin(), nb, GradPair{});
        continue;
      }
      touched_.clear();
      for (auto r : rows) {
        const auto b = bf[r];
        if (hist_n_[b]++ == 0) touched_.push_back(b);
        hist_[b].g += gh_[r].g;
        hist_[b].h += gh_[r].h;
      }
      std::sort(touched_.begin(), touched_.end());
      double gl = 0.0, hl = 0.0;
      // The last occupied bin cannot be a left side.
      for (std::size_t t = 0; t + 1 < touched_.size(); ++t) {
        const auto b = touched_[t];
        gl += hist_[b].g;
        hl += hist_[b].h;
        if (hl < p_.min_child_weight) continue;
        const double gr = G - gl, hr = H - hl;
        if (hr < p_.min_child_weight) break;
        const double gain = 0.5 * (score(gl, hl) + score(gr, hr) - parent) - p_.reg_gamma;
        if (gain > best.gain) best = {gain, fi, b};
      }
      for (auto b : touched_) {
        hist_[b] = {};
        hist_n_[b] = 0;
      }
    }
    return best;
  }

  const BinnedFeatures& binned_;
  const BoosterParams& p_;
  std::span<const GradPair> gh_;
  std::span<double> out_;
  const std::vector<int>* features_ = nullptr;
  std::vector<TreeNode> nodes_;
  std::vector<GradPair> hist_;
  std::vector<std::uint32_t> hist_n_;
  std::vector<std::uint32_t> touched_;
};

double row_loss(std::span<const double> margins, int label) {
  const double mx = *std::max_element(margins.begin(), margins.end());
  double z = 0.0;
  for (double m : margins) z += std::exp(m - mx);
  return std::log(z) + mx - margins[static_cast<std::size_t>(label)];
}

}  // namespace

BoostedModel train(const Matrix& x, std::span<const int> y, const BoosterParams& params) {
  params.validate();
  check_inputs(x, y);
  const std::size_t n = x.rows(), d = x.cols();
  const int C = *std::max_element(y.begin(), y.end()) + 1;
  const auto classes = static_cast<std::size_t>(C);

  BinnedFeatures binned(x);
  std::mt19937_64 rng(params.seed);
  const auto sample_size = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(params.colsample_bytree * static_cast<double>(d))));
  std::vector<int> all_features(d);
  std::iota(all_features.begin(), all_features.end(), 0);

  BoostedModel model;
  model.class_count = C;
  model.feature_count = d;
  model.params = params;
  model.trees.assign(classes, {});
  for (auto& t : model.trees) t.reserve(static_cast<std::size_t>(params.n_estimators));

  std::vector<double> margins(n * classes, 0.0);
  std::vector<double> grad(n * classes), hess(n * classes);
  std::vector<GradPair> gh(n);
  std::vector<std::vector<double>> deltas(classes, std::vector<double>(n, 0.0));
  std::vector<std::uint32_t> root_rows(n);
  std::iota(root_rows.begin(), root_rows.end(), 0u);
  std::vector<int> features;
  TreeGrower grower(binned, params);

  for (int round = 0; round < params.n_estimators; ++round) {
    for (std::size_t r = 0; r < n; ++r) {
      softmax_gradients({margins.data() + r * classes, classes}, y[r],
                        {grad.data() + r * classes, classes},
                        {hess.data() + r * classes, classes});
    }
    for (std::size_t c = 0; c < classes; ++c) {
      for (std::size_t r = 0; r < n; ++r) gh[r] = {grad[r * classes + c], hess[r * classes + c]};
      if (sample_size >= d) {
        features = all_features;
      } else {
        features = all_features;
        std::shuffle(features.begin(), features.end(), rng);
        features.resize(sample_size);
        std::sort(features.begin(), features.end());
      }
      model.trees[c].push_back(grower.grow(root_rows, features, gh, deltas[c]));
    }
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < classes; ++c) margins[r * classes + c] += deltas[c][r];
    }
  }
  return model;
}

Matrix predict_margin(const BoostedModel& model, const Matrix& x) {
  if (x.cols() != model.feature_count) {
    throw ArgumentError("feature dimension " + std::to_string(x.cols()) + " does not match model (" +
                        std::to_string(model.feature_count) + ")");
  }
  const auto classes = static_cast<std::size_t>(model.class_count);
  Matrix m(x.rows(), classes, 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto row = x.row(r);
    for (std::size_t c = 0; c < classes && c < model.trees.size(); ++c) {
      double acc = 0.0;
      for (const auto& tree : model.trees[c]) acc += tree.predict(row);
      m(r, c) = acc;
    }
  }
  return m;
}

Matrix predict_proba(const BoostedModel& model, const Matrix& x) {
  Matrix p = predict_margin(model, x);
  for (std::size_t r = 0; r < p.rows(); ++r) {
    auto row = p.row(r);
    const double mx = *std::max_element(row.begin(), row.end());
    double z = 0.0;
    for (auto& v : row) {
      v = std::exp(v - mx);
      z += v;
    }
    for (auto& v : row) v /= z;
  }
  return p;
}

std::vector<int> predict(const BoostedModel& model, const Matrix& x) {
  const Matrix p = predict_proba(model, x);
  std::vector<int> out(p.rows());
  for (std::size_t r = 0; r < p.rows(); ++r) {
    auto row = p.row(r);
    out[r] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

std::vector<double> staged_loss(const BoostedModel& model, const Matrix& x,
                                std::span<const int> y) {
  if (x.cols() != model.feature_count) throw ArgumentError("feature dimension mismatch");
  if (y.size() != x.rows()) throw ArgumentError("label count does not match feature rows");
  const auto classes = static_cast<std::size_t>(model.class_count);
  for (int l : y) {
    if (l < 0 || l >= model.class_count) throw ArgumentError("label out of range");
  }
  std::vector<double> margins(x.rows() * classes, 0.0);
  auto mean_loss = [&] {
    double total = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) {
      total += row_loss({margins.data() + r * classes, classes}, y[r]);
    }
    return total / static_cast<double>(x.rows());
  };
  std::vector<double> losses{mean_loss()};
  for (std::size_t round = 0; round < model.rounds(); ++round) {
    for (std::size_t r = 0; r < x.rows(); ++r) {
      for (std::size_t c = 0; c < classes; ++c) {
        margins[r * classes + c] += model.trees[c][round].predict(x.row(r));
      }
    }
    losses.push_back(mean_loss());
  }
  return losses;
}

namespace {

long double loss_ld(const std::vector<long double>& m, int label) {
  long double mx = m[0];
  for (auto v : m) mx = std::max(mx, v);
  long double z = 0.0L;
  for (auto v : m) z += std::exp(v - mx);
  return std::log(z) + mx - m[static_cast<std::size_t>(label)];
}

}  // namespace

double gradient_check(const BoosterParams& params, const Matrix& x, std::span<const int> y) {
  const BoostedModel model = train(x, y, params);
  const Matrix margins = predict_margin(model, x);
  const auto classes = static_cast<std::size_t>(model.class_count);
  std::vector<double> g(classes), h(classes);
  std::vector<long double> m(classes);
  constexpr long double eps = 1e-3L;
  double worst = 0.0;
  auto rel = [](double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
  };
  for (std::size_t r = 0; r < x.rows(); ++r) {
    softmax_gradients(margins.row(r), y[r], g, h);
    for (std::size_t c = 0; c < classes; ++c) {
      auto at = [&](long double shift) {
        for (std::size_t k = 0; k < classes; ++k) m[k] = margins(r, k);
        m[c] += shift;
        return loss_ld(m, y[r]);
      };
      const long double f0 = at(0.0L), fp1 = at(eps), fm1 = at(-eps), fp2 = at(2 * eps),
                        fm2 = at(-2 * eps);
      const auto g_num = static_cast<double>((-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * eps));
      const auto h_num =
          static_cast<double>((-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * eps * eps));
      worst = std::max({worst, rel(g[c], g_num), rel(h[c], h_num)});
    }
  }
  return worst;
}

nlohmann::json to_json(const BoosterParams& p) {
  return {{"n_estimators", p.n_estimators},       {"learning_rate", p.learning_rate},
          {"max_depth", p.max_depth},             {"min_child_weight", p.min_child_weight},
          {"colsample_bytree", p.colsample_bytree}, {"reg_lambda", p.reg_lambda},
          {"reg_gamma", p.reg_gamma},             {"seed", p.seed}};
}

BoosterParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ArgumentError("gbdt params must be a JSON object");
  BoosterParams p;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "n_estimators") p.n_estimators = value.get<int>();
      else if (key == "learning_rate") p.learning_rate = value.get<double>();
      else if (key == "max_depth") p.max_depth = value.get<int>();
      else if (key == "min_child_weight") p.min_child_weight = value.get<double>();
      else if (key == "colsample_bytree") p.colsample_bytree = value.get<double>();
      else if (key == "reg_lambda") p.reg_lambda = value.get<double>();
      else if (key == "reg_gamma") p.reg_gamma = value.get<double>();
      else if (key == "seed") p.seed = value.get<std::uint64_t>();
      else throw ArgumentError("unknown gbdt parameter '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("bad gbdt parameter: ") + e.what());
  }
  p.validate();
  return p;
}

nlohmann::json to_json(const BoostedModel& model) {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& per_class : model.trees) {
    nlohmann::json cls = nlohmann::json::array();
    for (const auto& tree : per_class) {
      nlohmann::json nodes = nlohmann::json::array();
      for (const auto& n : tree.nodes()) {
        if (n.is_leaf()) {
          nodes.push_back({{"leaf", n.value}});
        } else {
          nodes.push_back({{"feature", n.feature},
                           {"threshold", n.threshold},
                           {"left", n.left},
                           {"right", n.right}});
        }
      }
      cls.push_back(std::move(nodes));
    }
    trees.push_back(std::move(cls));
  }
  return {{"format", "bfd.gbdt"},
          {"version", kModelFormatVersion},
          {"class_count", model.class_count},
          {"feature_count", model.feature_count},
          {"params", to_json(model.params)},
          {"trees", std::move(trees)}};
}

BoostedModel model_from_json(const nlohmann::json& j) {
  BoostedModel model;
  try {
    if (j.at("format").get<std::string>() != "bfd.gbdt") throw DataError("not a bfd.gbdt model");
    if (j.at("version").get<int>() != kModelFormatVersion) {
      throw DataError("unsupported model version");
    }
    model.class_count = j.at("class_count").get<int>();
    model.feature_count = j.at("feature_count").get<std::size_t>();
    model.params = params_from_json(j.at("params"));
    for (const auto& cls : j.at("trees")) {
      std::vector<RegressionTree> per_class;
      for (const auto& tree : cls) {
        std::vector<TreeNode> nodes;
        for (const auto& n : tree) {
          TreeNode node;
          if (n.contains("leaf")) {
            node.value = n.at("leaf").get<double>();
          } else {
            node.feature = n.at("feature").get<int>();
            node.threshold = n.at("threshold").get<double>();
            node.left = n.at("left").get<int>();
            node.right = n.at("right").get<int>();
            if (node.feature < 0 || static_cast<std::size_t>(node.feature) >= model.feature_count) {
              throw DataError("split feature out of range");
            }
          }
          nodes.push_back(node);
        }
        per_class.emplace_back(std::move(nodes));
      }
      model.trees.push_back(std::move(per_class));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model: ") + e.what());
  }
  if (model.class_count < 1) throw DataError("model class_count must be positive");
  if (!model.trees.empty() && model.trees.size() != static_cast<std::size_t>(model.class_count)) {
    throw DataError("model tree list does not match class_count");
  }
  for (const auto& per_class : model.trees) {
    if (per_class.size() != model.rounds()) throw DataError("ragged tree lists");
  }
  return model;
}

}  // namespace bfd::gbdt
