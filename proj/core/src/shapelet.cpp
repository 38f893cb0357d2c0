#include "bfd/shapelet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "bfd/error.hpp"

namespace bfd::shapelet {

std::size_t ShapeletSet::max_length() const noexcept {
  std::size_t m = 0;
  for (const auto& s : shapelets) m = std::max(m, s.length());
  return m;
}

std::size_t ShapeletSet::total_length() const noexcept {
  std::size_t m = 0;
  for (const auto& s : shapelets) m += s.length();
  return m;
}

namespace {

// Per-window squared distances accumulated shapelet-element-major, so the
// inner loop runs across windows and each window's sum is formed in k order.
void window_distances(std::span<const double> w, std::span<const double> t,
                      std::vector<double>& acc) {
  const std::size_t windows = t.size() - w.size() + 1;
  acc.assign(windows, 0.0);
  double* a = acc.data();
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double wk = w[k];
    const double* tk = t.data() + k;
    for (std::size_t s = 0; s < windows; ++s) {
      const double d = wk - tk[s];
      a[s] += d * d;
    }
  }
}

WindowMatch argmin(const std::vector<double>& acc) {
  WindowMatch best{0, acc[0]};
  for (std::size_t s = 1; s < acc.size(); ++s) {
    if (acc[s] < best.distance) best = {s, acc[s]};
  }
  return best;
}

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

WindowMatch best_match(std::span<const double> shapelet, std::span<const double> series) {
  if (shapelet.empty()) throw ArgumentError("empty shapelet");
  if (series.size() < shapelet.size()) {
    throw ArgumentError("record shorter than shapelet (" + std::to_string(series.size()) +
                        " < " + std::to_string(shapelet.size()) + ")");
  }
  thread_local std::vector<double> acc;
  window_distances(shapelet, series, acc);
  return argmin(acc);
}

double subsequence_distance(std::span<const double> shapelet, std::span<const double> series) {
  return best_match(shapelet, series).distance;
}

double entropy(std::size_t in_class, std::size_t out_class) {
  const std::size_t n = in_class + out_class;
  if (n == 0) throw ArgumentError("entropy of an empty group");
  const double pm = static_cast<double>(in_class) / static_cast<double>(n);
  const double pn = static_cast<double>(out_class) / static_cast<double>(n);
  return -xlog2x(pm) - xlog2x(pn);
}

namespace {

double weighted_entropy(std::size_t pos, std::size_t neg, std::size_t total) {
  const std::size_t n = pos + neg;
  if (n == 0) return 0.0;
  return static_cast<double>(n) / static_cast<double>(total) * entropy(pos, neg);
}

}  // namespace

double information_gain_at(std::span<const ProfileEntry> profile, int positive_label,
                           double threshold) {
  if (profile.size() < 2) throw ArgumentError("information gain needs at least 2 entries");
  std::size_t lp = 0, ln = 0, rp = 0, rn = 0;
  for (const auto& e : profile) {
    const bool pos = e.label == positive_label;
    if (e.distance <= threshold) {
      (pos ? lp : ln)++;
    } else {
      (pos ? rp : rn)++;
    }
  }
  const std::size_t n = profile.size();
  const double ig = entropy(lp + rp, ln + rn) - weighted_entropy(lp, ln, n) -
                    weighted_entropy(rp, rn, n);
  return std::max(0.0, ig);
}

SplitScore information_gain(std::span<const ProfileEntry> profile, int positive_label) {
  if (profile.size() < 2) throw ArgumentError("information gain needs at least 2 entries");
  std::size_t total_pos = 0;
  for (const auto& e : profile) total_pos += e.label == positive_label;
  const std::size_t n = profile.size();
  const double h_all = entropy(total_pos, n - total_pos);

  SplitScore best{0.0, std::numeric_limits<double>::quiet_NaN()};
  std::size_t left_pos = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    left_pos += profile[i].label == positive_label;
    if (!(profile[i].distance < profile[i + 1].distance)) continue;
    const std::size_t left_n = i + 1;
    const double ig = h_all - weighted_entropy(left_pos, left_n - left_pos, n) -
                      weighted_entropy(total_pos - left_pos, (n - left_n) - (total_pos - left_pos),
                                       n);
    const double gain = std::max(0.0, ig);
    if (std::isnan(best.threshold) || gain > best.gain) {
      best = {gain, 0.5 * (profile[i].distance + profile[i + 1].distance)};
    }
  }
  return best;
}

namespace {

struct Candidate {
  std::size_t record = 0;  // dataset index
  std::size_t start = 0;
  std::size_t length = 0;
};

// Maps a linear window id onto (record, length, start). Windows are ordered
// record-major, then by length, then by start.
class CandidateIndex {
 public:
  CandidateIndex(const Dataset& dataset, std::vector<std::size_t> records,
                 std::size_t min_len, std::size_t max_len)
      : dataset_(dataset), records_(std::move(records)), min_len_(min_len), max_len_(max_len) {
    offsets_.reserve(records_.size() + 1);
    offsets_.push_back(0);
    for (auto r : records_) offsets_.push_back(offsets_.back() + windows_in(r));
  }

  std::uint64_t size() const { return offsets_.back(); }

  Candidate at(std::uint64_t id) const {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), id);
    const auto pos = static_cast<std::size_t>(std::distance(offsets_.begin(), it) - 1);
    std::uint64_t rem = id - offsets_[pos];
    const std::size_t n = dataset_[records_[pos]].samples.size();
    for (std::size_t len = min_len_; len <= max_len_ && len <= n; ++len) {
      const std::uint64_t count = n - len + 1;
      if (rem < count) return {records_[pos], static_cast<std::size_t>(rem), len};
      rem -= count;
    }
    throw std::logic_error("candidate id out of range");
  }

 private:
  std::uint64_t windows_in(std::size_t record) const {
    const std::size_t n = dataset_[record].samples.size();
    std::uint64_t total = 0;
    for (std::size_t len = min_len_; len <= max_len_ && len <= n; ++len) total += n - len + 1;
    return total;
  }

  const Dataset& dataset_;
  std::vector<std::size_t> records_;
  std::size_t min_len_;
  std::size_t max_len_;
  std::vector<std::uint64_t> offsets_;
};

// Floyd's algorithm: `k` distinct ids from [0, n), returned sorted.
std::vector<std::uint64_t> sample_ids(std::uint64_t n, std::uint64_t k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(k) * 2);
  for (std::uint64_t j = n - k; j < n; ++j) {
    std::uniform_int_distribution<std::uint64_t> pick(0, j);
    const auto t = pick(rng);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> ids(chosen.begin(), chosen.end());
  std::sort(ids.begin(), ids.end());
  return ids;
}

void validate(const Dataset& dataset, const DiscoveryOptions& o,
              const std::vector<std::size_t>& train) {
  if (o.min_length < 2) throw ArgumentError("min_length must be >= 2");
  if (o.max_length < o.min_length) throw ArgumentError("max_length must be >= min_length");
  if (!(o.quality >= 0.0)) throw ArgumentError("quality must be non-negative");
  if (o.candidate_budget == 0) throw ArgumentError("candidate_budget must be positive");
  if (train.size() < 2) throw ArgumentError("need at least 2 training records");
  std::vector<bool> present(static_cast<std::size_t>(dataset.class_count()), false);
  std::size_t classes = 0;
  for (auto i : train) {
    auto l = static_cast<std::size_t>(dataset[i].label);
    if (!present[l]) {
      present[l] = true;
      ++classes;
    }
  }
  if (classes < 2) throw ArgumentError("training split must contain at least 2 classes");
}

}  // namespace

std::uint64_t count_candidates(const Dataset& dataset, std::size_t min_length,
                               std::size_t max_length) {
  return CandidateIndex(dataset, dataset.training_indices(), min_length, max_length).size();
}

ShapeletSet discover(const Dataset& dataset, const DiscoveryOptions& options) {
  const auto train = dataset.training_indices();
  validate(dataset, options, train);

  std::size_t shortest = std::numeric_limits<std::size_t>::max();
  for (auto i : train) shortest = std::min(shortest, dataset[i].samples.size());
  if (options.min_length > shortest) {
    throw ArgumentError("min_length " + std::to_string(options.min_length) +
                        " exceeds the shortest training record (" + std::to_string(shortest) +
                        " samples)");
  }
  // Every candidate must fit inside every training record.
  const std::size_t max_len = std::min(options.max_length, shortest);

  CandidateIndex index(dataset, train, options.min_length, max_len);
  std::vector<std::uint64_t> ids;
  if (index.size() <= options.candidate_budget) {
    ids.resize(static_cast<std::size_t>(index.size()));
    std::iota(ids.begin(), ids.end(), std::uint64_t{0});
  } else {
    ids = sample_ids(index.size(), options.candidate_budget, options.seed);
  }

  struct Scored {
    Candidate cand;
    double ig;
    std::size_t order;
  };
  std::vector<Scored> kept;
  std::vector<ProfileEntry> profile(train.size());
  for (std::size_t ci = 0; ci < ids.size(); ++ci) {
    const auto cand = index.at(ids[ci]);
    std::span<const double> w(dataset[cand.record].samples.data() + cand.start, cand.length);
    for (std::size_t t = 0; t < train.size(); ++t) {
      profile[t] = {subsequence_distance(w, dataset[train[t]].samples), dataset[train[t]].label};
    }
    std::stable_sort(profile.begin(), profile.end(),
                     [](const ProfileEntry& a, const ProfileEntry& b) {
                       return a.distance < b.distance;
                     });
    const double ig = information_gain(profile, dataset[cand.record].label).gain;
    if (ig >= options.quality) kept.push_back({cand, ig, ci});
  }
  if (kept.empty()) {
    throw NoShapeletsFound("none of " + std::to_string(ids.size()) +
                           " candidates reached information gain " +
                           std::to_string(options.quality));
  }

  std::sort(kept.begin(), kept.end(), [](const Scored& a, const Scored& b) {
    if (a.ig != b.ig) return a.ig > b.ig;
    return a.order < b.order;
  });
  const std::size_t r = options.max_shapelets == 0 ? 10 * train.size() : options.max_shapelets;
  if (kept.size() > r) kept.resize(r);

  ShapeletSet set;
  set.shapelets.reserve(kept.size());
  for (const auto& k : kept) {
    const auto& src = dataset[k.cand.record].samples;
    Shapelet s;
    s.values.assign(src.begin() + static_cast<std::ptrdiff_t>(k.cand.start),
                    src.begin() + static_cast<std::ptrdiff_t>(k.cand.start + k.cand.length));
    s.source_record = k.cand.record;
    s.start = k.cand.start;
    s.ig = k.ig;
    set.shapelets.push_back(std::move(s));
  }
  set.beta = compute_beta(set);
  return set;
}

double compute_beta(const ShapeletSet& set) {
  std::size_t n = 0;
  double sum = 0.0;
  for (const auto& s : set.shapelets) {
    n += s.values.size();
    for (double v : s.values) sum += v;
  }
  if (n < 2) throw ArgumentError("beta needs at least 2 shapelet values");
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (const auto& s : set.shapelets) {
    for (double v : s.values) ss += (v - mean) * (v - mean);
  }
  return std::sqrt(ss / static_cast<double>(n - 1));
}

std::vector<double> transform(std::span<const double> record, const ShapeletSet& set) {
  std::vector<double> out;
  out.reserve(set.total_length());
  for (const auto& s : set.shapelets) {
    const auto m = best_match(s.values, record);
    out.insert(out.end(), record.begin() + static_cast<std::ptrdiff_t>(m.start),
               record.begin() + static_cast<std::ptrdiff_t>(m.start + s.length()));
  }
  return out;
}

nlohmann::json to_json(const ShapeletSet& set) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : set.shapelets) {
    arr.push_back({{"values", s.values},
                   {"source_record", s.source_record},
                   {"start", s.start},
                   {"ig", s.ig}});
  }
  return {{"beta", set.beta}, {"shapelets", std::move(arr)}};
}

ShapeletSet shapelet_set_from_json(const nlohmann::json& j) {
  ShapeletSet set;
  try {
    set.beta = j.at("beta").get<double>();
    for (const auto& e : j.at("shapelets")) {
      Shapelet s;
      s.values = e.at("values").get<std::vector<double>>();
      s.source_record = e.at("source_record").get<std::size_t>();
      s.start = e.at("start").get<std::size_t>();
      s.ig = e.at("ig").get<double>();
      if (s.values.empty()) throw DataError("shapelet with no values");
      set.shapelets.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed shapelet set: ") + e.what());
  }
  if (!(set.beta >= 0.0)) throw DataError("shapelet set beta must be non-negative");
  return set;
}

}  // namespace bfd::shapelet
