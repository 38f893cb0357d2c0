#include "bfd/signal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "bfd/csv.hpp"
#include "bfd/error.hpp"

namespace bfd {

Dataset::Dataset(std::vector<VibrationRecord> records, int class_count, Split split)
    : records_(std::move(records)), class_count_(class_count), split_(std::move(split)) {
  if (class_count_ < 1) throw ArgumentError("class_count must be positive");
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (r.samples.empty()) throw DataError("record " + std::to_string(i) + " is empty");
    if (r.label < 0 || r.label >= class_count_) {
      throw DataError("record " + std::to_string(i) + " label out of range");
    }
    for (double v : r.samples) {
      if (!std::isfinite(v)) {
        throw DataError("record " + std::to_string(i) + " contains a non-finite sample");
      }
    }
    if (!(r.sample_rate_hz > 0.0)) {
      throw DataError("record " + std::to_string(i) + " has non-positive sample rate");
    }
  }
  std::set<std::size_t> seen;
  for (auto idx : split_.train) {
    if (idx >= records_.size()) throw ArgumentError("train index out of range");
    if (!seen.insert(idx).second) throw ArgumentError("duplicate train index");
  }
  for (auto idx : split_.test) {
    if (idx >= records_.size()) throw ArgumentError("test index out of range");
    if (!seen.insert(idx).second) throw ArgumentError("train and test overlap");
  }
}

std::vector<std::size_t> Dataset::training_indices() const {
  if (has_split()) return split_.train;
  std::vector<std::size_t> all(records_.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return all;
}

Dataset Dataset::with_split(Split split) const {
  return Dataset(records_, class_count_, std::move(split));
}

SyntheticFaultSpec fault_preset(int class_id) {
  if (class_id < 0 || class_id >= kPresetClassCount) {
    throw ArgumentError("no preset for class " + std::to_string(class_id));
  }
  SyntheticFaultSpec s;
  s.class_id = class_id;
  s.base_frequency_hz = 30.0;
  s.sine_amplitude = 0.5;
  s.noise_sigma = 0.15;
  if (class_id == 0) {
    s.impulse_amplitude = 0.0;
    s.impulse_period_samples = 100;
    return s;
  }
  // Fault type sets the impact period and ringing frequency; severity sets
  // impact strength and damping.
  const int type = (class_id - 1) / 3;
  const int severity = (class_id - 1) % 3;
  constexpr std::size_t kPeriod[] = {96, 112, 104};
  constexpr double kResonance[] = {3100.0, 1900.0, 1200.0};
  constexpr double kAmplitude[] = {1.0, 1.6, 2.2};
  constexpr double kDecay[] = {0.06, 0.045, 0.035};
  s.impulse_period_samples = kPeriod[type];
  s.resonance_hz = kResonance[type];
  s.impulse_amplitude = kAmplitude[severity];
  s.decay_rate = kDecay[severity];
  return s;
}

VibrationRecord synthesize(const SyntheticFaultSpec& spec, std::size_t length,
                           std::uint64_t seed) {
  if (spec.impulse_period_samples < 2) throw ArgumentError("impulse period must be >= 2");
  if (length < spec.impulse_period_samples) {
    throw ArgumentError("length shorter than impulse period");
  }
  for (double v : {spec.impulse_amplitude, spec.decay_rate, spec.noise_sigma,
                   spec.base_frequency_hz, spec.sine_amplitude, spec.resonance_hz,
                   spec.sample_rate_hz}) {
    if (!std::isfinite(v)) throw ArgumentError("synthetic spec has non-finite field");
  }
  if (spec.noise_sigma < 0.0 || spec.impulse_amplitude < 0.0 || spec.decay_rate < 0.0) {
    throw ArgumentError("synthetic spec has negative amplitude, decay or noise");
  }
  if (!(spec.sample_rate_hz > 0.0)) throw ArgumentError("sample rate must be positive");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double phase = 2.0 * std::numbers::pi * unit(rng);
  const auto offset = static_cast<std::size_t>(
      unit(rng) * static_cast<double>(spec.impulse_period_samples));

  VibrationRecord rec;
  rec.label = spec.class_id;
  rec.sample_rate_hz = spec.sample_rate_hz;
  rec.source_id = "synthetic:" + std::to_string(spec.class_id) + ":" + std::to_string(seed);
  rec.samples.resize(length);

  const double w = 2.0 * std::numbers::pi * spec.base_frequency_hz / spec.sample_rate_hz;
  for (std::size_t t = 0; t < length; ++t) {
    rec.samples[t] = spec.sine_amplitude * std::sin(w * static_cast<double>(t) + phase);
  }

  if (spec.impulse_amplitude > 0.0) {
    const double wr = 2.0 * std::numbers::pi * spec.resonance_hz / spec.sample_rate_hz;
    for (std::size_t start = offset; start < length; start += spec.impulse_period_samples) {
      for (std::size_t t = start; t < length; ++t) {
        const double tau = static_cast<double>(t - start);
        const double envelope = std::exp(-spec.decay_rate * tau);
        if (envelope < 1e-9) break;
        const double carrier = spec.resonance_hz > 0.0 ? std::cos(wr * tau) : 1.0;
        rec.samples[t] += spec.impulse_amplitude * envelope * carrier;
      }
    }
  }

  if (spec.noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, spec.noise_sigma);
    for (auto& v : rec.samples) v += noise(rng);
  }
  return rec;
}

Dataset synthesize_dataset(int classes, std::size_t per_class, std::size_t length,
                           std::uint64_t seed) {
  if (classes < 1 || classes > kPresetClassCount) {
    throw ArgumentError("synthetic class count must be in [1, 10]");
  }
  std::vector<VibrationRecord> records;
  records.reserve(static_cast<std::size_t>(classes) * per_class);
  std::mt19937_64 seeder(seed);
  for (int c = 0; c < classes; ++c) {
    const auto spec = fault_preset(c);
    for (std::size_t i = 0; i < per_class; ++i) {
      records.push_back(synthesize(spec, length, seeder()));
    }
  }
  return Dataset(std::move(records), classes);
}

Dataset split(const Dataset& dataset, std::size_t per_class_train,
              std::size_t per_class_test, std::uint64_t seed) {
  const auto classes = static_cast<std::size_t>(dataset.class_count());
  std::vector<std::vector<std::size_t>> by_class(classes);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    by_class[static_cast<std::size_t>(dataset[i].label)].push_back(i);
  }
  std::mt19937_64 rng(seed);
  Split out;
  for (std::size_t c = 0; c < classes; ++c) {
    auto& idx = by_class[c];
    if (idx.size() < per_class_train + per_class_test) {
      throw ArgumentError("class " + std::to_string(c) + " has " + std::to_string(idx.size()) +
                          " records, need " + std::to_string(per_class_train + per_class_test));
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    out.train.insert(out.train.end(), idx.begin(),
                     idx.begin() + static_cast<std::ptrdiff_t>(per_class_train));
    out.test.insert(out.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(per_class_train),
                    idx.begin() + static_cast<std::ptrdiff_t>(per_class_train + per_class_test));
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return dataset.with_split(std::move(out));
}

Dataset load_csv(const std::filesystem::path& path) {
  auto rows = csv::read_labeled_rows(path);
  std::vector<VibrationRecord> records;
  records.reserve(rows.size());
  int max_label = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    VibrationRecord r;
    r.samples = std::move(rows[i].values);
    r.label = rows[i].label;
    r.source_id = path.filename().string() + ":" + std::to_string(i + 1);
    max_label = std::max(max_label, r.label);
    records.push_back(std::move(r));
  }
  return Dataset(std::move(records), max_label + 1);
}

void save_csv(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& r : dataset.records()) {
    for (double v : r.samples) out << csv::format_double(v) << ',';
    out << r.label << '\n';
  }
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".meta.json");
  return p;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& csv_path) {
  save_csv(dataset, csv_path);
  nlohmann::json meta;
  meta["class_count"] = dataset.class_count();
  meta["sample_rate_hz"] =
      dataset.size() == 0 ? 12000.0 : dataset.records().front().sample_rate_hz;
  meta["split"] = {{"train", dataset.split().train}, {"test", dataset.split().test}};
  std::ofstream out(sidecar_path(csv_path));
  if (!out) throw DataError("cannot write sidecar for " + csv_path.string());
  out << meta.dump(2) << '\n';
}

Dataset load_dataset(const std::filesystem::path& csv_path) {
  Dataset base = load_csv(csv_path);
  const auto meta_path = sidecar_path(csv_path);
  if (!std::filesystem::exists(meta_path)) return base;

  nlohmann::json meta;
  try {
    std::ifstream in(meta_path);
    meta = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("bad sidecar " + meta_path.string() + ": " + e.what());
  }
  int class_count = base.class_count();
  double rate = 12000.0;
  Split sp;
  try {
    class_count = meta.value("class_count", class_count);
    rate = meta.value("sample_rate_hz", rate);
    if (meta.contains("split")) {
      sp.train = meta["split"].value("train", std::vector<std::size_t>{});
      sp.test = meta["split"].value("test", std::vector<std::size_t>{});
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError("bad sidecar " + meta_path.string() + ": " + e.what());
  }
  if (class_count < base.class_count()) {
    throw DataError("sidecar class_count smaller than largest label + 1");
  }
  auto records = base.records();
  for (auto& r : records) r.sample_rate_hz = rate;
  return Dataset(std::move(records), class_count, std::move(sp));
}

std::vector<double> time_domain_features(std::span<const double> x) {
  if (x.empty()) throw ArgumentError("time_domain_features of empty signal");
  const auto n = static_cast<double>(x.size());
  double sum = 0.0, sum_abs = 0.0, sum_sqrt_abs = 0.0, sum_sq = 0.0;
  double lo = x.front(), hi = x.front(), peak = 0.0;
  for (double v : x) {
    sum += v;
    sum_abs += std::abs(v);
    sum_sqrt_abs += std::sqrt(std::abs(v));
    sum_sq += v * v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    peak = std::max(peak, std::abs(v));
  }
  const double mean = sum / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  const double sd = std::sqrt(m2);
  const double rms = std::sqrt(sum_sq / n);
  const double mean_abs = sum_abs / n;
  const double sra = std::pow(sum_sqrt_abs / n, 2.0);
  auto ratio = [](double a, double b) { return b > 0.0 ? a / b : 0.0; };
  return {
      mean,
      sd,
      rms,
      peak,
      hi - lo,
      ratio(peak, rms),
      ratio(m4, m2 * m2),
      ratio(m3, m2 * sd),
      ratio(rms, mean_abs),
      ratio(peak, mean_abs),
      ratio(peak, sra),
  };
}

}  // namespace bfd
