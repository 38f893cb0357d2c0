#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace bfd {

/// One labeled vibration time series.
struct VibrationRecord {
  std::vector<double> samples;
  int label = 0;
  double sample_rate_hz = 12000.0;
  std::string source_id;

  friend bool operator==(const VibrationRecord&, const VibrationRecord&) = default;
};

// Train/test partition as indices into Dataset::records().
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;

  bool empty() const noexcept { return train.empty() && test.empty(); }
  friend bool operator==(const Split&, const Split&) = default;
};

/// Immutable collection of records with a class count and an optional split.
/// Construction validates that every record is non-empty and finite, that
/// labels are below the class count, and that the split is disjoint.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<VibrationRecord> records, int class_count, Split split = {});

  const std::vector<VibrationRecord>& records() const noexcept { return records_; }
  const VibrationRecord& operator[](std::size_t i) const { return records_[i]; }
  std::size_t size() const noexcept { return records_.size(); }
  int class_count() const noexcept { return class_count_; }
  const Split& split() const noexcept { return split_; }
  bool has_split() const noexcept { return !split_.empty(); }

  // Training indices, or every index when no split has been made.
  std::vector<std::size_t> training_indices() const;

  Dataset with_split(Split split) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<VibrationRecord> records_;
  int class_count_ = 0;
  Split split_;
};

/// Parameters of one synthetic fault class: a shaft sinusoid, a train of
/// exponentially decaying impacts every `impulse_period_samples`, optional
/// ringing at `resonance_hz`, and white Gaussian noise.
struct SyntheticFaultSpec {
  int class_id = 0;
  std::size_t impulse_period_samples = 100;
  double impulse_amplitude = 1.0;
  double decay_rate = 0.05;  // per sample
  double noise_sigma = 0.1;
  double base_frequency_hz = 30.0;
  double sine_amplitude = 1.0;
  double resonance_hz = 0.0;  // 0 = unmodulated decaying impulse
  double sample_rate_hz = 12000.0;
};

/// Ten class presets laid out like the CWRU protocol: 0 normal, 1-3 inner
/// race, 4-6 ball, 7-9 outer race, each fault type at three severities.
SyntheticFaultSpec fault_preset(int class_id);
inline constexpr int kPresetClassCount = 10;

VibrationRecord synthesize(const SyntheticFaultSpec& spec, std::size_t length,
                           std::uint64_t seed);

// `per_class` records of each of `classes` presets, records grouped by class.
Dataset synthesize_dataset(int classes, std::size_t per_class, std::size_t length,
                           std::uint64_t seed);

/// Stratified split with exactly `per_class_train` / `per_class_test` records
/// per class. Indices in each part are sorted ascending.
Dataset split(const Dataset& dataset, std::size_t per_class_train,
              std::size_t per_class_test, std::uint64_t seed);

// Wide CSV: one record per row, amplitudes then the integer label.
Dataset load_csv(const std::filesystem::path& path);
void save_csv(const Dataset& dataset, const std::filesystem::path& path);

/// `<stem>.meta.json` next to the CSV.
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

// CSV plus sidecar (class_count, sample_rate_hz, split). The sidecar is
// optional on load.
void save_dataset(const Dataset& dataset, const std::filesystem::path& csv_path);
Dataset load_dataset(const std::filesystem::path& csv_path);

/// Classic time-domain condition indicators: mean, std, rms, peak,
/// peak-to-peak, crest factor, kurtosis, skewness, shape factor, impulse
/// factor, clearance factor.
std::vector<double> time_domain_features(std::span<const double> samples);
inline constexpr std::size_t kTimeDomainFeatureCount = 11;

}  // namespace bfd
