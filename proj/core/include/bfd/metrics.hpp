#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "bfd/matrix.hpp"

namespace bfd::metrics {

/// counts[t][p]: rows are true classes, columns predictions.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int classes);

  int classes() const noexcept { return classes_; }
  std::uint64_t operator()(int truth, int predicted) const {
    return counts_[index(truth, predicted)];
  }
  void add(int truth, int predicted);

  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t trace() const noexcept;
  std::uint64_t row_sum(int truth) const;
  double accuracy() const noexcept;

  void write_csv(std::ostream& out) const;

 private:
  std::size_t index(int t, int p) const {
    return static_cast<std::size_t>(t) * static_cast<std::size_t>(classes_) +
           static_cast<std::size_t>(p);
  }

  int classes_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

// Throws ArgumentError on length mismatch or a label outside [0, classes).
ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted, int classes);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  int positive_class = 0;
  std::vector<RocPoint> points;  // from (0,0) to (1,1)
  double auc = 0.0;
  // False when the class has no positive or no negative rows; such curves
  // are left out of the macro average.
  bool defined = true;
};

/// One-vs-rest ROC per class from a probability matrix (n x C), thresholds
/// swept over each column with tied scores grouped, AUC by trapezoids.
std::vector<RocCurve> roc_auc(std::span<const int> truth, const Matrix& probabilities);

// Mean AUC over defined curves.
double macro_auc(std::span<const RocCurve> curves);

void write_roc_csv(std::ostream& out, const RocCurve& curve);

/// Runs `op` and measures monotonic wall-clock seconds. Returns
/// (result, seconds), or just seconds when `op` returns void.
template <typename Op>
auto timed(Op&& op) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  if constexpr (std::is_void_v<std::invoke_result_t<Op>>) {
    std::forward<Op>(op)();
    return std::chrono::duration<double>(Clock::now() - t0).count();
  } else {
    auto result = std::forward<Op>(op)();
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return std::pair{std::move(result), secs};
  }
}

}  // namespace bfd::metrics
