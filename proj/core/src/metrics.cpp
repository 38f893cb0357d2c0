#include "bfd/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <string>

#include "bfd/csv.hpp"
#include "bfd/error.hpp"

namespace bfd::metrics {

ConfusionMatrix::ConfusionMatrix(int classes) : classes_(classes) {
  if (classes < 1) throw ArgumentError("confusion matrix needs at least one class");
  counts_.assign(static_cast<std::size_t>(classes) * static_cast<std::size_t>(classes), 0);
}

void ConfusionMatrix::add(int truth, int predicted) {
  if (truth < 0 || truth >= classes_ || predicted < 0 || predicted >= classes_) {
    throw ArgumentError("label out of range: truth " + std::to_string(truth) + ", predicted " +
                        std::to_string(predicted));
  }
  ++counts_[index(truth, predicted)];
  ++total_;
}

std::uint64_t ConfusionMatrix::trace() const noexcept {
  std::uint64_t t = 0;
  for (int c = 0; c < classes_; ++c) t += counts_[index(c, c)];
  return t;
}

std::uint64_t ConfusionMatrix::row_sum(int truth) const {
  std::uint64_t s = 0;
  for (int p = 0; p < classes_; ++p) s += counts_[index(truth, p)];
  return s;
}

double ConfusionMatrix::accuracy() const noexcept {
  return total_ == 0 ? 0.0 : static_cast<double>(trace()) / static_cast<double>(total_);
}

void ConfusionMatrix::write_csv(std::ostream& out) const {
  out << "true\\predicted";
  for (int p = 0; p < classes_; ++p) out << ',' << p;
  out << '\n';
  for (int t = 0; t < classes_; ++t) {
    out << t;
    for (int p = 0; p < classes_; ++p) out << ',' << counts_[index(t, p)];
    out << '\n';
  }
}

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted,
                          int classes) {
  if (truth.size() != predicted.size()) {
    throw ArgumentError("truth and prediction lengths differ");
  }
  ConfusionMatrix cm(classes);
  for (std::size_t i = 0; i < truth.size(); ++i) cm.add(truth[i], predicted[i]);
  return cm;
}

std::vector<RocCurve> roc_auc(std::span<const int> truth, const Matrix& probabilities) {
  if (truth.size() != probabilities.rows()) {
    throw ArgumentError("label count does not match probability rows");
  }
  const auto classes = static_cast<int>(probabilities.cols());
  for (int t : truth) {
    if (t < 0 || t >= classes) throw ArgumentError("label out of range for probability matrix");
  }
  const std::size_t n = truth.size();
  std::vector<std::size_t> order(n);
  std::vector<RocCurve> curves;
  curves.reserve(static_cast<std::size_t>(classes));

  for (int c = 0; c < classes; ++c) {
    const auto col = static_cast<std::size_t>(c);
    RocCurve curve;
    curve.positive_class = c;
    const auto pos = static_cast<std::size_t>(std::count(truth.begin(), truth.end(), c));
    const std::size_t neg = n - pos;
    curve.points.push_back({0.0, 0.0});
    if (pos == 0 || neg == 0) {
      curve.defined = false;
      curve.points.push_back({1.0, 1.0});
      curve.auc = 0.0;
      curves.push_back(std::move(curve));
      continue;
    }

    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return probabilities(a, col) > probabilities(b, col);
    });
    std::size_t tp = 0, fp = 0;
    double auc = 0.0;
    for (std::size_t i = 0; i < n;) {
      const double score = probabilities(order[i], col);
      std::size_t j = i;
      while (j < n && probabilities(order[j], col) == score) {
        (truth[order[j]] == c ? tp : fp)++;
        ++j;
      }
      const RocPoint next{static_cast<double>(fp) / static_cast<double>(neg),
                          static_cast<double>(tp) / static_cast<double>(pos)};
      const RocPoint prev = curve.points.back();
      auc += (next.fpr - prev.fpr) * (next.tpr + prev.tpr) * 0.5;
      curve.points.push_back(next);
      i = j;
    }
    curve.auc = auc;
    curves.push_back(std::move(curve));
  }
  return curves;
}

double macro_auc(std::span<const RocCurve> curves) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& c : curves) {
    if (!c.defined) continue;
    sum += c.auc;
    ++count;
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

void write_roc_csv(std::ostream& out, const RocCurve& curve) {
  out << "fpr,tpr\n";
  for (const auto& p : curve.points) {
    out << csv::format_double(p.fpr) << ',' << csv::format_double(p.tpr) << '\n';
  }
}

}  // namespace bfd::metrics
