#include "bfd/benchmark_functions.hpp"

#include <cmath>
#include <numbers>

namespace bfd::opt {

SearchSpace BenchmarkFunction::space() const {
  SearchSpace s;
  s.lower = {lower, lower};
  s.upper = {upper, upper};
  s.sense = sense;
  auto f = fn;
  s.objective = [f](std::span<const double> p) { return f(p[0], p[1]); };
  return s;
}

double rastrigin_scaled(double x, double y) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return (20.0 + (x * x - 10.0 * std::cos(two_pi * x)) + (y * y - 10.0 * std::cos(two_pi * y))) /
         std::numbers::sqrt2;
}

double sinc_product(double x, double y) {
  auto sinc = [](double v) { return v == 0.0 ? 1.0 : std::sin(v) / v; };
  return sinc(x) * sinc(y);
}

double sphere(double x, double y) { return x * x + y * y; }

double sine_envelope(double x, double y) {
  constexpr double pi = std::numbers::pi;
  return (x * std::sin(4.0 * pi * x) - y * std::sin(4.0 * pi * y + pi + 1.0)) / 2.0;
}

const std::vector<BenchmarkFunction>& benchmark_suite() {
  static const std::vector<BenchmarkFunction> suite = {
      {"f1", Sense::kMaximize, -5.12, 5.12, 118.0, &rastrigin_scaled},
      {"f2", Sense::kMaximize, -10.0, 10.0, 1.0, &sinc_product},
      {"f3", Sense::kMinimize, -10.0, 10.0, 0.0, &sphere},
      {"f4", Sense::kMinimize, -1.0, 2.0, -1.5, &sine_envelope},
      {"f5", Sense::kMinimize, -5.12, 5.12, 0.0, &rastrigin_scaled},
  };
  return suite;
}

std::optional<BenchmarkFunction> find_benchmark(const std::string& name) {
  for (const auto& f : benchmark_suite()) {
    if (f.name == name) return f;
  }
  return std::nullopt;
}

}  // namespace bfd::opt
