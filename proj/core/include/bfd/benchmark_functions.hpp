#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bfd/optimizer.hpp"

namespace bfd::opt {

/// Two-dimensional test problem with its published box, sense and optimum.
struct BenchmarkFunction {
  std::string name;
  Sense sense = Sense::kMinimize;
  double lower = 0.0;
  double upper = 0.0;
  double target = 0.0;  // published optimum value
  double (*fn)(double x, double y) = nullptr;

  double operator()(std::span<const double> p) const { return fn(p[0], p[1]); }
  SearchSpace space() const;
};

// (20 + (x^2 - 10 cos 2πx) + (y^2 - 10 cos 2πy)) / sqrt(2)
double rastrigin_scaled(double x, double y);
// sin(x)/x * sin(y)/y with sinc(0) = 1
double sinc_product(double x, double y);
double sphere(double x, double y);
// (x sin(4πx) - y sin(4πy + π + 1)) / 2
double sine_envelope(double x, double y);

/// f1..f5. f1 and f5 share an expression but f1 is maximized on its box and
/// f5 minimized. `target` carries the published optimum; for f1 (118) and
/// f4 (-1.5) it does not match what the expression attains on its box.
const std::vector<BenchmarkFunction>& benchmark_suite();
std::optional<BenchmarkFunction> find_benchmark(const std::string& name);

}  // namespace bfd::opt
