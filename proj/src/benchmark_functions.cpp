#include "pixelstorm/benchmark_functions.hpp"

#include <cmath>
#include <numbers>

namespace pixelstorm::de {

double sphere(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

double rastrigin(std::span<const double> v) {
  double s = 10.0 * static_cast<double>(v.size());
  for (double x : v) s += x * x - 10.0 * std::cos(2.0 * std::numbers::pi * x);
  return s;
}

double rosenbrock(std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double a = v[i + 1] - v[i] * v[i];
    const double b = 1.0 - v[i];
    s += 100.0 * a * a + b * b;
  }
  return s;
}

std::vector<BenchmarkFunction> benchmark_objectives() {
  auto zeros = [](std::size_t n) { return std::vector<double>(n, 0.0); };
  auto ones = [](std::size_t n) { return std::vector<double>(n, 1.0); };
  return {
      {"sphere", -5.0, 5.0, 0.0, zeros, sphere},
      {"rastrigin", -5.12, 5.12, 0.0, zeros, rastrigin},
      {"rosenbrock", -5.0, 10.0, 0.0, ones, rosenbrock},
  };
}

}  // namespace pixelstorm::de
