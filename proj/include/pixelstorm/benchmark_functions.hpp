#ifndef PIXELSTORM_BENCHMARK_FUNCTIONS_HPP
#define PIXELSTORM_BENCHMARK_FUNCTIONS_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace pixelstorm::de {

/// A test objective with a known global minimum, used to validate the engine.
struct BenchmarkFunction {
  std::string name;
  double lower;  // standard box domain, same for every coordinate
  double upper;
  double minimum_value;
  std::function<std::vector<double>(std::size_t)> minimizer;
  std::function<double(std::span<const double>)> evaluate;
};

double sphere(std::span<const double> v);
double rastrigin(std::span<const double> v);
double rosenbrock(std::span<const double> v);

/// sphere on [-5, 5], Rastrigin on [-5.12, 5.12], Rosenbrock on [-5, 10].
std::vector<BenchmarkFunction> benchmark_objectives();

}  // namespace pixelstorm::de

#endif  // PIXELSTORM_BENCHMARK_FUNCTIONS_HPP
