#ifndef PIXELSTORM_DE_ENGINE_HPP
#define PIXELSTORM_DE_ENGINE_HPP

// Differential evolution over fixed-length bounded real vectors.
//
// One generation: for every index i (in order) draw mutation partners, the
// optional dithered F and the two crossover trials from the run's single
// generator, then evaluate all children (possibly in parallel), then commit
// one-to-one selection in index order. Evaluation never touches the
// generator, so serial and parallel runs produce identical traces.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pixelstorm/rng.hpp"

namespace pixelstorm::de {

using Genome = std::vector<double>;

struct Bounds {
  std::vector<double> lower;
  std::vector<double> upper;

  static Bounds uniform(std::size_t n, double lo, double hi);

  std::size_t size() const { return lower.size(); }
  void clamp(std::span<double> values) const;
  bool contains(std::span<const double> values) const;
};

/// Which crossover trial governs an element.
enum class FieldGroup : std::uint8_t { position, color };

struct FieldLayout {
  std::vector<FieldGroup> groups;

  /// Records of [x, y, r, g, b]: element i is positional iff i % 5 < 2.
  /// Also used for generic vectors whose length is not a multiple of 5.
  static FieldLayout pixel_records(std::size_t n);
  std::size_t size() const { return groups.size(); }
};

struct VariantSpec {
  double scale_f = 0.5;
  std::optional<std::pair<double, double>> f_dither;
  double cross_pos = 0.5;
  double cross_rgb = 0.5;
  std::size_t pop_size = 400;
  std::size_t max_generations = 100;
  double early_stop_fitness = 0.007;
  std::uint64_t rng_seed = 0;

  /// "F/C_p/C_rgb" with one decimal each, e.g. "0.5/0.1/0.1".
  std::string name() const;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

/// Parses "F/Cp/Crgb" onto a copy of `base`. F must lie in (0,1], the
/// crossover probabilities in [0,1].
VariantSpec parse_variant(std::string_view text, VariantSpec base = {});

struct UniformSampler {
  double lo;
  double hi;
};
struct GaussianSampler {
  double mean;
  double stddev;
};
using Sampler = std::variant<UniformSampler, GaussianSampler>;

struct InitDistribution {
  std::vector<Sampler> samplers;  // one per genome element
  static InitDistribution uniform_within(const Bounds& bounds);
};

/// Result of one objective call. `goal_reached` lets the caller signal an
/// application-level success (e.g. a label flip) to the stop condition; `aux`
/// is opaque data kept alongside the fitness (e.g. a probability vector).
struct Evaluation {
  double fitness = 0.0;
  bool goal_reached = false;
  std::vector<double> aux;

  Evaluation() = default;
  Evaluation(double f) : fitness(f) {}  // NOLINT(google-explicit-constructor)
  Evaluation(double f, bool goal, std::vector<double> extra = {})
      : fitness(f), goal_reached(goal), aux(std::move(extra)) {}
};

/// Must be safe to call concurrently when workers > 1.
using ObjectiveFn = std::function<Evaluation(std::span<const double>)>;

struct Problem {
  Bounds bounds;
  FieldLayout layout;
  InitDistribution init;
  ObjectiveFn objective;

  /// Uniform init over the bounds and the default record layout.
  static Problem over_box(Bounds bounds, ObjectiveFn objective);
};

struct Population {
  std::vector<Genome> individuals;
  std::vector<double> fitnesses;
  std::vector<std::vector<double>> aux;
  std::vector<bool> goal;

  std::size_t size() const { return individuals.size(); }
  /// Lowest non-NaN fitness; index 0 when every fitness is NaN.
  std::size_t best_index() const;
  double best_fitness() const;
};

struct Candidate {
  Genome genome;
  Evaluation eval;
};

struct GenerationStatus {
  std::size_t generation;  // 0 is the initial population
  double best_fitness;
  bool goal_reached;  // any evaluation so far signalled its goal
  const Population& population;
};

using StopCondition = std::function<bool(const GenerationStatus&)>;

enum class StopReason { max_generations, fitness_threshold, stop_condition };

struct EvolutionTrace {
  std::vector<double> best_fitness_per_generation;
  std::size_t total_evaluations = 0;      // including the initial population
  std::size_t post_init_evaluations = 0;  // children only
  std::size_t generations_run = 0;
  bool stopped_early = false;
  StopReason reason = StopReason::max_generations;
};

std::string to_string(StopReason reason);

struct EvolutionResult {
  Population population;
  EvolutionTrace trace;
  /// Lowest-fitness evaluation with goal_reached across the whole run.
  std::optional<Candidate> best_goal;
};

struct EvolveOptions {
  StopCondition stop;
  std::size_t workers = 1;
};

/// Raised when the objective throws; carries where it happened.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(std::size_t generation, std::size_t index, const std::string& what);
  std::size_t generation() const { return generation_; }
  std::size_t index() const { return index_; }

 private:
  std::size_t generation_;
  std::size_t index_;
};

struct MutationPartners {
  std::size_t r1, r2, r3;
};

Population initialize_population(const VariantSpec& spec, const Problem& problem, Rng& rng,
                                 std::size_t workers = 1);

/// x_r1 + F * (x_r2 - x_r3), clamped. Partners are distinct from each other
/// and from `index`.
Genome mutate(const Population& pop, std::size_t index, const VariantSpec& spec,
              const Bounds& bounds, Rng& rng, MutationPartners* partners = nullptr);

/// One Bernoulli(C_p) trial copies every position field from the parent, an
/// independent Bernoulli(C_rgb) trial does the same for every color field.
Genome crossover(std::span<const double> parent, std::span<const double> mutant,
                 const FieldLayout& layout, const VariantSpec& spec, Rng& rng);

enum class Winner { parent, child };

/// Lower is better, ties go to the child. NaN loses.
Winner select(double parent_fitness, double child_fitness);

EvolutionResult evolve(const VariantSpec& spec, const Problem& problem,
                       const EvolveOptions& options = {});

/// {"best_fitness": [...], "evaluations": N, "stopped_early": b, "variant": "...", "seed": N}
std::string trace_to_json(const EvolutionTrace& trace, const VariantSpec& spec);

}  // namespace pixelstorm::de

#endif  // PIXELSTORM_DE_ENGINE_HPP
