#include "pixelstorm/de_engine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>

#include <json.hpp>

namespace pixelstorm::de {

Bounds Bounds::uniform(std::size_t n, double lo, double hi) {
  return Bounds{std::vector<double>(n, lo), std::vector<double>(n, hi)};
}

void Bounds::clamp(std::span<double> values) const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = std::clamp(values[i], lower[i], upper[i]);
  }
}

bool Bounds::contains(std::span<const double> values) const {
  if (values.size() != size()) return false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= lower[i] && values[i] <= upper[i])) return false;
  }
  return true;
}

FieldLayout FieldLayout::pixel_records(std::size_t n) {
  FieldLayout layout;
  layout.groups.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    layout.groups[i] = (i % 5) < 2 ? FieldGroup::position : FieldGroup::color;
  }
  return layout;
}

std::string VariantSpec::name() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f/%.1f/%.1f", scale_f, cross_pos, cross_rgb);
  return buf;
}

void VariantSpec::validate() const {
  if (!(scale_f > 0.0 && scale_f <= 1.0)) {
    throw std::invalid_argument("scale factor F must lie in (0, 1]");
  }
  if (f_dither && !(f_dither->first <= f_dither->second && f_dither->first >= 0.0)) {
    throw std::invalid_argument("F dither range must satisfy 0 <= lo <= hi");
  }
  if (!(cross_pos >= 0.0 && cross_pos <= 1.0) || !(cross_rgb >= 0.0 && cross_rgb <= 1.0)) {
    throw std::invalid_argument("crossover probabilities must lie in [0, 1]");
  }
  if (pop_size < 4) throw std::invalid_argument("population too small (need at least 4)");
  if (max_generations == 0) throw std::invalid_argument("max_generations must be positive");
  if (std::isnan(early_stop_fitness)) throw std::invalid_argument("early-stop fitness is NaN");
}

namespace {

double parse_real(std::string_view field, std::string_view whole) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
    throw std::invalid_argument("malformed variant \"" + std::string(whole) +
                                "\": expected F/Cp/Crgb");
  }
  return value;
}

}  // namespace

VariantSpec parse_variant(std::string_view text, VariantSpec base) {
  double parts[3];
  std::size_t start = 0;
  for (int k = 0; k < 3; ++k) {
    std::size_t slash = text.find('/', start);
    bool last = k == 2;
    if (last != (slash == std::string_view::npos)) {
      throw std::invalid_argument("malformed variant \"" + std::string(text) +
                                  "\": expected F/Cp/Crgb");
    }
    std::string_view field = text.substr(start, last ? std::string_view::npos : slash - start);
    parts[k] = parse_real(field, text);
    start = slash + 1;
  }
  if (!(parts[0] > 0.0 && parts[0] <= 1.0)) {
    throw std::invalid_argument("variant \"" + std::string(text) + "\": F must lie in (0, 1]");
  }
  for (int k = 1; k < 3; ++k) {
    if (!(parts[k] >= 0.0 && parts[k] <= 1.0)) {
      throw std::invalid_argument("variant \"" + std::string(text) +
                                  "\": crossover probabilities must lie in [0, 1]");
    }
  }
  base.scale_f = parts[0];
  base.cross_pos = parts[1];
  base.cross_rgb = parts[2];
  return base;
}

InitDistribution InitDistribution::uniform_within(const Bounds& bounds) {
  InitDistribution init;
  init.samplers.reserve(bounds.size());
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    init.samplers.emplace_back(UniformSampler{bounds.lower[i], bounds.upper[i]});
  }
  return init;
}

Problem Problem::over_box(Bounds bounds, ObjectiveFn objective) {
  Problem p;
  p.layout = FieldLayout::pixel_records(bounds.size());
  p.init = InitDistribution::uniform_within(bounds);
  p.bounds = std::move(bounds);
  p.objective = std::move(objective);
  return p;
}

std::size_t Population::best_index() const {
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < fitnesses.size(); ++i) {
    double f = fitnesses[i];
    if (std::isnan(f)) continue;
    if (std::isnan(best_value) || f < best_value) {
      best_value = f;
      best = i;
    }
  }
  return best;
}

double Population::best_fitness() const {
  return fitnesses.empty() ? std::numeric_limits<double>::quiet_NaN()
                           : fitnesses[best_index()];
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::max_generations: return "max_generations";
    case StopReason::fitness_threshold: return "fitness_threshold";
    case StopReason::stop_condition: return "stop_condition";
  }
  return "unknown";
}

EvaluationError::EvaluationError(std::size_t generation, std::size_t index,
                                 const std::string& what)
    : std::runtime_error("objective failed at generation " + std::to_string(generation) +
                         ", index " + std::to_string(index) + ": " + what),
      generation_(generation),
      index_(index) {}

namespace {

std::vector<Evaluation> evaluate_all(const std::vector<Genome>& genomes,
                                     const ObjectiveFn& objective, std::size_t workers,
                                     std::size_t generation) {
  const auto n = static_cast<std::ptrdiff_t>(genomes.size());
  std::vector<Evaluation> out(genomes.size());
  std::vector<std::exception_ptr> errors(genomes.size());
  const int threads = static_cast<int>(std::max<std::size_t>(1, workers));

#pragma omp parallel for num_threads(threads) schedule(dynamic, 8) if (threads > 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = objective(genomes[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }

  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw EvaluationError(generation, i, e.what());
    } catch (...) {
      throw EvaluationError(generation, i, "unknown exception");
    }
  }
  return out;
}

double sample(const Sampler& s, Rng& rng) {
  return std::visit(
      [&rng](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformSampler>) {
          return std::uniform_real_distribution<double>(d.lo, d.hi)(rng);
        } else {
          return std::normal_distribution<double>(d.mean, d.stddev)(rng);
        }
      },
      s);
}

void check_problem(const Problem& problem) {
  const std::size_t n = problem.bounds.size();
  if (problem.bounds.upper.size() != n || problem.init.samplers.size() != n ||
      problem.layout.size() != n) {
    throw std::invalid_argument("problem bounds, init and layout lengths disagree");
  }
  if (!problem.objective) throw std::invalid_argument("problem has no objective");
}

// Keeps the lowest-fitness goal candidate seen so far.
void offer_goal(std::optional<Candidate>& best, const Genome& genome, const Evaluation& eval) {
  if (!eval.goal_reached || std::isnan(eval.fitness)) return;
  if (!best || eval.fitness < best->eval.fitness) best = Candidate{genome, eval};
}

}  // namespace

Population initialize_population(const VariantSpec& spec, const Problem& problem, Rng& rng,
                                 std::size_t workers) {
  if (spec.pop_size < 4) throw std::invalid_argument("population too small (need at least 4)");
  check_problem(problem);

  Population pop;
  pop.individuals.resize(spec.pop_size);
  for (auto& genome : pop.individuals) {
    genome.resize(problem.bounds.size());
    for (std::size_t k = 0; k < genome.size(); ++k) genome[k] = sample(problem.init.samplers[k], rng);
    problem.bounds.clamp(genome);
  }

  auto evals = evaluate_all(pop.individuals, problem.objective, workers, 0);
  pop.fitnesses.resize(spec.pop_size);
  pop.aux.resize(spec.pop_size);
  pop.goal.resize(spec.pop_size);
  for (std::size_t i = 0; i < spec.pop_size; ++i) {
    pop.fitnesses[i] = evals[i].fitness;
    pop.goal[i] = evals[i].goal_reached;
    pop.aux[i] = std::move(evals[i].aux);
  }
  return pop;
}

Genome mutate(const Population& pop, std::size_t index, const VariantSpec& spec,
              const Bounds& bounds, Rng& rng, MutationPartners* partners) {
  const std::size_t n = pop.size();
  if (n < 4) throw std::invalid_argument("population too small (need at least 4)");
  if (index >= n) throw std::out_of_range("mutation index out of range");

  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::size_t r1, r2, r3;
  do r1 = pick(rng); while (r1 == index);
  do r2 = pick(rng); while (r2 == index || r2 == r1);
  do r3 = pick(rng); while (r3 == index || r3 == r1 || r3 == r2);
  if (partners) *partners = {r1, r2, r3};

  double f = spec.scale_f;
  if (spec.f_dither) {
    f = std::uniform_real_distribution<double>(spec.f_dither->first, spec.f_dither->second)(rng);
  }

  const Genome& a = pop.individuals[r1];
  const Genome& b = pop.individuals[r2];
  const Genome& c = pop.individuals[r3];
  Genome mutant(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) mutant[k] = a[k] + f * (b[k] - c[k]);
  bounds.clamp(mutant);
  return mutant;
}

Genome crossover(std::span<const double> parent, std::span<const double> mutant,
                 const FieldLayout& layout, const VariantSpec& spec, Rng& rng) {
  if (parent.size() != mutant.size() || parent.size() != layout.size()) {
    throw std::invalid_argument("crossover: parent, mutant and layout lengths differ");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Strict '<' so that a probability of 0 can never trigger and 1 always does.
  const bool take_pos = unit(rng) < spec.cross_pos;
  const bool take_rgb = unit(rng) < spec.cross_rgb;

  Genome child(mutant.begin(), mutant.end());
  for (std::size_t k = 0; k < child.size(); ++k) {
    const bool from_parent = layout.groups[k] == FieldGroup::position ? take_pos : take_rgb;
    if (from_parent) child[k] = parent[k];
  }
  return child;
}

Winner select(double parent_fitness, double child_fitness) {
  if (std::isnan(child_fitness)) return std::isnan(parent_fitness) ? Winner::child : Winner::parent;
  if (std::isnan(parent_fitness)) return Winner::child;
  return child_fitness <= parent_fitness ? Winner::child : Winner::parent;
}

EvolutionResult evolve(const VariantSpec& spec, const Problem& problem,
                       const EvolveOptions& options) {
  spec.validate();
  check_problem(problem);

  Rng rng(spec.rng_seed);
  EvolutionResult result;
  Population& pop = result.population;
  EvolutionTrace& trace = result.trace;

  pop = initialize_population(spec, problem, rng, options.workers);
  trace.total_evaluations = pop.size();
  bool goal_seen = false;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (pop.goal[i]) {
      goal_seen = true;
      offer_goal(result.best_goal, pop.individuals[i],
                 Evaluation(pop.fitnesses[i], true, pop.aux[i]));
    }
  }

  auto should_stop = [&](std::size_t generation) {
    const double best = pop.best_fitness();
    trace.best_fitness_per_generation.push_back(best);
    if (best < spec.early_stop_fitness) {
      trace.stopped_early = true;
      trace.reason = StopReason::fitness_threshold;
      return true;
    }
    if (options.stop && options.stop(GenerationStatus{generation, best, goal_seen, pop})) {
      trace.stopped_early = true;
      trace.reason = StopReason::stop_condition;
      return true;
    }
    return false;
  };

  if (should_stop(0)) return result;

  std::vector<Genome> children(pop.size());
  for (std::size_t gen = 1; gen <= spec.max_generations; ++gen) {
    for (std::size_t i = 0; i < pop.size(); ++i) {
      Genome mutant = mutate(pop, i, spec, problem.bounds, rng);
      children[i] = crossover(pop.individuals[i], mutant, problem.layout, spec, rng);
    }

    auto evals = evaluate_all(children, problem.objective, options.workers, gen);
    trace.total_evaluations += children.size();
    trace.post_init_evaluations += children.size();

    for (std::size_t i = 0; i < pop.size(); ++i) {
      if (evals[i].goal_reached) {
        goal_seen = true;
        offer_goal(result.best_goal, children[i], evals[i]);
      }
      if (select(pop.fitnesses[i], evals[i].fitness) == Winner::child) {
        pop.individuals[i] = std::move(children[i]);
        pop.fitnesses[i] = evals[i].fitness;
        pop.goal[i] = evals[i].goal_reached;
        pop.aux[i] = std::move(evals[i].aux);
      }
      children[i].clear();
    }
    trace.generations_run = gen;
    if (should_stop(gen)) return result;
  }
  trace.reason = StopReason::max_generations;
  return result;
}

std::string trace_to_json(const EvolutionTrace& trace, const VariantSpec& spec) {
  nlohmann::json j;
  j["best_fitness"] = trace.best_fitness_per_generation;
  j["evaluations"] = trace.total_evaluations;
  j["post_init_evaluations"] = trace.post_init_evaluations;
  j["stopped_early"] = trace.stopped_early;
  j["variant"] = spec.name();
  j["seed"] = spec.rng_seed;
  return j.dump();
}

}  // namespace pixelstorm::de
