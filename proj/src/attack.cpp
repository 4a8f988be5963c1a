#include "pixelstorm/attack.hpp"

#include "pixelstorm/rng.hpp"

namespace pixelstorm {

namespace {

std::size_t argmax(const std::vector<double>& p) { return ProbabilityVector{p}.argmax(); }

void fill_result(AttackOutcome& out, const Image& image, const PerturbationGenome& genome,
                 std::vector<double> probs) {
  out.genome = genome;
  out.probabilities_after = std::move(probs);
  out.predicted_class_after = argmax(out.probabilities_after);
  out.success = out.predicted_class_after != out.original_class;
  out.confidence = out.probabilities_after[out.predicted_class_after];
  const Distortion cost = distortion_cost(image, apply(image, genome), genome);
  out.reported_distortion = cost.per_channel;
  out.normalized_cost = cost.normalized;
  out.modified_pixels = cost.modified_pixels;
}

}  // namespace

AttackOutcome attack_image(const Image& image, const std::string& image_id, const Oracle& oracle,
                           const AttackConfig& config) {
  AttackOutcome out;
  out.image_id = image_id;
  out.seed = config.spec.rng_seed;

  try {
    const ProbabilityVector clean = oracle.query(image);
    out.clean_probabilities = clean.probs;
    out.original_class = clean.argmax();

    if (config.d == 0) {
      fill_result(out, image, PerturbationGenome{}, clean.probs);
      out.stop_reason = "empty_perturbation";
      return out;
    }

    const std::size_t original = out.original_class;
    de::Problem problem;
    problem.bounds = genome_bounds(image.width(), image.height(), config.d);
    problem.layout = de::FieldLayout::pixel_records(problem.bounds.size());
    problem.init = pixel_init(image.width(), image.height(), config.d);
    problem.objective = [&](std::span<const double> flat) {
      const PerturbationGenome genome = PerturbationGenome::from_flat(flat);
      const Image perturbed = apply(image, genome);
      ProbabilityVector probs = oracle.query(perturbed);
      const double cost = distortion_cost(image, perturbed, genome).normalized;
      const double f = fitness(probs.probs, original, cost, config.fitness);
      const bool flipped = probs.argmax() != original;
      return de::Evaluation(f, flipped, std::move(probs.probs));
    };

    de::EvolveOptions options;
    options.workers = config.workers;
    if (config.stop_on_flip) {
      options.stop = [](const de::GenerationStatus& s) { return s.goal_reached; };
    }

    de::EvolutionResult result = de::evolve(config.spec, problem, options);
    out.evaluations_used = result.trace.total_evaluations;
    out.generations_used = result.trace.generations_run;
    out.stop_reason = de::to_string(result.trace.reason);

    if (result.best_goal) {
      fill_result(out, image, PerturbationGenome::from_flat(result.best_goal->genome),
                  std::move(result.best_goal->eval.aux));
    } else {
      const std::size_t best = result.population.best_index();
      fill_result(out, image, PerturbationGenome::from_flat(result.population.individuals[best]),
                  std::move(result.population.aux[best]));
    }
  } catch (const AttackError&) {
    throw;
  } catch (const std::exception& e) {
    throw AttackError(image_id, e.what());
  }
  return out;
}

std::vector<AttackOutcome> chained_attack(const Image& image, const std::string& image_id,
                                          const Oracle& oracle, const AttackConfig& config,
                                          std::size_t intermediate_class,
                                          bool require_intermediate) {
  std::vector<AttackOutcome> stages;
  stages.push_back(attack_image(image, image_id, oracle, config));
  const AttackOutcome& first = stages.front();
  if (first.original_class == intermediate_class) {
    throw std::invalid_argument("intermediate class equals the clean prediction");
  }
  if (!first.success) return stages;
  if (require_intermediate && first.predicted_class_after != intermediate_class) return stages;

  AttackConfig second = config;
  second.spec.rng_seed = derive_seed(config.spec.rng_seed, 1);
  const Image hop = adversarial_image(image, first);
  stages.push_back(attack_image(hop, image_id + "#2", oracle, second));
  return stages;
}

Image adversarial_image(const Image& original, const AttackOutcome& outcome) {
  return apply(original, outcome.genome);
}

}  // namespace pixelstorm
