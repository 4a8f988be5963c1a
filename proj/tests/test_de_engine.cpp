#include <doctest.h>

#include <atomic>
#include <cmath>
#include <limits>
#include <set>
#include <json.hpp>

#include "pixelstorm/benchmark_functions.hpp"
#include "pixelstorm/de_engine.hpp"
#include "pixelstorm/perturbation.hpp"

using namespace pixelstorm;
using namespace pixelstorm::de;

namespace {

Problem sphere_problem(std::size_t dims) {
  return Problem::over_box(Bounds::uniform(dims, -5.0, 5.0),
                           [](std::span<const double> v) { return Evaluation(sphere(v)); });
}

VariantSpec small_spec(std::uint64_t seed) {
  VariantSpec s;
  s.scale_f = 0.5;
  s.cross_pos = 0.1;
  s.cross_rgb = 0.1;
  s.pop_size = 20;
  s.max_generations = 15;
  s.early_stop_fitness = -std::numeric_limits<double>::infinity();
  s.rng_seed = seed;
  return s;
}

Population four_of(std::vector<Genome> g) {
  Population p;
  p.individuals = std::move(g);
  p.fitnesses.assign(p.individuals.size(), 0.0);
  p.aux.resize(p.individuals.size());
  p.goal.assign(p.individuals.size(), false);
  return p;
}

}  // namespace

TEST_CASE("variant names and parsing") {
  VariantSpec s = parse_variant("0.5/0.1/0.9");
  CHECK(s.scale_f == 0.5);
  CHECK(s.cross_pos == 0.1);
  CHECK(s.cross_rgb == 0.9);
  CHECK(s.name() == "0.5/0.1/0.9");
  CHECK_THROWS_AS(parse_variant("0.5/0.1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_variant("0.5/0.1/0.1/0.1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_variant("0/0.1/0.1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_variant("0.5/1.5/0.1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_variant("a/b/c"), std::invalid_argument);
}

TEST_CASE("initial population for a 32x32 attack genome") {
  VariantSpec spec;
  spec.rng_seed = 7;
  Problem p;
  p.bounds = genome_bounds(32, 32, 5);
  p.layout = FieldLayout::pixel_records(25);
  p.init = pixel_init(32, 32, 5);
  p.objective = [](std::span<const double>) { return Evaluation(0.0); };
  Rng rng(spec.rng_seed);
  const Population pop = initialize_population(spec, p, rng);
  REQUIRE(pop.size() == 400);
  for (const Genome& g : pop.individuals) {
    REQUIRE(g.size() == 25);
    for (std::size_t k = 0; k < 25; ++k) {
      const double hi = k % 5 < 2 ? 31.0 : 255.0;
      REQUIRE(g[k] >= 0.0);
      REQUIRE(g[k] <= hi);
    }
  }

  Rng again(spec.rng_seed);
  CHECK(initialize_population(spec, p, again).individuals == pop.individuals);
}

TEST_CASE("population of three is rejected") {
  VariantSpec spec = small_spec(1);
  spec.pop_size = 3;
  Rng rng(1);
  CHECK_THROWS_WITH_AS(initialize_population(spec, sphere_problem(3), rng),
                       doctest::Contains("population too small"), std::invalid_argument);
  CHECK_THROWS_AS(evolve(spec, sphere_problem(3)), std::invalid_argument);
}

TEST_CASE("mutation arithmetic on hand-built partners") {
  const Genome r1{10, 10, 100, 100, 100};
  const Genome r2{12, 12, 120, 120, 120};
  const Genome r3{8, 8, 80, 80, 80};
  const Population pop = four_of({Genome(5, 0.0), r1, r2, r3});
  const Bounds bounds = genome_bounds(32, 32, 1);
  VariantSpec spec;
  spec.scale_f = 0.5;

  bool seen = false;
  for (std::uint64_t seed = 0; seed < 200 && !seen; ++seed) {
    Rng rng(seed);
    MutationPartners mp{};
    const Genome m = mutate(pop, 0, spec, bounds, rng, &mp);
    if (mp.r1 == 1 && mp.r2 == 2 && mp.r3 == 3) {
      seen = true;
      CHECK(m == Genome{12, 12, 120, 120, 120});
    }
  }
  CHECK(seen);
}

TEST_CASE("mutation matches the difference form for any partner draw") {
  Rng init(3);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  std::vector<Genome> g(10, Genome(6));
  for (auto& v : g)
    for (auto& x : v) x = u(init);
  const Population pop = four_of(g);
  const Bounds bounds = Bounds::uniform(6, -100.0, 100.0);
  VariantSpec spec;
  spec.scale_f = 0.7;
  Rng rng(9);
  for (int t = 0; t < 100; ++t) {
    MutationPartners mp{};
    const Genome m = mutate(pop, t % 10, spec, bounds, rng, &mp);
    for (std::size_t k = 0; k < 6; ++k) {
      const double expect = g[mp.r1][k] + 0.7 * (g[mp.r2][k] - g[mp.r3][k]);
      REQUIRE(m[k] == doctest::Approx(expect).epsilon(1e-14));
    }
  }
}

TEST_CASE("mutation partners are always distinct from each other and the target") {
  const Population pop = four_of(std::vector<Genome>(4, Genome(3, 1.0)));
  const Bounds bounds = Bounds::uniform(3, 0.0, 2.0);
  VariantSpec spec;
  Rng rng(42);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t i = static_cast<std::size_t>(t % 4);
    MutationPartners mp{};
    mutate(pop, i, spec, bounds, rng, &mp);
    const std::set<std::size_t> all{i, mp.r1, mp.r2, mp.r3};
    REQUIRE(all.size() == 4);
  }
}

TEST_CASE("zero scale returns the first partner and overflow is clamped") {
  const Population pop = four_of({Genome{0, 0, 0}, Genome{1, 2, 250}, Genome{3, 4, 255}, Genome{5, 6, 0}});
  Rng rng(5);
  VariantSpec zero;
  zero.scale_f = 0.0;
  MutationPartners mp{};
  const Bounds wide = Bounds::uniform(3, -1000.0, 1000.0);
  const Genome m = mutate(pop, 0, zero, wide, rng, &mp);
  CHECK(m == pop.individuals[mp.r1]);

  VariantSpec one;
  one.scale_f = 1.0;
  Bounds channel = Bounds::uniform(3, 0.0, 255.0);
  for (int t = 0; t < 50; ++t) {
    const Genome c = mutate(pop, 0, one, channel, rng, &mp);
    const double raw = pop.individuals[mp.r1][2] + (pop.individuals[mp.r2][2] - pop.individuals[mp.r3][2]);
    if (raw > 255.0) CHECK(c[2] == 255.0);
    REQUIRE(channel.contains(c));
  }
}

TEST_CASE("dithered scale stays within its range") {
  const Population pop = four_of({Genome{0.0}, Genome{0.0}, Genome{1.0}, Genome{0.0}});
  VariantSpec spec;
  spec.f_dither = std::make_pair(0.2, 0.4);
  const Bounds b = Bounds::uniform(1, -10.0, 10.0);
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    MutationPartners mp{};
    const Genome m = mutate(pop, 0, spec, b, rng, &mp);
    const double diff = pop.individuals[mp.r2][0] - pop.individuals[mp.r3][0];
    if (diff != 0.0) {
      const double f = (m[0] - pop.individuals[mp.r1][0]) / diff;
      REQUIRE(f >= 0.2 - 1e-12);
      REQUIRE(f <= 0.4 + 1e-12);
    }
  }
}

TEST_CASE("crossover field groups") {
  const FieldLayout layout = FieldLayout::pixel_records(25);
  Genome parent(25), mutant(25);
  for (std::size_t k = 0; k < 25; ++k) {
    parent[k] = static_cast<double>(k);
    mutant[k] = 1000.0 + static_cast<double>(k);
  }
  Rng rng(1);
  VariantSpec spec;

  spec.cross_pos = 0.0;
  spec.cross_rgb = 0.0;
  for (int t = 0; t < 100; ++t) REQUIRE(crossover(parent, mutant, layout, spec, rng) == mutant);

  spec.cross_pos = 1.0;
  spec.cross_rgb = 1.0;
  for (int t = 0; t < 100; ++t) REQUIRE(crossover(parent, mutant, layout, spec, rng) == parent);

  spec.cross_pos = 1.0;
  spec.cross_rgb = 0.0;
  const Genome child = crossover(parent, mutant, layout, spec, rng);
  int from_parent = 0, from_mutant = 0;
  for (std::size_t k = 0; k < 25; ++k) {
    if (k % 5 < 2) {
      CHECK(child[k] == parent[k]);
      ++from_parent;
    } else {
      CHECK(child[k] == mutant[k]);
      ++from_mutant;
    }
  }
  CHECK(from_parent == 10);
  CHECK(from_mutant == 15);

  CHECK_THROWS_AS(crossover(Genome(3), Genome(4), FieldLayout::pixel_records(3), spec, rng),
                  std::invalid_argument);
}

TEST_CASE("crossover is one trial per group per genome") {
  const FieldLayout layout = FieldLayout::pixel_records(25);
  const Genome parent(25, 0.0), mutant(25, 1.0);
  VariantSpec spec;
  spec.cross_pos = 0.5;
  spec.cross_rgb = 0.5;
  Rng rng(77);
  int pos_copied = 0;
  const int trials = 4000;
  for (int t = 0; t < trials; ++t) {
    const Genome c = crossover(parent, mutant, layout, spec, rng);
    std::set<double> pos, rgb;
    for (std::size_t k = 0; k < 25; ++k) (k % 5 < 2 ? pos : rgb).insert(c[k]);
    REQUIRE(pos.size() == 1);
    REQUIRE(rgb.size() == 1);
    if (*pos.begin() == 0.0) ++pos_copied;
  }
  // Binomial(4000, 0.5): five sigma is about 158.
  CHECK(std::abs(pos_copied - trials / 2) < 160);
}

TEST_CASE("one-to-one selection") {
  CHECK(select(0.5, 0.3) == Winner::child);
  CHECK(select(0.3, 0.3) == Winner::child);
  CHECK(select(0.3, 0.5) == Winner::parent);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK(select(0.3, nan) == Winner::parent);
  CHECK(select(nan, 0.3) == Winner::child);
}

TEST_CASE("full budget is 40400 evaluations") {
  VariantSpec spec;
  spec.early_stop_fitness = -std::numeric_limits<double>::infinity();
  spec.rng_seed = 3;
  std::atomic<std::size_t> calls{0};
  Problem p = Problem::over_box(Bounds::uniform(2, 0.0, 1.0), [&calls](std::span<const double> v) {
    ++calls;
    return Evaluation(v[0]);
  });
  const EvolutionResult r = evolve(spec, p);
  CHECK(r.trace.total_evaluations == 40400);
  CHECK(r.trace.post_init_evaluations == 40000);
  CHECK(calls.load() == 40400);
  CHECK(r.trace.generations_run == 100);
  CHECK(r.trace.best_fitness_per_generation.size() == 101);
  CHECK_FALSE(r.trace.stopped_early);
  CHECK(r.trace.reason == StopReason::max_generations);
}

TEST_CASE("infinite threshold stops after the initial population") {
  VariantSpec spec = small_spec(2);
  spec.early_stop_fitness = std::numeric_limits<double>::infinity();
  const EvolutionResult r = evolve(spec, sphere_problem(4));
  CHECK(r.trace.generations_run == 0);
  CHECK(r.trace.total_evaluations == spec.pop_size);
  CHECK(r.trace.stopped_early);
  CHECK(r.trace.reason == StopReason::fitness_threshold);
}

TEST_CASE("stop condition fires at a generation boundary") {
  VariantSpec spec = small_spec(4);
  EvolveOptions opt;
  opt.stop = [](const GenerationStatus& s) { return s.generation == 3; };
  const EvolutionResult r = evolve(spec, sphere_problem(4), opt);
  CHECK(r.trace.generations_run == 3);
  CHECK(r.trace.total_evaluations == spec.pop_size * 4);
  CHECK(r.trace.reason == StopReason::stop_condition);
}

TEST_CASE("per-index elitism, bounds closure and constant population size") {
  VariantSpec spec = small_spec(11);
  EvolveOptions opt;
  std::vector<double> previous;
  std::vector<Genome> previous_genomes;
  const Problem p = sphere_problem(5);
  opt.stop = [&](const GenerationStatus& s) {
    REQUIRE(s.population.size() == spec.pop_size);
    for (const Genome& g : s.population.individuals) REQUIRE(p.bounds.contains(g));
    if (!previous.empty()) {
      for (std::size_t i = 0; i < previous.size(); ++i) REQUIRE(s.population.fitnesses[i] <= previous[i]);
    }
    previous = s.population.fitnesses;
    return false;
  };
  const EvolutionResult r = evolve(spec, p, opt);
  const auto& trace = r.trace.best_fitness_per_generation;
  for (std::size_t g = 1; g < trace.size(); ++g) CHECK(trace[g] <= trace[g - 1]);
}

TEST_CASE("identical seeds give identical runs, serial or parallel") {
  const VariantSpec spec = small_spec(21);
  const Problem p = sphere_problem(6);
  const EvolutionResult a = evolve(spec, p);
  const EvolutionResult b = evolve(spec, p);
  EvolveOptions par;
  par.workers = 4;
  const EvolutionResult c = evolve(spec, p, par);
  CHECK(a.trace.best_fitness_per_generation == b.trace.best_fitness_per_generation);
  CHECK(a.population.individuals == b.population.individuals);
  CHECK(a.trace.best_fitness_per_generation == c.trace.best_fitness_per_generation);
  CHECK(a.population.individuals == c.population.individuals);

  VariantSpec other = spec;
  other.rng_seed = 22;
  CHECK(evolve(other, p).population.individuals != a.population.individuals);
}

TEST_CASE("sphere converges with the 0.5/0.1/0.1 variant") {
  VariantSpec spec = parse_variant("0.5/0.1/0.1");
  spec.pop_size = 50;
  spec.max_generations = 100;
  spec.early_stop_fitness = -std::numeric_limits<double>::infinity();
  spec.rng_seed = 1;
  const EvolutionResult r = evolve(spec, sphere_problem(10));
  CHECK(r.population.best_fitness() < 1e-2);
}

TEST_CASE("objective failures carry generation and index") {
  VariantSpec spec = small_spec(5);
  std::atomic<int> calls{0};
  Problem p = Problem::over_box(Bounds::uniform(2, 0.0, 1.0), [&](std::span<const double> v) {
    if (++calls == spec.pop_size + 3) throw std::runtime_error("boom");
    return Evaluation(v[0]);
  });
  try {
    evolve(spec, p);
    FAIL("expected an EvaluationError");
  } catch (const EvaluationError& e) {
    CHECK(e.generation() == 1);
    CHECK(e.index() == 2);
    CHECK(std::string(e.what()).find("boom") != std::string::npos);
  }
}

TEST_CASE("goal candidates are tracked across the run") {
  VariantSpec spec = small_spec(6);
  Problem p = Problem::over_box(Bounds::uniform(2, -1.0, 1.0), [](std::span<const double> v) {
    return Evaluation(v[0] * v[0] + v[1] * v[1], v[0] > 0.5, {v[0]});
  });
  const EvolutionResult r = evolve(spec, p);
  REQUIRE(r.best_goal.has_value());
  CHECK(r.best_goal->genome[0] > 0.5);
  CHECK(r.best_goal->eval.aux == std::vector<double>{r.best_goal->genome[0]});
}

TEST_CASE("trace serializes to JSON") {
  const VariantSpec spec = small_spec(8);
  const EvolutionResult r = evolve(spec, sphere_problem(3));
  const auto j = nlohmann::json::parse(trace_to_json(r.trace, spec));
  CHECK(j["evaluations"].get<std::size_t>() == r.trace.total_evaluations);
  CHECK(j["best_fitness"].size() == r.trace.best_fitness_per_generation.size());
  CHECK(j["variant"] == "0.5/0.1/0.1");
  CHECK(j["seed"].get<std::uint64_t>() == 8);
}
