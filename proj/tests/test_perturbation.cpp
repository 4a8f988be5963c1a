#include <doctest.h>

#include <random>

#include "pixelstorm/perturbation.hpp"

using namespace pixelstorm;

namespace {

Image noise_image(int w, int h, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_int_distribution<int> u(0, 255);
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h * 3);
  for (auto& p : px) p = static_cast<std::uint8_t>(u(rng));
  return Image(w, h, std::move(px));
}

PerturbationGenome random_genome(int w, int h, std::size_t d, Rng& rng) {
  std::uniform_real_distribution<double> x(0.0, w - 1.0), y(0.0, h - 1.0), c(0.0, 255.0);
  PerturbationGenome g;
  for (std::size_t i = 0; i < d; ++i) g.edits.push_back({x(rng), y(rng), c(rng), c(rng), c(rng)});
  return g;
}

}  // namespace

TEST_CASE("identity edit leaves the image unchanged") {
  const Image img = noise_image(32, 32, 1);
  PerturbationGenome g;
  g.edits.push_back({4, 9, double(img.at(4, 9, 0)), double(img.at(4, 9, 1)), double(img.at(4, 9, 2))});
  CHECK(apply(img, g) == img);
  CHECK(distortion_cost(img, apply(img, g), g).normalized == 0.0);
}

TEST_CASE("one edit changes exactly one pixel") {
  const Image img(32, 32, 10);
  PerturbationGenome g;
  g.edits.push_back({0, 0, 200, 200, 200});
  const Image out = apply(img, g);
  CHECK(count_changed_pixels(img, out) == 1);
  CHECK(out.at(0, 0, 0) == 200);
  CHECK(out.at(1, 0, 0) == 10);
}

TEST_CASE("duplicate coordinates collapse and the later edit wins") {
  const Image img(32, 32, 0);
  PerturbationGenome g;
  g.edits = {{3, 3, 10, 10, 10}, {7, 1, 50, 50, 50}, {3, 3, 90, 91, 92}, {20, 20, 1, 1, 1}, {30, 2, 5, 5, 5}};
  const Image out = apply(img, g);
  CHECK(count_changed_pixels(img, out) == 4);
  CHECK(out.at(3, 3, 0) == 90);
  CHECK(out.at(3, 3, 2) == 92);
  CHECK(distortion_cost(img, out, g).modified_pixels == 4);
}

TEST_CASE("coordinates round half to even and clamp into the image") {
  PixelEdit e{2.5, 3.5, 0, 0, 0};
  CHECK(target_pixel(e, 32, 32).x == 2);
  CHECK(target_pixel(e, 32, 32).y == 4);
  e.x = -0.4;
  e.y = 40.0;
  CHECK(target_pixel(e, 32, 32).x == 0);
  CHECK(target_pixel(e, 32, 32).y == 31);

  const Image img(4, 4, 0);
  PerturbationGenome g;
  g.edits.push_back({0, 0, 100.5, 101.5, 300.0});
  const Image out = apply(img, g);
  CHECK(out.at(0, 0, 0) == 100);
  CHECK(out.at(0, 0, 1) == 102);
  CHECK(out.at(0, 0, 2) == 255);
}

TEST_CASE("L0 bound and idempotence over random genomes") {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const Image img = noise_image(16, 12, static_cast<std::uint64_t>(t));
    const std::size_t d = 1 + static_cast<std::size_t>(t % 7);
    const PerturbationGenome g = random_genome(16, 12, d, rng);
    const Image once = apply(img, g);
    REQUIRE(count_changed_pixels(img, once) <= d);
    REQUIRE(apply(once, g) == once);
    const Distortion cost = distortion_cost(img, once, g);
    REQUIRE(cost.normalized >= 0.0);
    REQUIRE((cost.normalized == 0.0) == (once == img));
    REQUIRE(cost.modified_pixels == count_changed_pixels(img, once));
    const Distortion scanned = distortion_cost(img, once);
    REQUIRE(scanned.normalized == doctest::Approx(cost.normalized));
  }
}

TEST_CASE("distortion cost arithmetic") {
  const Image img(8, 8, 100);
  CHECK(distortion_cost(img, img).normalized == 0.0);

  PerturbationGenome g;
  g.edits.push_back({1, 1, 120, 120, 120});
  const Distortion c = distortion_cost(img, apply(img, g), g);
  CHECK(c.normalized == doctest::Approx(20.0 / 256.0));
  CHECK(c.per_channel == doctest::Approx(20.0));
  CHECK(c.modified_pixels == 1);

  // One pixel moved by 30 per channel and one by 10: mean 20 per channel.
  g.edits.push_back({5, 2, 90, 90, 90});
  g.edits.front() = {1, 1, 130, 130, 130};
  const Distortion two = distortion_cost(img, apply(img, g), g);
  CHECK(two.per_channel == doctest::Approx(20.0));
  CHECK(two.modified_pixels == 2);

  CHECK_THROWS(distortion_cost(Image(8, 8), Image(4, 4)));
}

TEST_CASE("reported distortion of five edits near 20.44 per channel") {
  // Channel deltas sum to 307 over 15 channels.
  const Image img(32, 32, 100);
  PerturbationGenome g;
  g.edits = {{0, 0, 118, 118, 118},
             {1, 0, 122, 122, 122},
             {2, 0, 120, 120, 120},
             {3, 0, 121, 121, 121},
             {4, 0, 121, 121, 121.6}};
  const Distortion c = distortion_cost(img, apply(img, g), g);
  CHECK(c.modified_pixels == 5);
  CHECK(c.per_channel == doctest::Approx(307.0 / 15.0));
  CHECK(c.per_channel == doctest::Approx(20.44).epsilon(0.002));
}

TEST_CASE("fitness arithmetic") {
  const std::vector<double> half{0.5, 0.5};
  CHECK(fitness(half, 0, 0.1) == doctest::Approx(0.2));
  CHECK(fitness(std::vector<double>{0.0, 1.0}, 0, 0.0) == 0.0);
  CHECK(fitness(std::vector<double>{1.0, 0.0}, 0, 0.0) == 0.25);
  CHECK(fitness(half, 0, 0.2) > fitness(half, 0, 0.1));
  CHECK(fitness(std::vector<double>{0.6, 0.4}, 0, 0.1) > fitness(half, 0, 0.1));
  CHECK_THROWS_AS(fitness(half, 2, 0.1), std::out_of_range);
}

TEST_CASE("genome bounds follow the image size") {
  const auto b32 = genome_bounds(32, 32, 5);
  REQUIRE(b32.size() == 25);
  CHECK(b32.lower[0] == 0.0);
  CHECK(b32.upper[0] == 31.0);
  CHECK(b32.upper[1] == 31.0);
  CHECK(b32.upper[2] == 255.0);
  CHECK(b32.upper[4] == 255.0);
  const auto b227 = genome_bounds(227, 227, 5);
  CHECK(b227.upper[0] == 226.0);
  CHECK(b227.upper[1] == 226.0);
  CHECK(genome_bounds(32, 32, 1).size() == 5);
  CHECK(genome_bounds(40, 20, 2).upper[5] == 39.0);
  CHECK(genome_bounds(40, 20, 2).upper[6] == 19.0);
}

TEST_CASE("flat encoding round trip") {
  Rng rng(3);
  std::uniform_real_distribution<double> u(-10, 300);
  std::vector<double> flat(25);
  for (auto& v : flat) v = u(rng);
  CHECK(PerturbationGenome::from_flat(flat).to_flat() == flat);
  CHECK(PerturbationGenome::from_flat(flat).edits[1].x == flat[5]);
  CHECK(PerturbationGenome::from_flat(flat).edits[1].b == flat[9]);
  CHECK_THROWS_AS(PerturbationGenome::from_flat(std::vector<double>(7)), std::invalid_argument);
}

TEST_CASE("genome JSON round trip") {
  Rng rng(4);
  const PerturbationGenome g = random_genome(32, 32, 5, rng);
  CHECK(genome_from_json(genome_to_json(g)) == g);
  CHECK(genome_to_json(g).find("\"edits\"") != std::string::npos);
}
