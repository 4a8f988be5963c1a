#include "pixelstorm/fixture.hpp"

#include <random>

#include "pixelstorm/rng.hpp"

namespace pixelstorm {

namespace {

constexpr double quadrant_gain = 60.0;
constexpr double weight_jitter = 0.02;
constexpr int background_lo = 90;
constexpr int background_hi = 130;
constexpr int block_boost_lo = 30;
constexpr int block_boost_hi = 90;

}  // namespace

LayeredModel make_fixture_model(std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> jitter(-weight_jitter, weight_jitter);

  Conv2D luminance;
  luminance.kernel = 1;
  luminance.stride = 1;
  luminance.depth = 1;
  luminance.padding = Padding::valid;
  for (int c = 0; c < 3; ++c) luminance.weights.push_back(1.0 / 3.0 + jitter(rng) / 3.0);
  luminance.bias = {0.0};

  Dense score;
  score.units = fixture_classes;
  for (int q = 0; q < fixture_classes; ++q) {
    for (int o = 0; o < fixture_classes; ++o) {
      score.weights.push_back((q == o ? quadrant_gain : 0.0) + jitter(rng));
    }
  }
  for (int o = 0; o < fixture_classes; ++o) score.bias.push_back(jitter(rng));

  LayeredModel m;
  m.input_shape = Shape{fixture_side, fixture_side, 3};
  m.classes = {"top_left", "top_right", "bottom_left", "bottom_right"};
  m.layers = {luminance, ReLU{}, AvgPool{4, 4}, Flatten{}, score, Softmax{}};
  m.validate();
  return m;
}

Image make_fixture_image(int quadrant, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_int_distribution<int> background(background_lo, background_hi);
  std::uniform_int_distribution<int> boost(block_boost_lo, block_boost_hi);
  std::uniform_int_distribution<int> corner(0, 2);

  Image img(fixture_side, fixture_side);
  for (int y = 0; y < fixture_side; ++y) {
    for (int x = 0; x < fixture_side; ++x) {
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = static_cast<std::uint8_t>(background(rng));
    }
  }
  const int qx = (quadrant % 2) * 4;
  const int qy = (quadrant / 2) * 4;
  const int bx = qx + corner(rng);
  const int by = qy + corner(rng);
  const int add = boost(rng);
  for (int y = by; y < by + 2; ++y) {
    for (int x = bx; x < bx + 2; ++x) {
      for (int c = 0; c < 3; ++c) {
        img.at(x, y, c) = static_cast<std::uint8_t>(std::min(255, img.at(x, y, c) + add));
      }
    }
  }
  return img;
}

Dataset make_fixture_dataset(std::size_t count, std::uint64_t seed) {
  Dataset data;
  data.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const int label = static_cast<int>(i % fixture_classes);
    data.push_back({make_fixture_image(label, derive_seed(seed, i)), label});
  }
  return data;
}

}  // namespace pixelstorm
