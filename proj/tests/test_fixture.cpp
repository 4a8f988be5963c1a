#include <doctest.h>

#include "pixelstorm/fixture.hpp"
#include "pixelstorm/model_io.hpp"

using namespace pixelstorm;

TEST_CASE("fixture model has the expected structure") {
  const LayeredModel m = make_fixture_model();
  CHECK(m.input_shape == Shape{8, 8, 3});
  CHECK(m.num_classes() == 4);
  CHECK_NOTHROW(m.validate());
  CHECK(layer_kind(m.layers.front()) == "conv2d");
  CHECK(layer_kind(m.layers.back()) == "softmax");
}

TEST_CASE("quadrant images classify to their own quadrant") {
  const LayeredModel m = make_fixture_model();
  for (int q = 0; q < 4; ++q) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      const auto p = classify(m, make_fixture_image(q, seed));
      CAPTURE(q);
      CAPTURE(seed);
      REQUIRE(p.argmax() == static_cast<std::size_t>(q));
      REQUIRE(p[static_cast<std::size_t>(q)] > 0.5);
    }
  }
}

TEST_CASE("an all-black image is close to uniform") {
  const auto p = classify(make_fixture_model(), Image(8, 8, 0));
  for (double v : p.probs) CHECK(v == doctest::Approx(0.25).epsilon(0.1));
}

TEST_CASE("fixture construction is seeded") {
  CHECK(model_to_json(make_fixture_model(3)) == model_to_json(make_fixture_model(3)));
  CHECK(model_to_json(make_fixture_model(3)) != model_to_json(make_fixture_model(4)));
  CHECK(make_fixture_image(2, 9) == make_fixture_image(2, 9));
  const Dataset a = make_fixture_dataset(12, 5), b = make_fixture_dataset(12, 5);
  REQUIRE(a.size() == 12);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].label == static_cast<int>(i % 4));
    CHECK(a[i].image == b[i].image);
  }
}
