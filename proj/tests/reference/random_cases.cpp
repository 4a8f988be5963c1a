#include "random_cases.hpp"

#include <random>
#include <string>

namespace pixelstorm::reference {

namespace {

int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::vector<double> values(std::size_t n, Rng& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

Tensor random_tensor(Shape shape, Rng& rng, double lo, double hi) {
  Tensor t(shape);
  std::uniform_real_distribution<double> u(lo, hi);
  for (auto& v : t.data) v = u(rng);
  return t;
}

Conv2D random_conv(int in_channels, Rng& rng) {
  Conv2D c;
  c.kernel = pick(rng, 1, 3);
  c.stride = pick(rng, 1, 2);
  c.depth = pick(rng, 1, 5);
  c.padding = pick(rng, 0, 1) ? Padding::same : Padding::valid;
  c.weights = values(static_cast<std::size_t>(c.kernel * c.kernel * in_channels * c.depth), rng, 0.5);
  c.bias = values(static_cast<std::size_t>(c.depth), rng, 0.2);
  return c;
}

Dense random_dense(int inputs, int units, Rng& rng) {
  Dense d;
  d.units = units;
  d.weights = values(static_cast<std::size_t>(inputs) * units, rng, 0.5);
  d.bias = values(static_cast<std::size_t>(units), rng, 0.2);
  return d;
}

Shape random_conv_input(const Conv2D& conv, int channels, Rng& rng) {
  return Shape{pick(rng, conv.kernel, 9), pick(rng, conv.kernel, 9), channels};
}

LayeredModel random_model(Rng& rng) {
  LayeredModel m;
  const int channels = 3;
  m.input_shape = Shape{6, 6, channels};
  const int classes = pick(rng, 2, 5);
  for (int i = 0; i < classes; ++i) m.classes.push_back("c" + std::to_string(i));

  Conv2D conv = random_conv(channels, rng);
  conv.stride = 1;
  conv.padding = Padding::same;
  const int depth = conv.depth;
  m.layers.push_back(conv);
  m.layers.push_back(ReLU{});
  const int pool = pick(rng, 2, 3);
  if (pick(rng, 0, 1)) m.layers.push_back(MaxPool{pool, pool});
  else m.layers.push_back(AvgPool{pool, pool});
  m.layers.push_back(Flatten{});
  const int side = 6 / pool;
  m.layers.push_back(random_dense(side * side * depth, classes, rng));
  m.layers.push_back(Softmax{});
  return m;
}

}  // namespace pixelstorm::reference
