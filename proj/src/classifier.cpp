#include "pixelstorm/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "pixelstorm/kernels.hpp"

namespace pixelstorm {

std::string to_string(const Shape& s) {
  return "[" + std::to_string(s.height) + "," + std::to_string(s.width) + "," +
         std::to_string(s.channels) + "]";
}

std::string layer_kind(const Layer& layer) {
  struct Kind {
    std::string operator()(const Conv2D&) const { return "conv2d"; }
    std::string operator()(const ReLU&) const { return "relu"; }
    std::string operator()(const MaxPool&) const { return "maxpool"; }
    std::string operator()(const AvgPool&) const { return "avgpool"; }
    std::string operator()(const Flatten&) const { return "flatten"; }
    std::string operator()(const Dense&) const { return "dense"; }
    std::string operator()(const Softmax&) const { return "softmax"; }
  };
  return std::visit(Kind{}, layer);
}

ModelError::ModelError(int layer_index, const std::string& message)
    : std::runtime_error(layer_index < 0
                             ? message
                             : "layer " + std::to_string(layer_index) + ": " + message),
      layer_index_(layer_index) {}

namespace {

std::string count_mismatch(const char* what, std::size_t got, std::size_t expected) {
  return std::string(what) + " has " + std::to_string(got) + " values, expected " +
         std::to_string(expected);
}

Shape layer_output(const Layer& layer, const Shape& in, int index) {
  try {
    return std::visit(
        [&](const auto& l) -> Shape {
          using T = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<T, Conv2D>) {
            const Shape out = kernels::conv_output_shape(in, l);
            const std::size_t expected =
                static_cast<std::size_t>(l.kernel) * l.kernel * in.channels * l.depth;
            if (l.weights.size() != expected) {
              throw ModelError(index, count_mismatch("conv2d weights", l.weights.size(), expected));
            }
            if (l.bias.size() != static_cast<std::size_t>(l.depth)) {
              throw ModelError(index, count_mismatch("conv2d bias", l.bias.size(), l.depth));
            }
            return out;
          } else if constexpr (std::is_same_v<T, MaxPool> || std::is_same_v<T, AvgPool>) {
            return kernels::pool_output_shape(in, l.kernel, l.stride);
          } else if constexpr (std::is_same_v<T, Flatten>) {
            return Shape{1, 1, static_cast<int>(in.size())};
          } else if constexpr (std::is_same_v<T, Dense>) {
            if (l.units <= 0) throw ModelError(index, "dense units must be positive");
            const std::size_t expected = in.size() * static_cast<std::size_t>(l.units);
            if (l.weights.size() != expected) {
              throw ModelError(index, count_mismatch("dense weights", l.weights.size(), expected));
            }
            if (l.bias.size() != static_cast<std::size_t>(l.units)) {
              throw ModelError(index, count_mismatch("dense bias", l.bias.size(), l.units));
            }
            return Shape{1, 1, l.units};
          } else {
            return in;
          }
        },
        layer);
  } catch (const ModelError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ModelError(index, e.what());
  }
}

}  // namespace

std::vector<Shape> LayeredModel::validate() const {
  if (input_shape.height <= 0 || input_shape.width <= 0 || input_shape.channels <= 0) {
    throw ModelError(-1, "input shape must be positive, got " + to_string(input_shape));
  }
  if (layers.empty()) throw ModelError(-1, "model has no layers");
  if (!std::holds_alternative<Softmax>(layers.back())) {
    throw ModelError(static_cast<int>(layers.size()) - 1, "final layer must be softmax");
  }
  std::vector<Shape> shapes;
  shapes.reserve(layers.size());
  Shape current = input_shape;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    if (std::holds_alternative<Softmax>(layers[i]) && i + 1 != layers.size()) {
      throw ModelError(static_cast<int>(i), "softmax must be the final layer");
    }
    current = layer_output(layers[i], current, static_cast<int>(i));
    shapes.push_back(current);
  }
  if (current.size() != classes.size()) {
    throw ModelError(static_cast<int>(layers.size()) - 1,
                     "output has " + std::to_string(current.size()) + " values but " +
                         std::to_string(classes.size()) + " classes are declared");
  }
  return shapes;
}

std::size_t ProbabilityVector::argmax() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i) {
    if (probs[i] > probs[best]) best = i;
  }
  return best;
}

ProbabilityVector softmax(std::span<const double> logits) {
  ProbabilityVector out;
  if (logits.empty()) return out;
  const double top = *std::max_element(logits.begin(), logits.end());
  out.probs.resize(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out.probs[i] = std::exp(logits[i] - top);
    sum += out.probs[i];
  }
  for (double& p : out.probs) p /= sum;
  return out;
}

Tensor image_to_tensor(const Image& image) {
  Tensor t(Shape{image.height(), image.width(), Image::channels});
  const auto& px = image.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) t.data[i] = px[i] / 255.0;
  return t;
}

Tensor forward(const LayeredModel& model, Tensor x) {
  for (const Layer& layer : model.layers) {
    x = std::visit(
        [&x](const auto& l) -> Tensor {
          using T = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<T, Conv2D>) {
            return kernels::conv2d(x, l);
          } else if constexpr (std::is_same_v<T, ReLU>) {
            kernels::relu_inplace(x);
            return std::move(x);
          } else if constexpr (std::is_same_v<T, MaxPool>) {
            return kernels::max_pool(x, l);
          } else if constexpr (std::is_same_v<T, AvgPool>) {
            return kernels::avg_pool(x, l);
          } else if constexpr (std::is_same_v<T, Flatten>) {
            x.shape = Shape{1, 1, static_cast<int>(x.data.size())};
            return std::move(x);
          } else if constexpr (std::is_same_v<T, Dense>) {
            return kernels::dense(x, l);
          } else {
            Tensor out(Shape{1, 1, static_cast<int>(x.data.size())});
            out.data = softmax(x.data).probs;
            return out;
          }
        },
        layer);
  }
  return x;
}

ProbabilityVector classify(const LayeredModel& model, const Image& image) {
  const Shape got{image.height(), image.width(), Image::channels};
  if (!(got == model.input_shape)) {
    throw std::invalid_argument("image shape " + to_string(got) + " does not match model input " +
                                to_string(model.input_shape));
  }
  Tensor out = forward(model, image_to_tensor(image));
  return ProbabilityVector{std::move(out.data)};
}

}  // namespace pixelstorm
