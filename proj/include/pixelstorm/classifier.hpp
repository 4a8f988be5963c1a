#ifndef PIXELSTORM_CLASSIFIER_HPP
#define PIXELSTORM_CLASSIFIER_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pixelstorm/image.hpp"

namespace pixelstorm {

struct Shape {
  int height = 0;
  int width = 0;
  int channels = 0;

  std::size_t size() const { return static_cast<std::size_t>(height) * width * channels; }
  bool operator==(const Shape&) const = default;
};

std::string to_string(const Shape& s);

/// Dense activation tensor, HWC row-major.
struct Tensor {
  Shape shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(Shape s, double fill = 0.0) : shape(s), data(s.size(), fill) {}

  double& at(int y, int x, int c) {
    return data[(static_cast<std::size_t>(y) * shape.width + x) * shape.channels + c];
  }
  double at(int y, int x, int c) const {
    return data[(static_cast<std::size_t>(y) * shape.width + x) * shape.channels + c];
  }
};

enum class Padding { same, valid };

/// Weights are row-major (kh, kw, cin, cout).
struct Conv2D {
  int kernel = 1;
  int stride = 1;
  int depth = 1;
  Padding padding = Padding::valid;
  std::vector<double> weights;
  std::vector<double> bias;
};

struct ReLU {};

struct MaxPool {
  int kernel = 2;
  int stride = 2;
};

struct AvgPool {
  int kernel = 2;
  int stride = 2;
};

struct Flatten {};

/// Reads its input flattened (HWC). Weights are row-major (in, out).
struct Dense {
  int units = 1;
  std::vector<double> weights;
  std::vector<double> bias;
};

struct Softmax {};

using Layer = std::variant<Conv2D, ReLU, MaxPool, AvgPool, Flatten, Dense, Softmax>;

std::string layer_kind(const Layer& layer);

/// Structural error in a model; layer_index is -1 for model-level problems.
class ModelError : public std::runtime_error {
 public:
  ModelError(int layer_index, const std::string& message);
  int layer_index() const { return layer_index_; }

 private:
  int layer_index_;
};

struct LayeredModel {
  Shape input_shape;
  std::vector<std::string> classes;
  std::vector<Layer> layers;
  std::string metadata_json;  // optional free-form object, kept for round trips

  /// Output shape of every layer. Throws ModelError on the first incompatibility.
  std::vector<Shape> validate() const;
  std::size_t num_classes() const { return classes.size(); }
};

struct ProbabilityVector {
  std::vector<double> probs;

  std::size_t size() const { return probs.size(); }
  double operator[](std::size_t i) const { return probs[i]; }
  /// Ties go to the lowest index.
  std::size_t argmax() const;
  double max() const { return probs[argmax()]; }
};

/// Max-subtracted exponential normalization.
ProbabilityVector softmax(std::span<const double> logits);

/// Channels scaled to [0, 1].
Tensor image_to_tensor(const Image& image);

Tensor forward(const LayeredModel& model, Tensor input);

/// Throws std::invalid_argument when the image shape differs from the model input.
ProbabilityVector classify(const LayeredModel& model, const Image& image);

}  // namespace pixelstorm

#endif  // PIXELSTORM_CLASSIFIER_HPP
