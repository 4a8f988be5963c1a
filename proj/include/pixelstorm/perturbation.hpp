#ifndef PIXELSTORM_PERTURBATION_HPP
#define PIXELSTORM_PERTURBATION_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pixelstorm/de_engine.hpp"
#include "pixelstorm/image.hpp"

namespace pixelstorm {

/// One pixel replacement. Values stay continuous inside the optimizer and are
/// rounded half-to-even when applied.
struct PixelEdit {
  double x = 0, y = 0;
  double r = 0, g = 0, b = 0;
  bool operator==(const PixelEdit&) const = default;
};

struct PerturbationGenome {
  static constexpr std::size_t fields_per_edit = 5;

  std::vector<PixelEdit> edits;

  /// Flat layout is [x, y, r, g, b] per edit; size must be a multiple of 5.
  static PerturbationGenome from_flat(std::span<const double> flat);
  std::vector<double> to_flat() const;

  bool operator==(const PerturbationGenome&) const = default;
};

struct Pixel {
  int x, y;
};

/// Integral target pixel of an edit, clamped into the image.
Pixel target_pixel(const PixelEdit& edit, int width, int height);

/// Replaces the targeted pixels; later edits win on duplicate coordinates.
Image apply(const Image& image, const PerturbationGenome& genome);

struct Distortion {
  double normalized = 0.0;   // mean |delta| / 256 over modified pixels and channels
  double per_channel = 0.0;  // same mean on the 0..255 scale
  std::size_t modified_pixels = 0;
};

/// Cost over the pixels the genome targets that actually changed.
Distortion distortion_cost(const Image& original, const Image& perturbed,
                           const PerturbationGenome& genome);
/// Same quantity, found by scanning every pixel.
Distortion distortion_cost(const Image& original, const Image& perturbed);

struct FitnessParams {
  double w_prob = 0.25;
  double w_cost = 0.75;
};

/// w_prob * P(true_class) + w_cost * cost. Lower is better.
double fitness(std::span<const double> probs, std::size_t true_class, double cost,
               const FitnessParams& params = {});

/// Coordinate slots [0, W-1] / [0, H-1], channel slots [0, 255].
de::Bounds genome_bounds(int width, int height, std::size_t d);

/// Coordinates uniform over the pixel grid, channels N(128, 127).
de::InitDistribution pixel_init(int width, int height, std::size_t d);

std::string genome_to_json(const PerturbationGenome& genome);
PerturbationGenome genome_from_json(const std::string& text);

}  // namespace pixelstorm

#endif  // PIXELSTORM_PERTURBATION_HPP
