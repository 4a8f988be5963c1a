#include "pixelstorm/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include <json.hpp>

namespace pixelstorm {

PerturbationGenome PerturbationGenome::from_flat(std::span<const double> flat) {
  if (flat.size() % fields_per_edit != 0) {
    throw std::invalid_argument("flat genome length " + std::to_string(flat.size()) +
                                " is not a multiple of 5");
  }
  PerturbationGenome g;
  g.edits.reserve(flat.size() / fields_per_edit);
  for (std::size_t i = 0; i < flat.size(); i += fields_per_edit) {
    g.edits.push_back({flat[i], flat[i + 1], flat[i + 2], flat[i + 3], flat[i + 4]});
  }
  return g;
}

std::vector<double> PerturbationGenome::to_flat() const {
  std::vector<double> flat;
  flat.reserve(edits.size() * fields_per_edit);
  for (const auto& e : edits) flat.insert(flat.end(), {e.x, e.y, e.r, e.g, e.b});
  return flat;
}

namespace {

// std::nearbyint honours the default round-to-nearest-even mode.
int round_clamped(double v, int lo, int hi) {
  if (std::isnan(v)) return lo;
  return static_cast<int>(std::clamp(std::nearbyint(v), static_cast<double>(lo),
                                     static_cast<double>(hi)));
}

}  // namespace

Pixel target_pixel(const PixelEdit& edit, int width, int height) {
  return {round_clamped(edit.x, 0, width - 1), round_clamped(edit.y, 0, height - 1)};
}

Image apply(const Image& image, const PerturbationGenome& genome) {
  Image out = image;
  for (const auto& e : genome.edits) {
    const Pixel p = target_pixel(e, image.width(), image.height());
    out.at(p.x, p.y, 0) = static_cast<std::uint8_t>(round_clamped(e.r, 0, 255));
    out.at(p.x, p.y, 1) = static_cast<std::uint8_t>(round_clamped(e.g, 0, 255));
    out.at(p.x, p.y, 2) = static_cast<std::uint8_t>(round_clamped(e.b, 0, 255));
  }
  return out;
}

namespace {

Distortion finish(long total_abs, std::size_t modified) {
  Distortion d;
  d.modified_pixels = modified;
  if (modified == 0) return d;
  const double denom = 3.0 * static_cast<double>(modified);
  d.per_channel = static_cast<double>(total_abs) / denom;
  d.normalized = static_cast<double>(total_abs) / (denom * 256.0);
  return d;
}

long pixel_delta(const Image& a, const Image& b, int x, int y) {
  long s = 0;
  for (int c = 0; c < Image::channels; ++c) s += std::labs(long{a.at(x, y, c)} - b.at(x, y, c));
  return s;
}

}  // namespace

Distortion distortion_cost(const Image& original, const Image& perturbed,
                           const PerturbationGenome& genome) {
  if (!original.same_shape(perturbed)) throw std::invalid_argument("image shapes differ");
  std::vector<Pixel> seen;
  seen.reserve(genome.edits.size());
  long total = 0;
  std::size_t modified = 0;
  for (const auto& e : genome.edits) {
    const Pixel p = target_pixel(e, original.width(), original.height());
    bool dup = std::any_of(seen.begin(), seen.end(),
                           [&](const Pixel& q) { return q.x == p.x && q.y == p.y; });
    if (dup) continue;
    seen.push_back(p);
    const long delta = pixel_delta(original, perturbed, p.x, p.y);
    if (delta > 0) {
      total += delta;
      ++modified;
    }
  }
  return finish(total, modified);
}

Distortion distortion_cost(const Image& original, const Image& perturbed) {
  if (!original.same_shape(perturbed)) throw std::invalid_argument("image shapes differ");
  long total = 0;
  std::size_t modified = 0;
  for (int y = 0; y < original.height(); ++y) {
    for (int x = 0; x < original.width(); ++x) {
      const long delta = pixel_delta(original, perturbed, x, y);
      if (delta > 0) {
        total += delta;
        ++modified;
      }
    }
  }
  return finish(total, modified);
}

double fitness(std::span<const double> probs, std::size_t true_class, double cost,
               const FitnessParams& params) {
  if (true_class >= probs.size()) {
    throw std::out_of_range("true class " + std::to_string(true_class) + " out of range for " +
                            std::to_string(probs.size()) + " classes");
  }
  return params.w_prob * probs[true_class] + params.w_cost * cost;
}

de::Bounds genome_bounds(int width, int height, std::size_t d) {
  de::Bounds b;
  for (std::size_t i = 0; i < d; ++i) {
    b.lower.insert(b.lower.end(), {0.0, 0.0, 0.0, 0.0, 0.0});
    b.upper.insert(b.upper.end(), {double(width - 1), double(height - 1), 255.0, 255.0, 255.0});
  }
  return b;
}

de::InitDistribution pixel_init(int width, int height, std::size_t d) {
  de::InitDistribution init;
  const de::GaussianSampler channel{128.0, 127.0};
  for (std::size_t i = 0; i < d; ++i) {
    init.samplers.emplace_back(de::UniformSampler{-0.5, width - 0.5});
    init.samplers.emplace_back(de::UniformSampler{-0.5, height - 0.5});
    init.samplers.insert(init.samplers.end(), 3, channel);
  }
  return init;
}

std::string genome_to_json(const PerturbationGenome& genome) {
  nlohmann::json edits = nlohmann::json::array();
  for (const auto& e : genome.edits) {
    edits.push_back({{"x", e.x}, {"y", e.y}, {"r", e.r}, {"g", e.g}, {"b", e.b}});
  }
  return nlohmann::json{{"edits", edits}}.dump();
}

PerturbationGenome genome_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  PerturbationGenome g;
  for (const auto& e : j.at("edits")) {
    g.edits.push_back({e.at("x").get<double>(), e.at("y").get<double>(), e.at("r").get<double>(),
                       e.at("g").get<double>(), e.at("b").get<double>()});
  }
  return g;
}

}  // namespace pixelstorm
