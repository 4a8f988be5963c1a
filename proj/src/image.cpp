#include "pixelstorm/image.hpp"

#include <string>

namespace pixelstorm {

Image::Image(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("image dimensions must be positive");
  pixels_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

Image::Image(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("image dimensions must be positive");
  const auto expected = static_cast<std::size_t>(width) * height * channels;
  if (pixels_.size() != expected) {
    throw std::invalid_argument("image buffer has " + std::to_string(pixels_.size()) +
                                " bytes, expected " + std::to_string(expected));
  }
}

std::size_t count_changed_pixels(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("image shapes differ");
  std::size_t changed = 0;
  const auto& pa = a.pixels();
  const auto& pb = b.pixels();
  for (std::size_t i = 0; i < pa.size(); i += Image::channels) {
    if (pa[i] != pb[i] || pa[i + 1] != pb[i + 1] || pa[i + 2] != pb[i + 2]) ++changed;
  }
  return changed;
}

}  // namespace pixelstorm
