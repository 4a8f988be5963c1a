#ifndef PIXELSTORM_IMAGE_HPP
#define PIXELSTORM_IMAGE_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace pixelstorm {

/// 8-bit RGB image, row-major with interleaved channels (y, x, c).
class Image {
 public:
  static constexpr int channels = 3;

  Image() = default;
  Image(int width, int height, std::uint8_t fill = 0);
  Image(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }

  std::uint8_t at(int x, int y, int c) const { return pixels_[offset(x, y, c)]; }
  std::uint8_t& at(int x, int y, int c) { return pixels_[offset(x, y, c)]; }

  const std::vector<std::uint8_t>& pixels() const { return pixels_; }

  bool same_shape(const Image& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }
  bool operator==(const Image&) const = default;

 private:
  std::size_t offset(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels + c;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Number of pixels (not channels) that differ between two same-shape images.
std::size_t count_changed_pixels(const Image& a, const Image& b);

struct LabeledImage {
  Image image;
  int label = -1;
};

using Dataset = std::vector<LabeledImage>;

}  // namespace pixelstorm

#endif  // PIXELSTORM_IMAGE_HPP
