#ifndef PIXELSTORM_FIXTURE_HPP
#define PIXELSTORM_FIXTURE_HPP

// Synthetic quadrant task: 8x8 RGB images on a noisy gray background where the
// class is the quadrant holding a brighter 2x2 block (0 top-left, 1 top-right,
// 2 bottom-left, 3 bottom-right). The fixture model measures mean brightness
// per quadrant (1x1 conv -> relu -> 4x4 average pool) and scores each
// quadrant with a dense layer, so it separates the classes by construction
// while leaving small margins a few pixel edits can overturn.

#include <cstdint>

#include "pixelstorm/classifier.hpp"
#include "pixelstorm/image.hpp"

namespace pixelstorm {

inline constexpr int fixture_side = 8;
inline constexpr int fixture_classes = 4;

LayeredModel make_fixture_model(std::uint64_t seed = 0);

/// One image whose bright block sits in `quadrant`.
Image make_fixture_image(int quadrant, std::uint64_t seed);

/// `count` images with labels cycling 0, 1, 2, 3.
Dataset make_fixture_dataset(std::size_t count, std::uint64_t seed = 0);

}  // namespace pixelstorm

#endif  // PIXELSTORM_FIXTURE_HPP
