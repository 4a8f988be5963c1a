#ifndef PIXELSTORM_PNG_IO_HPP
#define PIXELSTORM_PNG_IO_HPP

#include <filesystem>

#include "pixelstorm/image.hpp"

namespace pixelstorm {

/// 8-bit RGB PNG.
void write_png(const std::filesystem::path& path, const Image& image);
/// Any PNG libpng can decode, converted to 8-bit RGB (alpha dropped).
Image read_png(const std::filesystem::path& path);

}  // namespace pixelstorm

#endif  // PIXELSTORM_PNG_IO_HPP
