#ifndef PIXELSTORM_CIFAR10_HPP
#define PIXELSTORM_CIFAR10_HPP

// CIFAR-10 binary batches: records of 1 label byte followed by 3072 bytes,
// the 32x32 red plane, then green, then blue, each row-major.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "pixelstorm/image.hpp"

namespace pixelstorm {

inline constexpr std::size_t cifar10_record_size = 3073;

Dataset decode_cifar10(std::span<const std::uint8_t> bytes);
Dataset load_cifar10_batch(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_cifar10(const Dataset& data);

const std::vector<std::string>& cifar10_class_names();

}  // namespace pixelstorm

#endif  // PIXELSTORM_CIFAR10_HPP
