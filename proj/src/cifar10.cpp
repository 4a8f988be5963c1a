#include "pixelstorm/cifar10.hpp"

#include <fstream>
#include <iterator>
#include <stdexcept>

namespace pixelstorm {

namespace {
constexpr int side = 32;
constexpr std::size_t plane = side * side;
}  // namespace

Dataset decode_cifar10(std::span<const std::uint8_t> bytes) {
  if (bytes.empty() || bytes.size() % cifar10_record_size != 0) {
    throw std::runtime_error("truncated record: " + std::to_string(bytes.size()) +
                             " bytes is not a multiple of 3073");
  }
  Dataset out;
  out.reserve(bytes.size() / cifar10_record_size);
  for (std::size_t off = 0; off < bytes.size(); off += cifar10_record_size) {
    const int label = bytes[off];
    if (label > 9) {
      throw std::runtime_error("record " + std::to_string(off / cifar10_record_size) +
                               " has label " + std::to_string(label) + " > 9");
    }
    const std::uint8_t* planes = bytes.data() + off + 1;
    std::vector<std::uint8_t> px(plane * 3);
    for (std::size_t i = 0; i < plane; ++i) {
      for (std::size_t c = 0; c < 3; ++c) px[i * 3 + c] = planes[c * plane + i];
    }
    out.push_back({Image(side, side, std::move(px)), label});
  }
  return out;
}

Dataset load_cifar10_batch(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open CIFAR-10 batch " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_cifar10(bytes);
}

std::vector<std::uint8_t> encode_cifar10(const Dataset& data) {
  std::vector<std::uint8_t> out;
  out.reserve(data.size() * cifar10_record_size);
  for (const auto& item : data) {
    if (item.image.width() != side || item.image.height() != side) {
      throw std::invalid_argument("CIFAR-10 records must be 32x32");
    }
    if (item.label < 0 || item.label > 9) throw std::invalid_argument("CIFAR-10 label out of range");
    out.push_back(static_cast<std::uint8_t>(item.label));
    const auto& px = item.image.pixels();
    for (std::size_t c = 0; c < 3; ++c) {
      for (std::size_t i = 0; i < plane; ++i) out.push_back(px[i * 3 + c]);
    }
  }
  return out;
}

const std::vector<std::string>& cifar10_class_names() {
  static const std::vector<std::string> names{"airplane", "automobile", "bird", "cat", "deer",
                                              "dog",      "frog",       "horse", "ship", "truck"};
  return names;
}

}  // namespace pixelstorm
