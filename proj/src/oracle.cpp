#include "pixelstorm/oracle.hpp"

namespace pixelstorm {

ProbabilityVector Oracle::query(const Image& image) const {
  const auto start = std::chrono::steady_clock::now();
  queries_.fetch_add(1, std::memory_order_relaxed);
  ProbabilityVector out = classify_image(image);
  const auto elapsed = std::chrono::steady_clock::now() - start;
  nanos_.fetch_add(std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed).count(),
                   std::memory_order_relaxed);
  return out;
}

OracleStats Oracle::stats() const {
  return {queries_.load(), std::chrono::nanoseconds(nanos_.load())};
}

void Oracle::reset_stats() {
  queries_.store(0);
  nanos_.store(0);
}

}  // namespace pixelstorm
