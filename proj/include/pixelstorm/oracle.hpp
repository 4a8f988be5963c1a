#ifndef PIXELSTORM_ORACLE_HPP
#define PIXELSTORM_ORACLE_HPP

#include <atomic>
#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "pixelstorm/classifier.hpp"

namespace pixelstorm {

struct OracleStats {
  std::uint64_t query_count = 0;
  std::chrono::nanoseconds wall_time{0};
};

/// Black-box classifier: image in, probability vector out. `query` is safe to
/// call concurrently; every call counts exactly once.
class Oracle {
 public:
  virtual ~Oracle() = default;

  ProbabilityVector query(const Image& image) const;
  virtual const std::vector<std::string>& class_names() const = 0;
  std::size_t num_classes() const { return class_names().size(); }

  OracleStats stats() const;
  void reset_stats();

 protected:
  virtual ProbabilityVector classify_image(const Image& image) const = 0;

 private:
  mutable std::atomic<std::uint64_t> queries_{0};
  mutable std::atomic<std::int64_t> nanos_{0};
};

class ModelOracle final : public Oracle {
 public:
  explicit ModelOracle(LayeredModel model) : model_(std::move(model)) { model_.validate(); }

  const LayeredModel& model() const { return model_; }
  const std::vector<std::string>& class_names() const override { return model_.classes; }

 protected:
  ProbabilityVector classify_image(const Image& image) const override {
    return classify(model_, image);
  }

 private:
  LayeredModel model_;
};

}  // namespace pixelstorm

#endif  // PIXELSTORM_ORACLE_HPP
