#ifndef PIXELSTORM_ATTACK_HPP
#define PIXELSTORM_ATTACK_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "pixelstorm/de_engine.hpp"
#include "pixelstorm/image.hpp"
#include "pixelstorm/oracle.hpp"
#include "pixelstorm/perturbation.hpp"

namespace pixelstorm {

struct AttackConfig {
  de::VariantSpec spec;
  std::size_t d = 5;
  FitnessParams fitness;
  /// Stop once any evaluated candidate moves the argmax off the original class.
  bool stop_on_flip = true;
  /// Parallel workers for child evaluation inside one attack.
  std::size_t workers = 1;
};

struct AttackOutcome {
  std::string image_id;
  int dataset_label = -1;
  std::size_t original_class = 0;  // the model's clean prediction
  std::size_t predicted_class_after = 0;
  bool success = false;
  /// Top-class probability after the attack (the original class when it failed).
  double confidence = 0.0;
  double reported_distortion = 0.0;  // mean |delta| per channel, 0..255
  double normalized_cost = 0.0;
  std::size_t modified_pixels = 0;
  std::size_t evaluations_used = 0;
  std::size_t generations_used = 0;
  std::string stop_reason;
  std::uint64_t seed = 0;
  PerturbationGenome genome;
  std::vector<double> clean_probabilities;
  std::vector<double> probabilities_after;
  std::string error;  // non-empty when the attack could not run
};

class AttackError : public std::runtime_error {
 public:
  AttackError(std::string image_id, const std::string& what)
      : std::runtime_error("attack on image " + image_id + " failed: " + what),
        image_id_(std::move(image_id)) {}
  const std::string& image_id() const { return image_id_; }

 private:
  std::string image_id_;
};

/// Non-targeted few-pixel attack against the oracle's own clean prediction.
/// Uses one oracle query for the clean prediction plus one per engine evaluation.
AttackOutcome attack_image(const Image& image, const std::string& image_id, const Oracle& oracle,
                           const AttackConfig& config);

/// Attacks, then (if the first stage landed on `intermediate_class`, or on any
/// class when `require_intermediate` is false) attacks the perturbed image again.
/// The second stage uses a seed derived from the first.
std::vector<AttackOutcome> chained_attack(const Image& image, const std::string& image_id,
                                          const Oracle& oracle, const AttackConfig& config,
                                          std::size_t intermediate_class,
                                          bool require_intermediate = true);

/// The adversarial image an outcome describes.
Image adversarial_image(const Image& original, const AttackOutcome& outcome);

}  // namespace pixelstorm

#endif  // PIXELSTORM_ATTACK_HPP
