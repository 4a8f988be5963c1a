#ifndef PIXELSTORM_CAMPAIGN_HPP
#define PIXELSTORM_CAMPAIGN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pixelstorm/attack.hpp"

namespace pixelstorm {

struct CampaignConfig {
  AttackConfig attack;
  std::size_t sample_count = 500;
  std::uint64_t seed = 0;
  /// Images attacked concurrently.
  std::size_t workers = 1;
};

struct CampaignReport {
  de::VariantSpec variant;
  std::size_t d = 5;
  std::uint64_t seed = 0;
  std::vector<std::string> class_names;
  std::vector<AttackOutcome> outcomes;

  std::size_t successes = 0;
  double success_rate = 0.0;
  std::optional<double> mean_confidence;  // over successes only
  std::optional<double> mean_distortion;  // over successes only
  /// [original][post-attack] counts of successful attacks.
  std::vector<std::vector<std::size_t>> class_pair_matrix;
};

/// Aggregates outcomes into metrics and the class-pair matrix.
CampaignReport summarize(const de::VariantSpec& variant, std::size_t d, std::uint64_t seed,
                         std::vector<std::string> class_names, std::vector<AttackOutcome> outcomes);

/// Dataset positions attacked by a campaign: a seeded shuffle, first `count` kept.
std::vector<std::size_t> sample_indices(std::size_t dataset_size, std::size_t count,
                                        std::uint64_t seed);

/// Attacks `sample_count` images drawn under `seed`. Image k (in sampling order)
/// runs with seed derive_seed(seed, k). Failed attacks are recorded, never thrown.
CampaignReport run_campaign(const Dataset& dataset, const Oracle& oracle,
                            const CampaignConfig& config);

enum class SweepParam { scale_f, cross_pos, cross_rgb };

struct SweepAxis {
  SweepParam param;
  std::vector<double> values;
};

/// "F=0.1,0.5,0.9", "Cp=..." or "Crgb=...".
SweepAxis parse_axis(std::string_view text);

/// Axes swept together; a stage evaluates their Cartesian product.
using SweepStage = std::vector<SweepAxis>;

struct GreedyOptions {
  double success_slack = 0.02;  // fraction, i.e. 2 percentage points
  /// Move the base to each stage's marked variant before the next stage.
  bool carry_forward = false;
};

struct VariantRow {
  std::size_t stage = 0;
  de::VariantSpec variant;
  std::optional<CampaignReport> report;
  std::string error;
  bool marked = false;
};

struct VariantTable {
  std::vector<VariantRow> rows;
};

/// Variants one stage expands to around `base`, in axis-major product order.
std::vector<de::VariantSpec> expand_stage(const de::VariantSpec& base, const SweepStage& stage);

/// F first, then C_p x C_rgb, each over {0.1, 0.5, 0.9}.
std::vector<SweepStage> default_sweep();

/// Runs one campaign per variant (same campaign seed for all) starting from
/// `base.attack.spec`. Within each stage, marks the variants of minimal mean
/// distortion among those whose success rate is within the slack of the best.
VariantTable greedy_variant_search(const Dataset& dataset, const Oracle& oracle,
                                   const CampaignConfig& base,
                                   const std::vector<SweepStage>& stages,
                                   const GreedyOptions& options = {});

}  // namespace pixelstorm

#endif  // PIXELSTORM_CAMPAIGN_HPP
