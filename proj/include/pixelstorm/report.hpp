#ifndef PIXELSTORM_REPORT_HPP
#define PIXELSTORM_REPORT_HPP

// Serialized forms of attack results. All writers are deterministic: no
// timestamps, fixed key order, LF line endings.

#include <string>

#include "pixelstorm/campaign.hpp"

namespace pixelstorm {

std::string outcome_to_json(const AttackOutcome& outcome, int indent = -1);
AttackOutcome outcome_from_json(const std::string& text);

/// {"variant", "d", "seed", "classes", "success_rate", ..., "class_pair_matrix", "outcomes"}
std::string report_to_json(const CampaignReport& report);
CampaignReport report_from_json(const std::string& text);

/// One row per image.
std::string outcomes_csv(const CampaignReport& report);
/// K x K matrix; first column is the original class, header row the post-attack class.
std::string heatmap_csv(const CampaignReport& report);
/// Variant,Success Rate,Confidence,Cost
std::string summary_csv(const VariantTable& table);
std::string summary_json(const VariantTable& table);

}  // namespace pixelstorm

#endif  // PIXELSTORM_REPORT_HPP
