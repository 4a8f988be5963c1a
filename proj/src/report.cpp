#include "pixelstorm/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace pixelstorm {

using nlohmann::ordered_json;

namespace {

ordered_json outcome_json(const AttackOutcome& o) {
  ordered_json edits = ordered_json::array();
  for (const auto& e : o.genome.edits) {
    edits.push_back({{"x", e.x}, {"y", e.y}, {"r", e.r}, {"g", e.g}, {"b", e.b}});
  }
  return {{"image_id", o.image_id},
          {"dataset_label", o.dataset_label},
          {"original_class", o.original_class},
          {"predicted_class_after", o.predicted_class_after},
          {"success", o.success},
          {"confidence", o.confidence},
          {"reported_distortion", o.reported_distortion},
          {"normalized_cost", o.normalized_cost},
          {"modified_pixels", o.modified_pixels},
          {"evaluations_used", o.evaluations_used},
          {"generations_used", o.generations_used},
          {"stop_reason", o.stop_reason},
          {"seed", o.seed},
          {"genome", {{"edits", edits}}},
          {"clean_probabilities", o.clean_probabilities},
          {"probabilities_after", o.probabilities_after},
          {"error", o.error}};
}

AttackOutcome outcome_from(const ordered_json& j) {
  AttackOutcome o;
  o.image_id = j.at("image_id").get<std::string>();
  o.dataset_label = j.at("dataset_label").get<int>();
  o.original_class = j.at("original_class").get<std::size_t>();
  o.predicted_class_after = j.at("predicted_class_after").get<std::size_t>();
  o.success = j.at("success").get<bool>();
  o.confidence = j.at("confidence").get<double>();
  o.reported_distortion = j.at("reported_distortion").get<double>();
  o.normalized_cost = j.at("normalized_cost").get<double>();
  o.modified_pixels = j.at("modified_pixels").get<std::size_t>();
  o.evaluations_used = j.at("evaluations_used").get<std::size_t>();
  o.generations_used = j.at("generations_used").get<std::size_t>();
  o.stop_reason = j.at("stop_reason").get<std::string>();
  o.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& e : j.at("genome").at("edits")) {
    o.genome.edits.push_back({e.at("x").get<double>(), e.at("y").get<double>(),
                              e.at("r").get<double>(), e.at("g").get<double>(),
                              e.at("b").get<double>()});
  }
  o.clean_probabilities = j.at("clean_probabilities").get<std::vector<double>>();
  o.probabilities_after = j.at("probabilities_after").get<std::vector<double>>();
  o.error = j.at("error").get<std::string>();
  return o;
}

ordered_json optional_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

std::string outcome_to_json(const AttackOutcome& outcome, int indent) {
  return outcome_json(outcome).dump(indent);
}

AttackOutcome outcome_from_json(const std::string& text) {
  return outcome_from(ordered_json::parse(text));
}

std::string report_to_json(const CampaignReport& r) {
  ordered_json outcomes = ordered_json::array();
  for (const auto& o : r.outcomes) outcomes.push_back(outcome_json(o));
  ordered_json j{{"variant", r.variant.name()},
                 {"scale_f", r.variant.scale_f},
                 {"cross_pos", r.variant.cross_pos},
                 {"cross_rgb", r.variant.cross_rgb},
                 {"pop_size", r.variant.pop_size},
                 {"max_generations", r.variant.max_generations},
                 {"early_stop_fitness", r.variant.early_stop_fitness},
                 {"d", r.d},
                 {"seed", r.seed},
                 {"classes", r.class_names},
                 {"samples", r.outcomes.size()},
                 {"successes", r.successes},
                 {"success_rate", r.success_rate},
                 {"mean_confidence", optional_number(r.mean_confidence)},
                 {"mean_distortion", optional_number(r.mean_distortion)},
                 {"class_pair_matrix", r.class_pair_matrix},
                 {"outcomes", std::move(outcomes)}};
  return j.dump(2) + "\n";
}

CampaignReport report_from_json(const std::string& text) {
  const auto j = ordered_json::parse(text);
  de::VariantSpec v;
  v.scale_f = j.at("scale_f").get<double>();
  v.cross_pos = j.at("cross_pos").get<double>();
  v.cross_rgb = j.at("cross_rgb").get<double>();
  v.pop_size = j.at("pop_size").get<std::size_t>();
  v.max_generations = j.at("max_generations").get<std::size_t>();
  v.early_stop_fitness = j.at("early_stop_fitness").get<double>();
  std::vector<AttackOutcome> outcomes;
  for (const auto& o : j.at("outcomes")) outcomes.push_back(outcome_from(o));
  v.rng_seed = j.at("seed").get<std::uint64_t>();
  return summarize(v, j.at("d").get<std::size_t>(), v.rng_seed,
                   j.at("classes").get<std::vector<std::string>>(), std::move(outcomes));
}

std::string outcomes_csv(const CampaignReport& r) {
  std::ostringstream out;
  out << "image_id,dataset_label,original_class,predicted_class_after,success,confidence,"
         "distortion,normalized_cost,modified_pixels,evaluations,generations,stop_reason,error\n";
  for (const auto& o : r.outcomes) {
    out << csv_field(o.image_id) << ',' << o.dataset_label << ',' << o.original_class << ','
        << o.predicted_class_after << ',' << (o.success ? "true" : "false") << ','
        << fixed(o.confidence, 6) << ',' << fixed(o.reported_distortion, 4) << ','
        << fixed(o.normalized_cost, 6) << ',' << o.modified_pixels << ',' << o.evaluations_used
        << ',' << o.generations_used << ',' << o.stop_reason << ',' << csv_field(o.error) << '\n';
  }
  return out.str();
}

std::string heatmap_csv(const CampaignReport& r) {
  std::ostringstream out;
  out << "original\\target";
  for (const auto& name : r.class_names) out << ',' << csv_field(name);
  out << '\n';
  for (std::size_t i = 0; i < r.class_pair_matrix.size(); ++i) {
    out << csv_field(r.class_names[i]);
    for (std::size_t count : r.class_pair_matrix[i]) out << ',' << count;
    out << '\n';
  }
  return out.str();
}

std::string summary_csv(const VariantTable& table) {
  std::ostringstream out;
  out << "Variant,Success Rate,Confidence,Cost\n";
  for (const auto& row : table.rows) {
    out << row.variant.name() << ',';
    if (row.report) {
      const auto& r = *row.report;
      out << fixed(100.0 * r.success_rate, 2) << "%,";
      out << (r.mean_confidence ? fixed(100.0 * *r.mean_confidence, 2) + "%" : "") << ',';
      out << (r.mean_distortion ? fixed(*r.mean_distortion, 2) : "");
    } else {
      out << ",,";
    }
    out << '\n';
  }
  return out.str();
}

std::string summary_json(const VariantTable& table) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json j{{"stage", row.stage}, {"variant", row.variant.name()}, {"marked", row.marked}};
    if (row.report) {
      j["success_rate"] = row.report->success_rate;
      j["mean_confidence"] = optional_number(row.report->mean_confidence);
      j["mean_distortion"] = optional_number(row.report->mean_distortion);
    }
    j["error"] = row.error;
    rows.push_back(std::move(j));
  }
  return ordered_json{{"rows", rows}}.dump(2) + "\n";
}

}  // namespace pixelstorm
