#include "pixelstorm/campaign.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include "pixelstorm/rng.hpp"

namespace pixelstorm {

CampaignReport summarize(const de::VariantSpec& variant, std::size_t d, std::uint64_t seed,
                         std::vector<std::string> class_names,
                         std::vector<AttackOutcome> outcomes) {
  CampaignReport r;
  r.variant = variant;
  r.d = d;
  r.seed = seed;
  r.class_names = std::move(class_names);
  r.outcomes = std::move(outcomes);

  const std::size_t k = r.class_names.size();
  r.class_pair_matrix.assign(k, std::vector<std::size_t>(k, 0));
  double conf_sum = 0.0, dist_sum = 0.0;
  for (const AttackOutcome& o : r.outcomes) {
    if (!o.success || !o.error.empty()) continue;
    ++r.successes;
    conf_sum += o.confidence;
    dist_sum += o.reported_distortion;
    if (o.original_class < k && o.predicted_class_after < k) {
      ++r.class_pair_matrix[o.original_class][o.predicted_class_after];
    }
  }
  if (!r.outcomes.empty()) {
    r.success_rate = static_cast<double>(r.successes) / static_cast<double>(r.outcomes.size());
  }
  if (r.successes > 0) {
    r.mean_confidence = conf_sum / static_cast<double>(r.successes);
    r.mean_distortion = dist_sum / static_cast<double>(r.successes);
  }
  return r;
}

std::vector<std::size_t> sample_indices(std::size_t dataset_size, std::size_t count,
                                        std::uint64_t seed) {
  if (count > dataset_size) {
    throw std::invalid_argument("sample count " + std::to_string(count) +
                                " exceeds dataset size " + std::to_string(dataset_size));
  }
  std::vector<std::size_t> idx(dataset_size);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  // Explicit Fisher-Yates; std::shuffle's draw pattern is implementation-defined.
  for (std::size_t i = dataset_size; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(idx[i - 1], idx[pick(rng)]);
  }
  idx.resize(count);
  return idx;
}

CampaignReport run_campaign(const Dataset& dataset, const Oracle& oracle,
                            const CampaignConfig& config) {
  const auto picks = sample_indices(dataset.size(), config.sample_count, config.seed);
  std::vector<AttackOutcome> outcomes(picks.size());
  const int threads = static_cast<int>(std::max<std::size_t>(1, config.workers));
  const auto n = static_cast<std::ptrdiff_t>(picks.size());

#pragma omp parallel for num_threads(threads) schedule(dynamic, 1) if (threads > 1)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const std::size_t idx = picks[k];
    AttackConfig ac = config.attack;
    ac.spec.rng_seed = derive_seed(config.seed, static_cast<std::uint64_t>(k));
    if (threads > 1) ac.workers = 1;
    const std::string id = std::to_string(idx);
    try {
      outcomes[k] = attack_image(dataset[idx].image, id, oracle, ac);
    } catch (const std::exception& e) {
      outcomes[k] = AttackOutcome{};
      outcomes[k].image_id = id;
      outcomes[k].seed = ac.spec.rng_seed;
      outcomes[k].error = e.what();
    }
    outcomes[k].dataset_label = dataset[idx].label;
  }

  return summarize(config.attack.spec, config.attack.d, config.seed, oracle.class_names(),
                   std::move(outcomes));
}

SweepAxis parse_axis(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw std::invalid_argument("axis \"" + std::string(text) + "\" must look like NAME=v1,v2");
  }
  const std::string_view name = text.substr(0, eq);
  SweepAxis axis;
  if (name == "F") axis.param = SweepParam::scale_f;
  else if (name == "Cp" || name == "C_p") axis.param = SweepParam::cross_pos;
  else if (name == "Crgb" || name == "C_rgb") axis.param = SweepParam::cross_rgb;
  else throw std::invalid_argument("unknown axis \"" + std::string(name) + "\" (use F, Cp or Crgb)");

  std::string_view rest = text.substr(eq + 1);
  for (;;) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
      throw std::invalid_argument("axis \"" + std::string(text) + "\" has a malformed value");
    }
    const bool ok = axis.param == SweepParam::scale_f ? (v > 0.0 && v <= 1.0) : (v >= 0.0 && v <= 1.0);
    if (!ok) throw std::invalid_argument("axis \"" + std::string(text) + "\" value out of range");
    axis.values.push_back(v);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return axis;
}

std::vector<de::VariantSpec> expand_stage(const de::VariantSpec& base, const SweepStage& stage) {
  std::vector<de::VariantSpec> out{base};
  for (const SweepAxis& axis : stage) {
    if (axis.values.empty()) throw std::invalid_argument("sweep axis has no values");
    std::vector<de::VariantSpec> next;
    for (const auto& partial : out) {
      for (double v : axis.values) {
        de::VariantSpec s = partial;
        switch (axis.param) {
          case SweepParam::scale_f: s.scale_f = v; break;
          case SweepParam::cross_pos: s.cross_pos = v; break;
          case SweepParam::cross_rgb: s.cross_rgb = v; break;
        }
        next.push_back(s);
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<SweepStage> default_sweep() {
  const std::vector<double> levels{0.5, 0.9, 0.1};
  return {
      {SweepAxis{SweepParam::scale_f, levels}},
      {SweepAxis{SweepParam::cross_pos, levels}, SweepAxis{SweepParam::cross_rgb, levels}},
  };
}

namespace {

void mark_stage(std::vector<VariantRow>& rows, std::size_t first, double slack) {
  double best_rate = -1.0;
  for (std::size_t i = first; i < rows.size(); ++i) {
    if (rows[i].report) best_rate = std::max(best_rate, rows[i].report->success_rate);
  }
  if (best_rate < 0.0) return;
  std::optional<double> best_dist;
  auto eligible = [&](const VariantRow& r) {
    return r.report && r.report->mean_distortion &&
           r.report->success_rate >= best_rate - slack - 1e-12;
  };
  for (std::size_t i = first; i < rows.size(); ++i) {
    if (eligible(rows[i]) && (!best_dist || *rows[i].report->mean_distortion < *best_dist)) {
      best_dist = *rows[i].report->mean_distortion;
    }
  }
  if (!best_dist) return;
  for (std::size_t i = first; i < rows.size(); ++i) {
    if (eligible(rows[i]) && *rows[i].report->mean_distortion == *best_dist) rows[i].marked = true;
  }
}

}  // namespace

VariantTable greedy_variant_search(const Dataset& dataset, const Oracle& oracle,
                                   const CampaignConfig& base,
                                   const std::vector<SweepStage>& stages,
                                   const GreedyOptions& options) {
  if (stages.empty()) throw std::invalid_argument("variant search needs at least one stage");
  VariantTable table;
  std::map<std::tuple<double, double, double>, std::size_t> done;  // -> row holding its report
  de::VariantSpec center = base.attack.spec;

  for (std::size_t s = 0; s < stages.size(); ++s) {
    const std::size_t first = table.rows.size();
    for (const de::VariantSpec& spec : expand_stage(center, stages[s])) {
      VariantRow row;
      row.stage = s;
      row.variant = spec;
      const auto key = std::make_tuple(spec.scale_f, spec.cross_pos, spec.cross_rgb);
      if (auto it = done.find(key); it != done.end()) {
        row.report = table.rows[it->second].report;
        row.error = table.rows[it->second].error;
      } else {
        CampaignConfig cfg = base;
        cfg.attack.spec = spec;
        try {
          row.report = run_campaign(dataset, oracle, cfg);
        } catch (const std::exception& e) {
          row.error = e.what();
        }
        done[key] = table.rows.size();
      }
      table.rows.push_back(std::move(row));
    }
    mark_stage(table.rows, first, options.success_slack);
    if (options.carry_forward) {
      for (std::size_t i = first; i < table.rows.size(); ++i) {
        if (table.rows[i].marked) {
          center = table.rows[i].variant;
          break;
        }
      }
    }
  }
  return table;
}

}  // namespace pixelstorm
