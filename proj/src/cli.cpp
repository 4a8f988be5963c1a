#include "pixelstorm/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "pixelstorm/campaign.hpp"
#include "pixelstorm/cifar10.hpp"
#include "pixelstorm/fixture.hpp"
#include "pixelstorm/model_io.hpp"
#include "pixelstorm/png_io.hpp"
#include "pixelstorm/report.hpp"

namespace pixelstorm::cli {

namespace fs = std::filesystem;

namespace {

struct RunConfig {
  std::string model_path;
  std::string dataset_path;
  std::string image_path;
  bool fixture = false;
  std::uint64_t fixture_seed = 0;
  std::size_t fixture_count = 60;
  long index = 0;
  std::string variant = "0.5/0.5/0.5";
  std::size_t d = 5;
  std::size_t pop_size = 400;
  std::size_t max_generations = 100;
  double early_stop_fitness = 0.007;
  bool no_flip_stop = false;
  std::optional<std::size_t> sample_count;
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  std::size_t workers = 1;
  std::vector<std::string> axes;
  double slack = 0.02;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--model", cfg.model_path, "Model JSON file");
  cmd->add_flag("--fixture", cfg.fixture, "Use the built-in quadrant model and synthetic images");
  cmd->add_option("--fixture-seed", cfg.fixture_seed, "Seed for the fixture model and images");
  cmd->add_option("--fixture-count", cfg.fixture_count, "Number of synthetic fixture images");
  cmd->add_option("--dataset", cfg.dataset_path, "CIFAR-10 binary batch file");
  cmd->add_option("--variant", cfg.variant, "DE variant F/Cp/Crgb");
  cmd->add_option("--d", cfg.d, "Number of pixels to modify");
  cmd->add_option("--pop-size", cfg.pop_size, "Population size");
  cmd->add_option("--generations", cfg.max_generations, "Maximum generations");
  cmd->add_option("--early-stop", cfg.early_stop_fitness, "Stop when best fitness drops below this");
  cmd->add_flag("--no-flip-stop", cfg.no_flip_stop, "Keep evolving after the label flips");
  cmd->add_option("--seed", cfg.seed, "Random seed (PIXELSTORM_SEED overrides)");
  cmd->add_option("--output-dir", cfg.output_dir, "Directory for outputs");
  cmd->add_option("--workers", cfg.workers, "Parallel workers")->check(CLI::PositiveNumber);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::unique_ptr<ModelOracle> load_oracle(const RunConfig& cfg) {
  if (!cfg.model_path.empty()) return std::make_unique<ModelOracle>(load_model(cfg.model_path));
  if (cfg.fixture) return std::make_unique<ModelOracle>(make_fixture_model(cfg.fixture_seed));
  throw UsageError("need --model or --fixture");
}

Dataset load_dataset(const RunConfig& cfg) {
  if (!cfg.dataset_path.empty()) return load_cifar10_batch(cfg.dataset_path);
  if (cfg.fixture) return make_fixture_dataset(cfg.fixture_count, cfg.fixture_seed);
  throw UsageError("need --dataset or --fixture");
}

AttackConfig attack_config(const RunConfig& cfg) {
  AttackConfig ac;
  ac.spec = de::parse_variant(cfg.variant);
  ac.spec.pop_size = cfg.pop_size;
  ac.spec.max_generations = cfg.max_generations;
  ac.spec.early_stop_fitness = cfg.early_stop_fitness;
  ac.spec.rng_seed = cfg.seed;
  ac.spec.validate();
  ac.d = cfg.d;
  ac.stop_on_flip = !cfg.no_flip_stop;
  ac.workers = cfg.workers;
  return ac;
}

CampaignConfig campaign_config(const RunConfig& cfg, std::size_t dataset_size) {
  CampaignConfig cc;
  cc.attack = attack_config(cfg);
  cc.seed = cfg.seed;
  cc.workers = cfg.workers;
  cc.sample_count = cfg.sample_count.value_or(std::min<std::size_t>(500, dataset_size));
  if (cc.sample_count > dataset_size) {
    throw UsageError("--sample-count " + std::to_string(cc.sample_count) +
                     " exceeds dataset size " + std::to_string(dataset_size));
  }
  if (cc.sample_count == 0) throw UsageError("--sample-count must be positive");
  return cc;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_metadata(const fs::path& dir, const Oracle& oracle, double seconds) {
  const OracleStats stats = oracle.stats();
  nlohmann::ordered_json j{{"generated_at", utc_now()},
                           {"wall_seconds", seconds},
                           {"oracle_queries", stats.query_count},
                           {"oracle_seconds", std::chrono::duration<double>(stats.wall_time).count()}};
  write_file(dir / "run_metadata.json", j.dump(2) + "\n");
}

void write_campaign(const fs::path& dir, const CampaignReport& report) {
  fs::create_directories(dir);
  write_file(dir / "report.json", report_to_json(report));
  write_file(dir / "outcomes.csv", outcomes_csv(report));
  write_file(dir / "heatmap.csv", heatmap_csv(report));
}

int cmd_attack(const RunConfig& cfg, std::ostream& out) {
  auto oracle = load_oracle(cfg);
  const AttackConfig ac = attack_config(cfg);

  Image image;
  std::string id;
  int label = -1;
  if (!cfg.image_path.empty()) {
    image = read_png(cfg.image_path);
    id = fs::path(cfg.image_path).stem().string();
  } else {
    Dataset data = load_dataset(cfg);
    if (cfg.index < 0 || static_cast<std::size_t>(cfg.index) >= data.size()) {
      throw UsageError("--index " + std::to_string(cfg.index) + " out of range for " +
                       std::to_string(data.size()) + " images");
    }
    image = data[cfg.index].image;
    label = data[cfg.index].label;
    id = std::to_string(cfg.index);
  }

  AttackOutcome outcome = attack_image(image, id, *oracle, ac);
  outcome.dataset_label = label;

  const fs::path dir = cfg.output_dir;
  fs::create_directories(dir);
  write_file(dir / "outcome.json", outcome_to_json(outcome, 2) + "\n");
  write_png(dir / ("adv_" + id + ".png"), adversarial_image(image, outcome));

  const auto& names = oracle->class_names();
  nlohmann::ordered_json sidecar{
      {"image_id", id},
      {"genome", nlohmann::ordered_json::parse(genome_to_json(outcome.genome))},
      {"original_class", outcome.original_class},
      {"original_class_name", names.at(outcome.original_class)},
      {"predicted_class_after", outcome.predicted_class_after},
      {"predicted_class_name", names.at(outcome.predicted_class_after)},
      {"confidence", outcome.confidence}};
  write_file(dir / ("adv_" + id + ".json"), sidecar.dump(2) + "\n");

  out << (outcome.success ? "success" : "failure") << ": " << names.at(outcome.original_class)
      << " -> " << names.at(outcome.predicted_class_after) << " confidence " << outcome.confidence
      << " distortion " << outcome.reported_distortion << " evaluations "
      << outcome.evaluations_used << "\n";
  return outcome.success ? exit_success : exit_attack_failed;
}

int cmd_campaign(const RunConfig& cfg, std::ostream& out) {
  auto oracle = load_oracle(cfg);
  const Dataset data = load_dataset(cfg);
  const CampaignConfig cc = campaign_config(cfg, data.size());

  const auto start = std::chrono::steady_clock::now();
  const CampaignReport report = run_campaign(data, *oracle, cc);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  write_campaign(cfg.output_dir, report);
  write_metadata(cfg.output_dir, *oracle, seconds);
  out << report.variant.name() << ": " << report.successes << "/" << report.outcomes.size()
      << " successful\n";
  return exit_success;
}

std::string variant_dir(const de::VariantSpec& v) {
  std::string name = "variant_" + v.name();
  for (char& c : name) {
    if (c == '/') c = '_';
  }
  return name;
}

int cmd_gridsearch(const RunConfig& cfg, std::ostream& out) {
  if (cfg.axes.empty()) throw UsageError("gridsearch needs at least one --axis");
  SweepStage stage;
  for (const auto& a : cfg.axes) stage.push_back(parse_axis(a));

  auto oracle = load_oracle(cfg);
  const Dataset data = load_dataset(cfg);
  const CampaignConfig cc = campaign_config(cfg, data.size());

  const auto start = std::chrono::steady_clock::now();
  GreedyOptions opts;
  opts.success_slack = cfg.slack;
  const VariantTable table = greedy_variant_search(data, *oracle, cc, {stage}, opts);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const fs::path dir = cfg.output_dir;
  fs::create_directories(dir);
  for (const auto& row : table.rows) {
    if (row.report) write_campaign(dir / variant_dir(row.variant), *row.report);
  }
  write_file(dir / "summary.csv", summary_csv(table));
  write_file(dir / "summary.json", summary_json(table));
  write_metadata(dir, *oracle, seconds);
  out << summary_csv(table);
  return exit_success;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  cfg.workers = static_cast<std::size_t>(std::max(1, omp_get_num_procs()));

  CLI::App app{"Few-pixel black-box attacks by differential evolution", "pixelstorm"};
  app.require_subcommand(1);

  auto* attack = app.add_subcommand("attack", "Attack one image");
  add_common(attack, cfg);
  attack->add_option("--index", cfg.index, "Dataset index of the image to attack");
  attack->add_option("--image", cfg.image_path, "PNG image to attack");

  auto* campaign = app.add_subcommand("campaign", "Attack a random sample of a dataset");
  add_common(campaign, cfg);
  campaign->add_option("--sample-count", cfg.sample_count, "Images to attack");

  auto* grid = app.add_subcommand("gridsearch", "Sweep DE variants around a base variant");
  add_common(grid, cfg);
  grid->add_option("--sample-count", cfg.sample_count, "Images to attack per variant");
  grid->add_option("--axis", cfg.axes, "Axis NAME=v1,v2,... (F, Cp, Crgb); repeatable");
  grid->add_option("--slack", cfg.slack, "Success-rate slack (fraction) when marking variants");

  std::vector<const char*> argv{"pixelstorm"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success&) {
    out << app.help();
    return exit_success;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return exit_error;
  }

  if (const char* env = std::getenv("PIXELSTORM_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      cfg.seed = std::stoull(env, &used);
      if (env[used] != '\0') throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      err << "error: PIXELSTORM_SEED must be an unsigned integer\n";
      return exit_error;
    }
  }

  try {
    if (attack->parsed()) return cmd_attack(cfg, out);
    if (campaign->parsed()) return cmd_campaign(cfg, out);
    return cmd_gridsearch(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return exit_error;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\nusage: pixelstorm " << args.front()
        << " --variant F/Cp/Crgb ...\n";
    return exit_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_error;
  }
}

}  // namespace pixelstorm::cli
