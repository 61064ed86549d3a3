// Command-line front end: builds a space from a JSON spec, runs the
// requested comparison checks, and emits JSON reports plus CSV curve data.
//
// Exit codes: 0 all checks pass, 1 any check fails, 2 any check is
// inconclusive (and none fail), 3 configuration error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "complab/conditions.hpp"
#include "complab/doubling.hpp"
#include "complab/report.hpp"
#include "complab/space.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitConfigError = 3;

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return nlohmann::json::parse(in);
}

bool known_condition(const std::string& id) {
  if (id == "doubling_theorem") return true;
  const auto& ids = complab::cond::condition_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"comparison-lab: numerical comparison-geometry checks"};

  std::string manifest_path, space_path, out_dir = "out";
  std::vector<std::string> conditions;
  double kappa = 0.0, epsilon = 0.1, delta = 0.25, tol = 1e-7, t_max = 0.5;
  int ladder = 12, samples = 500;
  unsigned long long seed = 0;
  std::string direction = "lower";

  app.add_option("--manifest", manifest_path,
                 "JSON manifest (space, conditions, config, out)");
  app.add_option("--space", space_path, "space specification JSON file");
  app.add_option("--condition", conditions, "condition id (repeatable)");
  app.add_option("--kappa", kappa, "curvature parameter of the model surface");
  app.add_option("--direction", direction, "lower | upper");
  app.add_option("--epsilon", epsilon, "uniformity tolerance");
  app.add_option("--delta", delta, "uniformity radius");
  app.add_option("--tol", tol, "numeric slack");
  app.add_option("--t-max", t_max, "coarsest ladder scale");
  app.add_option("--scales", ladder, "ladder depth J");
  app.add_option("--samples", samples, "sampled triples per check");
  app.add_option("--seed", seed, "sampling seed");
  app.add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    nlohmann::json space_spec;
    complab::CheckConfig config;

    if (!manifest_path.empty()) {
      const auto manifest = load_json(manifest_path);
      if (!manifest.contains("space")) {
        throw std::runtime_error("manifest is missing \"space\"");
      }
      space_spec = manifest.at("space");
      if (manifest.contains("conditions")) {
        for (const auto& c : manifest.at("conditions")) {
          conditions.push_back(c.get<std::string>());
        }
      }
      if (manifest.contains("config")) {
        config = complab::CheckConfig::from_json(manifest.at("config"));
      }
      out_dir = manifest.value("out", out_dir);
    } else {
      if (space_path.empty()) {
        throw std::runtime_error("need --manifest or --space");
      }
      space_spec = load_json(space_path);
      config.kappa.k = kappa;
      config.direction = complab::direction_from_string(direction);
      config.epsilon = epsilon;
      config.delta = delta;
      config.tol = tol;
      config.t_max = t_max;
      config.ladder_depth = ladder;
      config.triple_samples = samples;
      config.seed = seed;
    }

    if (conditions.empty()) {
      throw std::runtime_error("no condition ids requested");
    }
    for (const auto& id : conditions) {
      if (!known_condition(id)) {
        throw std::runtime_error("unknown condition id \"" + id + "\"");
      }
    }

    const auto space = complab::spaces::build_space(space_spec);
    std::filesystem::create_directories(out_dir);

    bool any_fail = false, any_inconclusive = false;
    for (const auto& id : conditions) {
      complab::CheckReport report;
      if (id == "doubling_theorem") {
        report = complab::doubling::check_doubling_theorem(space, config);
      } else {
        report = complab::cond::run_condition(*space, config, id);
      }
      complab::write_report_json(report, out_dir + "/" + id + ".json");
      complab::write_plot_data(report, out_dir + "/plots");
      std::cout << id << ": " << complab::to_string(report.verdict)
                << " (worst margin " << report.worst_margin << ", "
                << report.cases_checked << " cases)\n";
      any_fail |= report.verdict == complab::Verdict::fail;
      any_inconclusive |= report.verdict == complab::Verdict::inconclusive;
    }
    if (any_fail) return kExitFail;
    if (any_inconclusive) return kExitInconclusive;
    return kExitPass;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}
