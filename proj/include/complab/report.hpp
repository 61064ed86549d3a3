#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "complab/modelspace.hpp"

namespace complab {

enum class Verdict { pass, fail, inconclusive };
enum class Direction { lower, upper };

std::string to_string(Verdict v);
std::string to_string(Direction d);
Direction direction_from_string(const std::string& s);

/// Discretization scales, tolerances and epsilon-delta parameters shared by
/// all condition checkers.
struct CheckConfig {
  model::Kappa kappa{0.0};
  Direction direction = Direction::lower;

  double t_max = 0.5;      // coarsest ladder scale
  int ladder_depth = 12;   // scales t_max * 2^-j, j = 0..ladder_depth
  double epsilon = 0.1;    // uniformity tolerance of the epsilon-delta layer
  double delta = 0.25;     // uniformity radius
  double tol = 1e-7;       // numeric slack
  int triple_samples = 500;
  int sweep_points = 64;   // equispaced "for all s" sweep
  int window = 4;          // finest-window width for discretized limsups
  double corner_tol = 1e-3;
  double geodesic_step = 1e-2;
  std::optional<double> neighborhood_radius;
  std::optional<std::vector<double>> delta_candidates;  // for the uniform check
  unsigned long long seed = 0;

  /// Decreasing ladder t_max * 2^-j, j = 0..ladder_depth.
  std::vector<double> scales() const;

  nlohmann::ordered_json to_json() const;
  static CheckConfig from_json(const nlohmann::json& j);
};

struct Witness {
  std::string where;
  double scale = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  long index = 0;
};

struct CurvePoint {
  double scale = 0.0;
  double value = 0.0;
  double bound = 0.0;
};

struct Curve {
  std::string name;
  std::vector<CurvePoint> points;
};

/// Verdict plus violation witnesses and margin tables. The margin convention
/// is uniform: every asserted inequality contributes margin = slack actually
/// available, so a violation is margin < -tol and worst_margin ~ 0 means the
/// check passed with equality.
struct CheckReport {
  std::string condition_id;
  Verdict verdict = Verdict::inconclusive;
  double worst_margin = 0.0;
  long cases_checked = 0;
  long cases_skipped = 0;
  std::vector<Witness> witnesses;
  std::vector<Curve> curves;
  std::vector<std::string> notes;
  nlohmann::ordered_json config_echo;

  void record(double margin, double tol, const Witness& w,
              std::size_t max_witnesses = 64);
  void note(const std::string& text);

  nlohmann::ordered_json to_json() const;
  std::string to_json_string() const;
};

/// Merges per-case reports produced by the sampling harness into one report:
/// any fail dominates, otherwise any inconclusive, otherwise pass.
CheckReport merge_reports(const std::string& condition_id,
                          const std::vector<CheckReport>& parts);

/// One CSV per curve, columns (scale, value, bound), deterministic order.
void write_plot_data(const CheckReport& report, const std::string& out_dir);

void write_report_json(const CheckReport& report, const std::string& path);

}  // namespace complab
