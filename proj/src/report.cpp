#include "complab/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace complab {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string to_string(Direction d) {
  return d == Direction::lower ? "lower" : "upper";
}

Direction direction_from_string(const std::string& s) {
  if (s == "lower") return Direction::lower;
  if (s == "upper") return Direction::upper;
  throw std::invalid_argument("unknown direction \"" + s + "\"");
}

std::vector<double> CheckConfig::scales() const {
  std::vector<double> out;
  out.reserve(ladder_depth + 1);
  double t = t_max;
  for (int j = 0; j <= ladder_depth; ++j, t *= 0.5) out.push_back(t);
  return out;
}

nlohmann::ordered_json CheckConfig::to_json() const {
  nlohmann::ordered_json j;
  j["kappa"] = kappa.k;
  j["direction"] = to_string(direction);
  j["t_max"] = t_max;
  j["ladder_depth"] = ladder_depth;
  j["epsilon"] = epsilon;
  j["delta"] = delta;
  j["tol"] = tol;
  j["triple_samples"] = triple_samples;
  j["sweep_points"] = sweep_points;
  j["window"] = window;
  j["corner_tol"] = corner_tol;
  j["geodesic_step"] = geodesic_step;
  if (neighborhood_radius) j["neighborhood_radius"] = *neighborhood_radius;
  if (delta_candidates) j["delta_candidates"] = *delta_candidates;
  j["seed"] = seed;
  return j;
}

CheckConfig CheckConfig::from_json(const nlohmann::json& j) {
  CheckConfig c;
  c.kappa.k = j.value("kappa", 0.0);
  if (j.contains("direction")) {
    c.direction = direction_from_string(j.at("direction").get<std::string>());
  }
  c.t_max = j.value("t_max", c.t_max);
  c.ladder_depth = j.value("ladder_depth", c.ladder_depth);
  c.epsilon = j.value("epsilon", c.epsilon);
  c.delta = j.value("delta", c.delta);
  c.tol = j.value("tol", c.tol);
  c.triple_samples = j.value("triple_samples", c.triple_samples);
  c.sweep_points = j.value("sweep_points", c.sweep_points);
  c.window = j.value("window", c.window);
  c.corner_tol = j.value("corner_tol", c.corner_tol);
  c.geodesic_step = j.value("geodesic_step", c.geodesic_step);
  if (j.contains("neighborhood_radius")) {
    c.neighborhood_radius = j.at("neighborhood_radius").get<double>();
  }
  if (j.contains("delta_candidates")) {
    c.delta_candidates = j.at("delta_candidates").get<std::vector<double>>();
  }
  c.seed = j.value("seed", 0ULL);
  return c;
}

void CheckReport::record(double margin, double tol, const Witness& w,
                         std::size_t max_witnesses) {
  ++cases_checked;
  worst_margin = std::min(worst_margin, margin);
  if (margin < -tol) {
    verdict = Verdict::fail;
    if (witnesses.size() < max_witnesses) witnesses.push_back(w);
  }
}

void CheckReport::note(const std::string& text) { notes.push_back(text); }

nlohmann::ordered_json CheckReport::to_json() const {
  nlohmann::ordered_json j;
  j["condition"] = condition_id;
  j["verdict"] = to_string(verdict);
  j["worst_margin"] = worst_margin;
  j["cases_checked"] = cases_checked;
  j["cases_skipped"] = cases_skipped;
  auto ws = nlohmann::ordered_json::array();
  for (const auto& w : witnesses) {
    nlohmann::ordered_json jw;
    jw["where"] = w.where;
    jw["scale"] = w.scale;
    jw["lhs"] = w.lhs;
    jw["rhs"] = w.rhs;
    jw["margin"] = w.margin;
    jw["index"] = w.index;
    ws.push_back(jw);
  }
  j["witnesses"] = ws;
  auto cs = nlohmann::ordered_json::array();
  for (const auto& c : curves) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& p : c.points) {
      rows.push_back({p.scale, p.value, p.bound});
    }
    jc["rows"] = rows;
    cs.push_back(jc);
  }
  j["curves"] = cs;
  j["notes"] = notes;
  j["config"] = config_echo;
  return j;
}

std::string CheckReport::to_json_string() const { return to_json().dump(2); }

CheckReport merge_reports(const std::string& condition_id,
                          const std::vector<CheckReport>& parts) {
  CheckReport out;
  out.condition_id = condition_id;
  out.verdict = Verdict::pass;
  bool any_inconclusive = false;
  bool any_conclusive = false;
  long index = 0;
  for (const auto& part : parts) {
    out.cases_checked += part.cases_checked;
    out.cases_skipped += part.cases_skipped;
    out.worst_margin = std::min(out.worst_margin, part.worst_margin);
    if (part.verdict == Verdict::fail) {
      out.verdict = Verdict::fail;
      any_conclusive = true;
    } else if (part.verdict == Verdict::inconclusive) {
      any_inconclusive = true;
    } else {
      any_conclusive = true;
    }
    for (auto w : part.witnesses) {
      w.index = index;
      if (out.witnesses.size() < 256) out.witnesses.push_back(w);
    }
    for (const auto& c : part.curves) {
      if (out.curves.size() < 64) out.curves.push_back(c);
    }
    ++index;
  }
  if (out.verdict != Verdict::fail) {
    if (!any_conclusive || parts.empty()) {
      out.verdict = Verdict::inconclusive;
    } else if (any_inconclusive) {
      out.verdict = Verdict::inconclusive;
    }
  }
  if (any_inconclusive) {
    out.note("some sampled cases were inconclusive (discretization floor)");
  }
  return out;
}

void write_report_json(const CheckReport& report, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open report file " + path);
  os << report.to_json_string() << "\n";
}

void write_plot_data(const CheckReport& report, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  int curve_index = 0;
  for (const auto& curve : report.curves) {
    std::string name = curve.name;
    std::replace_if(
        name.begin(), name.end(),
        [](char c) { return !(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'); },
        '_');
    const std::string path = out_dir + "/" + report.condition_id + "__" +
                             std::to_string(curve_index++) + "_" + name + ".csv";
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open plot file " + path);
    os << "scale,value,bound\n";
    os.precision(17);
    for (const auto& p : curve.points) {
      os << p.scale << "," << p.value << "," << p.bound << "\n";
    }
  }
}

}  // namespace complab
