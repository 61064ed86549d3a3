#include "complab/supportsense.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace complab::support {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void domain_fail(const std::string& what) {
  throw std::domain_error("supportsense: " + what);
}

double fmax_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

double SampledFunction::pitch() const {
  double p = kInf;
  for (std::size_t i = 1; i < grid.size(); ++i) p = std::min(p, grid[i] - grid[i - 1]);
  return p;
}

bool SampledFunction::uniform() const {
  if (grid.size() < 3) return true;
  const double p = (grid.back() - grid.front()) / (grid.size() - 1);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (std::fabs(grid[i] - grid[i - 1] - p) > 1e-9 * std::max(1.0, p)) return false;
  }
  return true;
}

bool SampledFunction::is_exceptional(int index) const {
  return std::find(exceptional.begin(), exceptional.end(), index) != exceptional.end();
}

double SampledFunction::eval(double t) const {
  if (grid.empty()) domain_fail("empty sampled function");
  if (t <= grid.front()) return values.front();
  if (t >= grid.back()) return values.back();
  auto it = std::lower_bound(grid.begin(), grid.end(), t);
  const auto hi = static_cast<std::size_t>(it - grid.begin());
  const double snap = 1e-12 * std::max(1.0, std::fabs(t));
  if (std::fabs(grid[hi] - t) <= snap) return values[hi];
  if (std::fabs(grid[hi - 1] - t) <= snap) return values[hi - 1];
  const double u = (t - grid[hi - 1]) / (grid[hi] - grid[hi - 1]);
  return values[hi - 1] + u * (values[hi] - values[hi - 1]);
}

SampledFunction SampledFunction::tabulate(const std::function<double(double)>& fn,
                                          double a, double b, int intervals) {
  if (intervals < 1 || b <= a) domain_fail("bad tabulation range");
  SampledFunction f;
  f.grid.reserve(intervals + 1);
  f.values.reserve(intervals + 1);
  for (int i = 0; i <= intervals; ++i) {
    const double t = a + (b - a) * static_cast<double>(i) / intervals;
    f.grid.push_back(t);
    f.values.push_back(fn(t));
  }
  return f;
}

SampledFunction SampledFunction::from_csv(std::istream& in) {
  SampledFunction f;
  std::string line;
  int index = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!std::isdigit(static_cast<unsigned char>(line[0])) && line[0] != '-' &&
        line[0] != '+' && line[0] != '.') {
      continue;  // header
    }
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');
    f.grid.push_back(std::stod(cell));
    std::getline(row, cell, ',');
    f.values.push_back(std::stod(cell));
    if (std::getline(row, cell, ',') && std::stod(cell) != 0.0) {
      f.exceptional.push_back(index);
    }
    ++index;
  }
  for (std::size_t i = 1; i < f.grid.size(); ++i) {
    if (f.grid[i] <= f.grid[i - 1]) domain_fail("grid must be strictly increasing");
  }
  return f;
}

void SampledFunction::to_csv(std::ostream& out) const {
  out << "t,f,exceptional\n";
  out.precision(17);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << grid[i] << "," << values[i] << ","
        << (is_exceptional(static_cast<int>(i)) ? 1 : 0) << "\n";
  }
}

std::vector<double> default_scales(const SampledFunction& f, double t) {
  const double span = std::min(t - f.grid.front(), f.grid.back() - t);
  const double domain = f.grid.back() - f.grid.front();
  const double floor = 4.0 * f.pitch();
  std::vector<double> out;
  for (double tau = std::min(span, domain / 4.0); tau >= floor * (1.0 - 1e-9);
       tau *= 0.5) {
    out.push_back(tau);
  }
  return out;
}

namespace {

/// Snaps tau to a multiple of the pitch on uniform grids so that symmetric
/// differences of tabulated smooth functions are interpolation-free.
std::vector<double> usable_scales(const SampledFunction& f, double t,
                                  const std::vector<double>& scales,
                                  double min_tau) {
  const bool snap = f.uniform();
  const double p = f.pitch();
  std::vector<double> out;
  for (double tau : scales) {
    if (snap) tau = std::round(tau / p) * p;
    if (tau < min_tau * (1.0 - 1e-9)) continue;
    if (t - tau < f.grid.front() - 1e-12 || t + tau > f.grid.back() + 1e-12) continue;
    if (!out.empty() && std::fabs(out.back() - tau) < 1e-15) continue;
    out.push_back(tau);
  }
  return out;
}

}  // namespace

double corner_jump(const SampledFunction& f, double t,
                   const std::vector<double>& scales, double corner_tol) {
  // The symmetric gap (f(t+tau) + f(t-tau) - 2 f(t)) / tau tends to the jump
  // of f' at a corner but decays linearly in tau for C^2 inputs, so a gap
  // above corner_tol that fails to decay across the two finest usable scales
  // is a corner.
  const auto taus = usable_scales(f, t, scales, f.pitch());
  if (taus.size() < 2) return 0.0;
  const double f0 = f.eval(t);
  auto gap = [&](double tau) {
    return (f.eval(t + tau) + f.eval(t - tau) - 2.0 * f0) / tau;
  };
  const double coarse = gap(taus[taus.size() - 2]);
  const double fine = gap(taus.back());
  if (std::fabs(fine) > corner_tol &&
      std::fabs(fine) > 0.75 * std::fabs(coarse)) {
    return fine;
  }
  return 0.0;
}

DiniPair dini_derivatives(const SampledFunction& f, double t,
                          const std::vector<double>& scales, int window) {
  if (t <= f.grid.front() || t >= f.grid.back()) {
    domain_fail("Dini derivatives need an interior point");
  }
  DiniPair pair;
  const auto taus = usable_scales(f, t, scales, f.pitch());
  if (taus.empty()) return pair;
  const double f0 = f.eval(t);
  for (double tau : taus) {
    pair.backward.push_back({tau, (f.eval(t - tau) - f0) / (-tau), 0.0});
    pair.forward.push_back({tau, (f.eval(t + tau) - f0) / tau, 0.0});
  }
  const std::size_t w = std::min<std::size_t>(window, taus.size());
  pair.minus_min = kInf;
  pair.plus_max = -kInf;
  for (std::size_t i = taus.size() - w; i < taus.size(); ++i) {
    pair.minus_min = std::min(pair.minus_min, pair.backward[i].value);
    pair.plus_max = std::max(pair.plus_max, pair.forward[i].value);
  }
  pair.conclusive = true;
  return pair;
}

SupportBoundEstimate support_second_bound(const SampledFunction& f, double t,
                                          BoundSide side,
                                          const std::vector<double>& scales,
                                          double corner_tol, int window) {
  if (t <= f.grid.front() || t >= f.grid.back()) {
    domain_fail("support bound needs an interior point");
  }
  SupportBoundEstimate est;
  est.t = t;
  est.side = side;
  const auto taus = usable_scales(f, t, scales, f.pitch());
  if (taus.empty()) return est;  // inconclusive: everything below grid pitch

  const double f0 = f.eval(t);
  for (double tau : taus) {
    const double d2 = (f.eval(t + tau) + f.eval(t - tau) - 2.0 * f0) / (tau * tau);
    est.per_scale.push_back({tau, d2, 0.0});
  }

  const double jump = corner_jump(f, t, taus, corner_tol);
  if (jump != 0.0) {
    // A corner: the symmetric difference diverges like jump/tau, so the
    // support bound is +inf (convex corner) or -inf (concave corner) on
    // both sides.
    est.corner = true;
    est.conclusive = true;
    est.estimate = jump > 0.0 ? kInf : -kInf;
    return est;
  }

  const std::size_t w = std::min<std::size_t>(window, taus.size());
  double value = (side == BoundSide::upper) ? -kInf : kInf;
  for (std::size_t i = taus.size() - w; i < taus.size(); ++i) {
    if (side == BoundSide::upper) {
      value = std::max(value, est.per_scale[i].value);
    } else {
      value = std::min(value, est.per_scale[i].value);
    }
  }
  est.estimate = value;
  est.conclusive = true;
  return est;
}

CheckReport verify_barrier(const SampledFunction& f, model::Kappa kappa,
                           Direction direction, double l, double tol) {
  CheckReport report;
  report.condition_id = "barrier";
  report.verdict = Verdict::pass;
  const double sgn = (direction == Direction::lower) ? 1.0 : -1.0;

  // Hypothesis gate.
  if (kappa.k > 0.0 && !kappa.within_diameter(l)) {
    report.verdict = Verdict::inconclusive;
    report.note("hypothesis rejected: interval length reaches pi/sqrt(k)");
    return report;
  }
  if (f.grid.size() < 5) {
    report.verdict = Verdict::inconclusive;
    report.note("hypothesis rejected: grid too coarse");
    return report;
  }
  if (std::fabs(f.grid.front()) > tol || std::fabs(f.grid.back() - l) > tol ||
      std::fabs(f.values.front()) > tol || std::fabs(f.values.back()) > tol) {
    report.verdict = Verdict::inconclusive;
    report.note("hypothesis rejected: endpoint values must vanish on [0, l]");
    return report;
  }

  const double fmax = fmax_abs(f.values);
  Curve hypothesis{"hypothesis_margin", {}};
  bool hypothesis_ok = true;
  for (std::size_t i = 1; i + 1 < f.grid.size(); ++i) {
    const double t = f.grid[i];
    const auto scales = default_scales(f, t);
    if (f.is_exceptional(static_cast<int>(i))) {
      const auto dini = dini_derivatives(f, t, scales);
      if (!dini.conclusive) continue;
      // Remark-style gate at exceptional points: f'_{+,max} <= f'_{-,min}
      // (flipped for the upper direction).
      const double gate_slack = tol + 10.0 * 4.0 * f.pitch();
      const double margin = sgn * (dini.minus_min - dini.plus_max);
      Witness w{"exceptional t=" + std::to_string(t), t, dini.plus_max,
                dini.minus_min, margin, static_cast<long>(i)};
      const auto before = report.verdict;
      report.record(margin, gate_slack, w);
      if (report.verdict == Verdict::fail && before != Verdict::fail) {
        hypothesis_ok = false;
      }
      continue;
    }
    const auto est = support_second_bound(
        f, t, (direction == Direction::lower) ? BoundSide::upper : BoundSide::lower,
        scales);
    if (!est.conclusive) continue;
    double tau_big = 0.0;
    if (!est.per_scale.empty()) {
      const std::size_t w = std::min<std::size_t>(4, est.per_scale.size());
      tau_big = est.per_scale[est.per_scale.size() - w].scale;
    }
    const double slack = tol + tau_big * tau_big * (1.0 + std::fabs(kappa.k) * std::max(1.0, fmax));
    // lower direction: estimate + k f <= 0; upper: >= 0.
    const double value = est.estimate + kappa.k * f.values[i];
    const double margin = -sgn * value;
    hypothesis.points.push_back({t, value, 0.0});
    Witness w{"t=" + std::to_string(t), t, value, 0.0, margin, static_cast<long>(i)};
    const auto before = report.verdict;
    report.record(margin, slack, w);
    if (report.verdict == Verdict::fail && before != Verdict::fail) hypothesis_ok = false;
  }
  report.curves.push_back(std::move(hypothesis));
  if (!hypothesis_ok) {
    report.note("hypothesis phase failed: f'' + k f violates the support-sense bound");
    return report;
  }

  // Conclusion phase: f >= 0 (lower) / f <= 0 (upper).
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    const double margin = sgn * f.values[i];
    Witness w{"t=" + std::to_string(f.grid[i]), f.grid[i], f.values[i], 0.0,
              margin, static_cast<long>(i)};
    const auto before = report.verdict;
    report.record(margin, tol, w);
    if (report.verdict == Verdict::fail && before != Verdict::fail) {
      report.note("conclusion phase failed: the barrier bound f >= 0 (<= 0) is violated");
    }
  }
  return report;
}

CheckReport geodesic_energy_check(const spaces::Space& space,
                                  const CheckConfig& config,
                                  const spaces::SpacePoint& p,
                                  const spaces::GeodesicPath& path,
                                  const std::vector<double>& exceptional_params) {
  CheckReport report;
  report.condition_id = "energy";
  report.verdict = Verdict::pass;
  report.config_echo = config.to_json();

  SampledFunction g;
  g.grid = path.params;
  g.values.reserve(path.params.size());
  for (std::size_t i = 0; i < path.params.size(); ++i) {
    g.values.push_back(model::fk(config.kappa, space.distance(p, path.points[i])));
  }
  const double half_pitch = 0.5 * g.pitch();
  for (double te : exceptional_params) {
    for (std::size_t i = 1; i + 1 < g.grid.size(); ++i) {
      if (std::fabs(g.grid[i] - te) <= half_pitch) {
        g.exceptional.push_back(static_cast<int>(i));
      }
    }
  }

  const double sgn = (config.direction == Direction::lower) ? 1.0 : -1.0;
  const double fmax = fmax_abs(g.values);
  Curve curve{"energy_margin", {}};
  bool any = false;
  for (std::size_t i = 1; i + 1 < g.grid.size(); ++i) {
    if (g.is_exceptional(static_cast<int>(i))) {
      ++report.cases_skipped;
      continue;
    }
    const double t = g.grid[i];
    const auto scales = default_scales(g, t);
    const auto est = support_second_bound(
        g, t,
        (config.direction == Direction::lower) ? BoundSide::upper : BoundSide::lower,
        scales, config.corner_tol, config.window);
    if (!est.conclusive) continue;
    any = true;
    double tau_big = 0.0;
    if (!est.per_scale.empty()) {
      const std::size_t w = std::min<std::size_t>(config.window, est.per_scale.size());
      tau_big = est.per_scale[est.per_scale.size() - w].scale;
    }
    const double slack =
        config.tol +
        tau_big * tau_big * (1.0 + std::fabs(config.kappa.k) * std::max(1.0, fmax));
    const double value = est.estimate + config.kappa.k * g.values[i];
    const double margin = sgn * (1.0 - value);
    curve.points.push_back({t, value, 1.0});
    Witness w{"t=" + std::to_string(t) + " at " + space.describe(path.points[i]), t,
              value, 1.0, margin, static_cast<long>(i)};
    report.record(margin, slack, w);
  }
  report.curves.push_back(std::move(curve));
  if (!any) report.verdict = Verdict::inconclusive;
  return report;
}

CheckReport comparison_gap_check(const spaces::Space& space,
                                 const CheckConfig& config,
                                 const spaces::SpacePoint& p,
                                 const spaces::GeodesicPath& path) {
  CheckReport report;
  report.condition_id = "comparison_gap";
  report.verdict = Verdict::pass;
  report.config_echo = config.to_json();

  const double mu = path.length;
  const double d0 = space.distance(p, path.at(0.0));
  const double d1 = space.distance(p, path.at(mu));
  if (config.kappa.k > 0.0 &&
      (!config.kappa.within_diameter(mu) || !config.kappa.within_diameter(d0) ||
       !config.kappa.within_diameter(d1))) {
    report.verdict = Verdict::inconclusive;
    report.note("hypothesis rejected: configuration reaches pi/sqrt(k)");
    return report;
  }

  SampledFunction g, gtilde;
  g.grid = gtilde.grid = path.params;
  for (std::size_t i = 0; i < path.params.size(); ++i) {
    g.values.push_back(model::fk(config.kappa, space.distance(p, path.points[i])));
    gtilde.values.push_back(model::fk(
        config.kappa,
        model::comparison_point_distance(config.kappa, d0, d1, mu, path.params[i])));
  }

  // (a) endpoint matching.
  if (std::fabs(g.values.front() - gtilde.values.front()) > config.tol ||
      std::fabs(g.values.back() - gtilde.values.back()) > config.tol) {
    report.verdict = Verdict::fail;
    report.note("endpoint mismatch between g and the model comparison");
    return report;
  }

  // (b) model identity g~'' + k g~ = 1 at interior grid points.
  const double pitch = gtilde.pitch();
  double worst_identity = 0.0;
  for (std::size_t i = 1; i + 1 < gtilde.grid.size(); ++i) {
    const double t = gtilde.grid[i];
    const double tau = std::min({4.0 * pitch, t - gtilde.grid.front(),
                                 gtilde.grid.back() - t});
    if (tau < pitch) continue;
    const double d2 =
        (gtilde.eval(t + tau) + gtilde.eval(t - tau) - 2.0 * gtilde.values[i]) /
        (tau * tau);
    worst_identity = std::max(
        worst_identity, std::fabs(d2 + config.kappa.k * gtilde.values[i] - 1.0));
  }
  const double identity_bound = config.tol + 10.0 * (4.0 * pitch) * (4.0 * pitch);
  report.note("model identity residual " + std::to_string(worst_identity));
  if (worst_identity > identity_bound) {
    report.verdict = Verdict::fail;
    report.note("model identity g~'' + k g~ = 1 violated beyond discretization");
  }

  // (c) conclusion: g - g~ >= 0 (lower) / <= 0 (upper).
  const double sgn = (config.direction == Direction::lower) ? 1.0 : -1.0;
  Curve curve{"gap", {}};
  for (std::size_t i = 0; i < g.grid.size(); ++i) {
    const double gap = g.values[i] - gtilde.values[i];
    const double margin = sgn * gap;
    curve.points.push_back({g.grid[i], gap, 0.0});
    Witness w{"t=" + std::to_string(g.grid[i]) + " at " +
                  space.describe(path.points[i]),
              g.grid[i], g.values[i], gtilde.values[i], margin,
              static_cast<long>(i)};
    report.record(margin, config.tol, w);
  }
  report.curves.push_back(std::move(curve));
  return report;
}

CheckReport sturm_ratio_check(const SampledFunction& f, model::Kappa kappa,
                              double l, double tol, double corner_tol) {
  CheckReport report;
  report.condition_id = "sturm_ratio";
  report.verdict = Verdict::pass;

  if (kappa.k > 0.0 && !kappa.within_diameter(l)) {
    report.verdict = Verdict::inconclusive;
    report.note("hypothesis rejected: interval length reaches pi/sqrt(k)");
    return report;
  }

  // Corners invalidate the centered differences; defer to verify_barrier.
  for (std::size_t i = 1; i + 1 < f.grid.size(); ++i) {
    const auto taus =
        usable_scales(f, f.grid[i], default_scales(f, f.grid[i]), f.pitch());
    if (corner_jump(f, f.grid[i], taus, corner_tol) != 0.0) {
      report.verdict = Verdict::inconclusive;
      report.note("corner detected at t=" + std::to_string(f.grid[i]) +
                  "; use verify_barrier instead");
      return report;
    }
  }

  const double pitch = f.pitch();
  const double slack = tol + 10.0 * pitch * pitch * std::max(1.0, fmax_abs(f.values));
  Curve zcurve{"sturm_z", {}};
  double prev_z = 0.0;
  bool have_prev = false;
  for (std::size_t i = 1; i + 1 < f.grid.size(); ++i) {
    const double t = f.grid[i];
    const double fp = (f.values[i + 1] - f.values[i - 1]) / (f.grid[i + 1] - f.grid[i - 1]);
    const double z = fp * model::sn(kappa, t) - f.values[i] * model::sn_prime(kappa, t);
    zcurve.points.push_back({t, z, 0.0});
    Witness w{"t=" + std::to_string(t), t, z, 0.0, -z, static_cast<long>(i)};
    report.record(-z, slack, w);  // z <= 0
    if (have_prev) {
      Witness wm{"monotone t=" + std::to_string(t), t, z, prev_z, prev_z - z,
                 static_cast<long>(i)};
      report.record(prev_z - z, slack, wm);  // z non-increasing
    }
    prev_z = z;
    have_prev = true;
  }
  report.curves.push_back(std::move(zcurve));
  if (report.verdict == Verdict::pass) {
    report.note("f(t)/sn_k(t) is non-increasing on the grid");
  }
  return report;
}

}  // namespace complab::support
