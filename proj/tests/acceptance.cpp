// Acceptance gate: one self-contained scenario per line, each exercising the
// toolkit end to end against independently derivable reference values.

#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "complab/conditions.hpp"
#include "complab/doubling.hpp"
#include "complab/supportsense.hpp"

using namespace complab;
using spaces::Side;
using spaces::SpacePoint;

namespace {

constexpr double kPi = std::numbers::pi;

int g_checks_failed = 0;

bool expect(bool ok, const std::string& what) {
  if (!ok) {
    std::cerr << "    check failed: " << what << "\n";
    ++g_checks_failed;
  }
  return ok;
}

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

// --------------------------------------------------------------------------

bool model_surface_fidelity() {
  bool ok = true;
  for (double k : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    model::Kappa kappa{k};
    for (double rho = 0.05; rho < 2.0; rho += 0.07) {
      if (kappa.positive() && !kappa.within_diameter(rho)) continue;
      const double s = model::sn(kappa, rho);
      const double sp = model::sn_prime(kappa, rho);
      ok &= expect(near(sp * sp + k * s * s, 1.0, 1e-11), "sn identity");
      ok &= expect(
          near(model::fk_inverse(kappa, model::fk(kappa, rho)), rho, 1e-9),
          "f_k inverse round trip");
    }
    for (double a : {0.3, 0.9}) {
      for (double b : {0.4, 1.1}) {
        if (kappa.positive() && !kappa.within_diameter(a + b + 1e-6)) continue;
        ok &= expect(
            near(model::model_side(kappa, a, b, 0.0), std::fabs(a - b), 1e-10),
            "degenerate side at angle 0");
        ok &= expect(near(model::model_side(kappa, a, b, kPi), a + b, 1e-10),
                     "degenerate side at angle pi");
        for (int i = 1; i < 6; ++i) {
          const double theta = kPi * i / 6.0;
          const double c = model::model_side(kappa, a, b, theta);
          ok &= expect(near(model::model_angle(kappa, a, b, c), theta, 1e-8),
                       "side/angle inverse consistency");
        }
      }
    }
  }
  ok &= expect(near(model::model_side(model::Kappa{0.0}, 3.0, 4.0, kPi / 2.0),
                    5.0, 1e-12),
               "flat 3-4-5 triangle");
  return ok;
}

bool sphere_matches_its_own_model() {
  auto sph = spaces::make_sphere(1.0);
  CheckConfig config;
  config.kappa = model::Kappa{1.0};
  config.triple_samples = 500;
  auto r = cond::run_condition(*sph, config, "condition_1");
  bool ok = expect(r.verdict == Verdict::pass, "sphere distance comparison");
  ok &= expect(r.worst_margin >= -1e-7, "sphere margin within 1e-7");
  ok &= expect(r.cases_checked >= 500, "enough sampled cases");
  return ok;
}

bool cone_angle_dichotomy() {
  bool ok = true;
  CheckConfig config;
  config.triple_samples = 150;

  // Total angle below 2 pi: nonnegatively curved, all lower checks pass.
  auto narrow = spaces::make_flat_cone(1.5 * kPi, 2.0);
  for (const std::string id : {"condition_1", "condition_2", "condition_A"}) {
    ok &= expect(
        cond::run_condition(*narrow, config, id).verdict == Verdict::pass,
        "narrow cone " + id);
  }

  // Total angle above 2 pi: geodesics through the apex break every check.
  auto wide = spaces::make_flat_cone(2.5 * kPi, 2.0);
  std::vector<cond::Triple> apex_triples = {
      {{0, 1.0, 0.6 * kPi}, {0, 1.0, 0.0}, {0, 1.0, 1.2 * kPi}}};
  auto r1 = cond::check_condition_1(*wide, config, apex_triples);
  ok &= expect(r1.verdict == Verdict::fail, "wide cone distance comparison");
  bool apex_witness = false;
  for (const auto& w : r1.witnesses) {
    apex_witness = apex_witness || w.where.find("s=(r=0,") != std::string::npos;
  }
  ok &= expect(apex_witness, "witness passes the apex");
  const double pq = std::sqrt(2.0 - 2.0 * std::cos(0.6 * kPi));
  ok &= expect(near(r1.worst_margin, 1.0 - std::sqrt(pq * pq - 1.0), 1e-9),
               "wide cone collapse amount");

  auto ray = wide->geodesic({0, 1.0, 0.0}, {0, 1.0, 1.2 * kPi}, 0.01);
  ok &= expect(cond::check_condition_2_monotone(*wide, config,
                                                {0, 1.0, 0.6 * kPi}, ray,
                                                {0, 1.0, 1.2 * kPi})
                       .verdict == Verdict::fail,
               "wide cone angle monotonicity");
  ok &= expect(cond::check_condition_A(*wide, config, {0, 1.0, 0.6 * kPi}, ray,
                                       {0, 1.0, 1.2 * kPi})
                       .verdict == Verdict::fail,
               "wide cone first-order defect");
  return ok;
}

bool tripod_uniformity_gap() {
  auto pod = spaces::make_k_pod(3, 2.0);
  CheckConfig config;
  const SpacePoint p{2, 1.0, 0.0};
  bool ok = true;

  std::vector<cond::FamilyMember> family;
  for (int i = 1; i <= 8; ++i) {
    const double h = std::ldexp(1.0, -i);
    const std::string label = "h=" + std::to_string(h);
    cond::FamilyMember m;
    m.p = p;
    m.ray = pod->geodesic({0, h, 0.0}, {1, 1.0, 0.0}, 0.01);
    m.label = label;
    family.push_back(std::move(m));

    // Every member passes on its own once delta shrinks below its offset.
    auto single = cond::check_condition_B(*pod, config, p, family.back().ray, h);
    ok &= expect(single.verdict == Verdict::pass,
                 "member " + label + " passes at delta = h");
  }

  // No delta from the candidate ladder survives the whole family: the member
  // with h = delta / 2 fails at scale exactly 2h with cosine residual
  // 1 / (1 + h).
  for (int m = 1; m <= 7; ++m) {
    const double delta = std::ldexp(1.0, -m);
    const double h = 0.5 * delta;
    auto part =
        cond::check_condition_B(*pod, config, p, family[m].ray, delta);
    ok &= expect(part.verdict == Verdict::fail,
                 "delta = 2^-" + std::to_string(m) + " refuted");
    const double residual = config.epsilon - part.worst_margin;
    ok &= expect(near(residual, 1.0 / (1.0 + h), 1e-9),
                 "collapse residual at scale 2h");
  }

  config.delta_candidates = std::vector<double>{
      0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125};
  auto r = cond::check_condition_B_uniform(*pod, config, family);
  ok &= expect(r.verdict == Verdict::fail, "no uniform delta for the family");
  ok &= expect(!r.witnesses.empty() &&
                   r.witnesses.front().where.find("delta=") == 0,
               "witness names the refuted delta");
  return ok;
}

bool angle_additivity_split() {
  bool ok = true;
  CheckConfig config;

  auto hp = spaces::make_half_plane(10.0);
  auto line = hp->geodesic({0, -1.0, 0.0}, {0, 1.0, 0.0}, 0.01);
  auto flat = cond::check_angle_additivity(*hp, config, {0, 0.0, 1.0}, line, 1.0);
  ok &= expect(flat.verdict == Verdict::pass, "plane additivity");
  double flat_sum = 0.0;
  if (!flat.curves.empty()) {
    for (const auto& pt : flat.curves.front().points) flat_sum += pt.value;
  }
  ok &= expect(near(flat_sum, kPi, 1e-9), "plane one-sided angles sum to pi");

  auto pod = spaces::make_k_pod(3, 2.0);
  auto cross = pod->geodesic({0, 1.0, 0.0}, {1, 1.0, 0.0}, 0.01);
  auto branch =
      cond::check_angle_additivity(*pod, config, {2, 1.0, 0.0}, cross, 1.0);
  ok &= expect(branch.verdict == Verdict::fail, "tripod additivity fails");
  ok &= expect(!branch.witnesses.empty() &&
                   near(branch.witnesses.front().lhs, 2.0 * kPi, 1e-6),
               "tripod one-sided angles sum to 2 pi");
  return ok;
}

bool barrier_corpus() {
  bool ok = true;
  auto smooth = support::SampledFunction::tabulate(
      [](double t) { return std::sin(kPi * t / 3.0); }, 0.0, 3.0, 600);
  ok &= expect(support::verify_barrier(smooth, model::Kappa{1.0},
                                       Direction::lower, 3.0)
                       .verdict == Verdict::pass,
               "smooth positive-curvature barrier");
  auto convex = support::SampledFunction::tabulate(
      [](double t) { return -0.5 * t * (2.0 - t); }, 0.0, 2.0, 400);
  ok &= expect(support::verify_barrier(convex, model::Kappa{0.0},
                                       Direction::lower, 2.0)
                       .verdict == Verdict::fail,
               "convex input rejected");
  auto at_diameter = support::SampledFunction::tabulate(
      [](double t) { return std::sin(t); }, 0.0, kPi, 400);
  ok &= expect(support::verify_barrier(at_diameter, model::Kappa{1.0},
                                       Direction::lower, kPi)
                       .verdict == Verdict::inconclusive,
               "diameter-length interval rejected as hypothesis");

  // 50 random concave piecewise-linear functions with zero endpoints and
  // declared kinks all pass.
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  int passed = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const double l = 2.0;
    const int kinks = 1 + trial % 4;
    std::vector<double> xs = {0.0};
    for (int i = 1; i <= kinks; ++i) xs.push_back(l * i / (kinks + 1.0));
    xs.push_back(l);
    std::vector<double> slopes;
    double s = 1.0 + u(rng);
    for (int i = 0; i <= kinks; ++i) {
      slopes.push_back(s);
      s -= u(rng);
    }
    double total = 0.0;
    for (int i = 0; i <= kinks; ++i) total += slopes[i] * (xs[i + 1] - xs[i]);
    for (double& sl : slopes) sl -= total / l;

    support::SampledFunction f;
    const int per = 50;
    double y = 0.0;
    for (int seg = 0; seg <= kinks; ++seg) {
      for (int j = 0; j < per; ++j) {
        const double t =
            xs[seg] + (xs[seg + 1] - xs[seg]) * static_cast<double>(j) / per;
        f.grid.push_back(t);
        f.values.push_back(y + slopes[seg] * (t - xs[seg]));
      }
      y += slopes[seg] * (xs[seg + 1] - xs[seg]);
      if (seg < kinks) f.exceptional.push_back(static_cast<int>(f.grid.size()));
    }
    f.grid.push_back(l);
    f.values.push_back(0.0);
    if (support::verify_barrier(f, model::Kappa{0.0}, Direction::lower, l)
            .verdict == Verdict::pass) {
      ++passed;
    }
  }
  ok &= expect(passed == 50, "piecewise-linear concave corpus (50 functions)");
  return ok;
}

bool energy_and_gap_pipeline() {
  bool ok = true;
  CheckConfig spherical;
  spherical.kappa = model::Kappa{1.0};
  auto sph = spaces::make_sphere(1.0);
  auto equator = sph->geodesic({0, kPi / 2.0, 0.0}, {0, kPi / 2.0, 1.0}, 0.005);
  ok &= expect(support::geodesic_energy_check(*sph, spherical, {0, 0.0, 0.0},
                                              equator)
                       .verdict == Verdict::pass,
               "energy bound on the sphere");

  CheckConfig flat;
  auto hp = spaces::make_half_plane(10.0);
  auto line = hp->geodesic({0, -1.0, 0.0}, {0, 2.0, 0.0}, 0.005);
  ok &= expect(
      support::geodesic_energy_check(*hp, flat, {0, 0.0, 1.0}, line).verdict ==
          Verdict::pass,
      "energy bound in the plane");
  ok &= expect(
      support::comparison_gap_check(*hp, flat, {0, 0.0, 1.0}, line).verdict ==
          Verdict::pass,
      "zero gap in the plane");

  // Tripod: the distance to the third tip dips to 1 at the center while the
  // flat comparison chord is at sqrt(3), so with the quadratic potential the
  // gap bottoms out at exactly (1^2 - 3) / 2 = -1.
  auto pod = spaces::make_k_pod(3, 2.0);
  auto cross = pod->geodesic({0, 1.0, 0.0}, {1, 1.0, 0.0}, 0.005);
  auto gap = support::comparison_gap_check(*pod, flat, {2, 1.0, 0.0}, cross);
  ok &= expect(gap.verdict == Verdict::fail, "tripod gap fails");
  double worst_gap = 0.0;
  for (const auto& c : gap.curves) {
    for (const auto& p : c.points) worst_gap = std::min(worst_gap, p.value);
  }
  ok &= expect(near(worst_gap, -1.0, 1e-9), "gap bottoms out at -1");
  const double g_mid =
      model::fk(flat.kappa, pod->distance({2, 1.0, 0.0}, cross.at(1.0)));
  const double gtilde_mid =
      model::fk(flat.kappa,
                model::comparison_point_distance(flat.kappa, 2.0, 2.0, 2.0, 1.0));
  ok &= expect(near(g_mid, 0.5, 1e-9) && near(gtilde_mid, 1.5, 1e-9),
               "midpoint potentials 1/2 vs 3/2");
  // The pointwise energy pathway agrees: the convex kink of the potential at
  // the branch point breaks the second-difference bound too.
  ok &= expect(support::geodesic_energy_check(*pod, flat, {2, 1.0, 0.0}, cross)
                       .verdict == Verdict::fail,
               "tripod energy bound fails at the branch point");
  return ok;
}

bool doubling_theorem_harness() {
  bool ok = true;
  // Doubled segment: exact circle formula.
  doubling::DoubledSpace circle(spaces::make_segment(1.0));
  for (double a = 0.1; a < 1.0; a += 0.2) {
    for (double b = 0.1; b < 1.0; b += 0.2) {
      ok &= expect(near(circle.distance({0, a, 0, Side::base},
                                        {0, b, 0, Side::mirror}),
                        std::min(a + b, 2.0 - a - b), 1e-12),
                   "circle distance");
    }
  }
  // Doubled half plane: reflection formula.
  doubling::DoubledSpace dhp(spaces::make_half_plane(10.0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(-3.0, 3.0), uy(0.05, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double x1 = ux(rng), y1 = uy(rng), x2 = ux(rng), y2 = uy(rng);
    ok &= expect(near(dhp.distance({0, x1, y1, Side::base},
                                   {0, x2, y2, Side::mirror}),
                      std::hypot(x1 - x2, y1 + y2), 1e-6),
                 "reflection distance");
  }
  // Doubled hemisphere equals the round sphere.
  doubling::DoubledSpace dcap(spaces::make_spherical_cap(1.0, kPi / 2.0));
  auto sph = spaces::make_sphere(1.0);
  std::uniform_real_distribution<double> urho(0.1, kPi / 2.0 - 0.05);
  std::uniform_real_distribution<double> uphi(0.0, 2.0 * kPi);
  for (int i = 0; i < 50; ++i) {
    const double r1 = urho(rng), f1 = uphi(rng);
    const double r2 = urho(rng), f2 = uphi(rng);
    ok &= expect(near(dcap.distance({0, r1, f1, Side::base},
                                    {0, r2, f2, Side::mirror}),
                      sph->distance({0, r1, f1}, {0, kPi - r2, f2}), 1e-6),
                 "hemisphere doubling");
  }
  // Preservation harness on flat bases with boundary, 500 triples each.
  CheckConfig config;
  config.triple_samples = 500;
  for (const auto& base :
       {spaces::make_segment(1.0), spaces::make_half_plane(4.0),
        spaces::make_flat_disk(1.0)}) {
    auto r = doubling::check_doubling_theorem(base, config);
    ok &= expect(r.verdict == Verdict::pass,
                 "doubling preserves the bound for " + base->kind());
    ok &= expect(r.cases_checked >= 500, "enough doubled samples");
  }
  // Minimal cross geodesics cross the glued boundary at most once.
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    SpacePoint x = {0, ux(rng), uy(rng), Side::base};
    SpacePoint y = {0, ux(rng), uy(rng), Side::mirror};
    if (dhp.distance(x, y) < 0.1) continue;
    auto info = doubling::crossing_count(dhp, dhp.geodesic(x, y, 0.01));
    ok &= expect(info.count <= 1, "single crossing");
    ++checked;
  }
  ok &= expect(checked >= 150, "enough crossing samples");
  return ok;
}

bool direction_duality() {
  bool ok = true;
  auto sph = spaces::make_sphere(1.0);
  CheckConfig config;
  config.kappa = model::Kappa{1.0};
  config.triple_samples = 200;
  for (auto dir : {Direction::lower, Direction::upper}) {
    CheckConfig c = config;
    c.direction = dir;
    ok &= expect(
        cond::run_condition(*sph, c, "condition_1").verdict == Verdict::pass,
        "sphere passes in direction " + to_string(dir));
  }
  // The narrow cone concentrates positive curvature at the apex: the upper
  // comparison against the flat model fails around it.
  auto narrow = spaces::make_flat_cone(1.5 * kPi, 2.0);
  CheckConfig upper;
  upper.direction = Direction::upper;
  std::vector<cond::Triple> triples = {
      {{0, 1.0, 0.5 * kPi}, {0, 1.0, 0.0}, {0, 1.0, kPi}}};
  auto r = cond::check_condition_1(*narrow, upper, triples);
  ok &= expect(r.verdict == Verdict::fail, "narrow cone fails upward");
  ok &= expect(near(r.worst_margin, std::sqrt(1.5) - std::sqrt(2.5), 1e-9),
               "upward failure amount");
  return ok;
}

bool deterministic_reports() {
  auto sph = spaces::make_sphere(1.0);
  CheckConfig config;
  config.kappa = model::Kappa{1.0};
  config.triple_samples = 100;
  config.seed = 42;
  bool ok = true;
  for (const std::string id : {"condition_1", "condition_B", "angle_additivity"}) {
    const auto a = cond::run_condition(*sph, config, id).to_json_string();
    const auto b = cond::run_condition(*sph, config, id).to_json_string();
    ok &= expect(!a.empty() && a == b, "byte-identical " + id + " reports");
  }
  auto seg = spaces::make_segment(1.0);
  CheckConfig flat;
  flat.triple_samples = 100;
  flat.seed = 42;
  const auto a = doubling::check_doubling_theorem(seg, flat).to_json_string();
  const auto b = doubling::check_doubling_theorem(seg, flat).to_json_string();
  ok &= expect(a == b, "byte-identical doubling reports");
  return ok;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<bool()>>> criteria = {
      {"model surface trigonometry matches closed forms", model_surface_fidelity},
      {"sphere satisfies its own curvature bound", sphere_matches_its_own_model},
      {"cone apex dichotomy (narrow passes, wide fails)", cone_angle_dichotomy},
      {"tripod defeats every uniform angle radius", tripod_uniformity_gap},
      {"one-sided angles: plane adds to pi, tripod to 2 pi",
       angle_additivity_split},
      {"differential barrier checks (smooth + piecewise linear corpus)",
       barrier_corpus},
      {"energy and comparison-gap pipeline", energy_and_gap_pipeline},
      {"doubling preserves the curvature bound", doubling_theorem_harness},
      {"direction duality (lower vs upper comparisons)", direction_duality},
      {"seeded runs are byte-identical", deterministic_reports},
  };

  int failures = 0;
  for (const auto& [name, run] : criteria) {
    bool ok = false;
    try {
      ok = run();
    } catch (const std::exception& e) {
      std::cerr << "    exception: " << e.what() << "\n";
      ok = false;
    }
    std::cout << (ok ? "PASS" : "FAIL") << ": " << name << "\n";
    if (!ok) ++failures;
  }
  if (failures != 0) {
    std::cout << failures << " of " << criteria.size()
              << " acceptance criteria failed (" << g_checks_failed
              << " individual checks)\n";
    return 1;
  }
  std::cout << "all " << criteria.size() << " acceptance criteria passed\n";
  return 0;
}
