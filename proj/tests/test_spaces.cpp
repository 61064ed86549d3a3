#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "complab/graph_space.hpp"
#include "complab/space.hpp"

using namespace complab::spaces;

namespace {

constexpr double kPi = std::numbers::pi;

void check_metric_axioms(const Space& space, int pairs = 1000,
                         double tol = 1e-9) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < pairs; ++i) {
    const auto x = space.sample(rng);
    const auto y = space.sample(rng);
    const auto z = space.sample(rng);
    const double xy = space.distance(x, y);
    CHECK(xy >= 0.0);
    CHECK(space.distance(y, x) == doctest::Approx(xy).epsilon(1e-14));
    CHECK(space.distance(x, x) == 0.0);
    CHECK(xy <= space.distance(x, z) + space.distance(z, y) + tol);
  }
}

void check_geodesic_minimality(const Space& space, int pairs = 50,
                               double tol = 1e-9) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < pairs; ++i) {
    const auto x = space.sample(rng);
    const auto y = space.sample(rng);
    if (space.distance(x, y) < 1e-6) continue;
    for (const auto& g : space.geodesics(x, y, 0.05)) {
      CHECK(space.distance(g.start, g.end) ==
            doctest::Approx(g.length).epsilon(1e-12));
      for (std::size_t a = 0; a < g.params.size(); a += 3) {
        for (std::size_t b = a; b < g.params.size(); b += 5) {
          const double want = std::fabs(g.params[a] - g.params[b]);
          CHECK(space.distance(g.points[a], g.points[b]) ==
                doctest::Approx(want).epsilon(1e-9).scale(1.0));
          (void)want;
          (void)tol;
        }
      }
    }
  }
}

}  // namespace

TEST_CASE("segment basics") {
  auto seg = make_segment(1.0);
  CHECK(seg->distance({0, 0.2, 0}, {0, 0.9, 0}) == doctest::Approx(0.7));
  auto g = seg->geodesic({0, 0.2, 0}, {0, 0.9, 0}, 0.1);
  CHECK(g.length == doctest::Approx(0.7));
  CHECK(g.at(0.35).a == doctest::Approx(0.55));
  auto b = seg->boundary_points(5);
  REQUIRE(b.size() == 2);
  CHECK(b[0].a == 0.0);
  CHECK(b[1].a == 1.0);
  CHECK_THROWS_AS((void)seg->distance({0, 1.5, 0}, {0, 0.5, 0}),
                  std::domain_error);
  check_metric_axioms(*seg);
  check_geodesic_minimality(*seg);
}

TEST_CASE("k-pod distances and geodesics") {
  auto pod = make_k_pod(3, 10.0);
  CHECK(pod->distance({1, 2.0, 0}, {2, 3.0, 0}) == doctest::Approx(5.0));
  CHECK(pod->distance({1, 2.0, 0}, {1, 3.0, 0}) == doctest::Approx(1.0));
  CHECK(pod->distance({0, 0.0, 0}, {2, 3.0, 0}) == doctest::Approx(3.0));

  // The cross-ray geodesic passes the common point at the first radius.
  auto g = pod->geodesic({1, 1.0, 0}, {2, 1.0, 0}, 0.01);
  CHECK(g.length == doctest::Approx(2.0));
  auto mid = g.at(1.0);
  CHECK(mid.a == doctest::Approx(0.0));
  CHECK(g.at(1.5).index == 2);
  CHECK(g.at(1.5).a == doctest::Approx(0.5));

  REQUIRE(pod->special_points().size() == 1);
  CHECK(pod->special_points()[0].a == 0.0);
  CHECK_THROWS_AS(make_k_pod(1, 1.0), std::invalid_argument);
  check_metric_axioms(*pod);
  check_geodesic_minimality(*pod);
}

TEST_CASE("flat cone unrolling dichotomy") {
  auto narrow = make_flat_cone(1.5 * kPi, 2.0);
  // Angular gap 3pi/4 < pi: planar chord after unrolling.
  CHECK(narrow->distance({0, 1.0, 0.0}, {0, 1.0, 0.75 * kPi}) ==
        doctest::Approx(std::sqrt(2.0 - 2.0 * std::cos(0.75 * kPi)))
            .epsilon(1e-12));
  // Generic chord against the planar law of cosines.
  const double r1 = 1.0, r2 = 1.3, gap = 0.8;
  CHECK(narrow->distance({0, r1, 0.1}, {0, r2, 0.1 + gap}) ==
        doctest::Approx(std::sqrt(r1 * r1 + r2 * r2 -
                                  2.0 * r1 * r2 * std::cos(gap)))
            .epsilon(1e-12));

  auto wide = make_flat_cone(2.5 * kPi, 2.0);
  // Gap 5pi/4 >= pi: the geodesic passes the apex.
  CHECK(wide->distance({0, 1.0, 0.0}, {0, 1.0, 1.25 * kPi}) ==
        doctest::Approx(2.0).epsilon(1e-14));
  auto g = wide->geodesic({0, 1.0, 0.0}, {0, 1.0, 1.25 * kPi}, 0.01);
  CHECK(g.at(1.0).a == doctest::Approx(0.0).scale(1.0));

  // Equal angular routes enumerate both unrollings.
  auto tie = narrow->geodesics({0, 1.0, 0.0}, {0, 1.0, 0.75 * kPi}, 0.01);
  CHECK(tie.size() == 2);

  CHECK(wide->special_points().size() == 1);
  check_metric_axioms(*narrow);
  check_metric_axioms(*wide);
  check_geodesic_minimality(*narrow);
  check_geodesic_minimality(*wide);
}

TEST_CASE("sphere distances and geodesics") {
  auto sph = make_sphere(1.0);
  // Pole to equator.
  CHECK(sph->distance({0, 0.0, 0.0}, {0, kPi / 2.0, 1.0}) ==
        doctest::Approx(kPi / 2.0).epsilon(1e-14));
  // Against a 3D dot-product oracle at (theta, phi) = (0.3, 0.2), (1.1, 2.0).
  CHECK(sph->distance({0, 0.3, 0.2}, {0, 1.1, 2.0}) ==
        doctest::Approx(1.1880184405336470).epsilon(1e-13));
  // Antipodal points admit two enumerated arcs.
  auto both = sph->geodesics({0, 0.2, 0.4}, {0, kPi - 0.2, 0.4 + kPi}, 0.05);
  CHECK(both.size() == 2);
  for (const auto& g : both) CHECK(g.length == doctest::Approx(kPi));

  auto g = sph->geodesic({0, 0.0, 0.0}, {0, 2.0, 1.0}, 0.05);
  CHECK(sph->distance(g.at(0.5), g.at(1.5)) == doctest::Approx(1.0));

  // Scaled curvature: k = 4 halves all lengths.
  auto small = make_sphere(4.0);
  CHECK(small->distance({0, 0.0, 0.0}, {0, kPi / 4.0, 0.3}) ==
        doctest::Approx(kPi / 4.0).epsilon(1e-13));
  check_metric_axioms(*sph);
  check_geodesic_minimality(*sph);
}

TEST_CASE("spherical cap restriction and boundary") {
  auto cap = make_spherical_cap(1.0, kPi / 2.0);
  CHECK(cap->has_boundary());
  auto rim = cap->boundary_points(8);
  REQUIRE(rim.size() == 8);
  for (const auto& p : rim) CHECK(p.a == doctest::Approx(kPi / 2.0));
  // Hemisphere rim: quarter-circle separation along the equator.
  CHECK(cap->distance(rim[0], rim[2]) == doctest::Approx(kPi / 2.0));
  CHECK_THROWS_AS(make_spherical_cap(1.0, 0.6 * kPi), std::invalid_argument);
  CHECK_THROWS_AS((void)cap->distance({0, kPi / 2.0 + 0.1, 0.0}, {0, 0.1, 0.0}),
                  std::domain_error);
  check_metric_axioms(*cap);
  check_geodesic_minimality(*cap);
}

TEST_CASE("half plane and disk") {
  auto hp = make_half_plane(10.0);
  CHECK(hp->distance({0, 0.0, 1.0}, {0, 3.0, 5.0}) == doctest::Approx(5.0));
  CHECK(hp->has_boundary());
  auto curve = hp->boundary_curve();
  REQUIRE(curve.has_value());
  auto bp = hp->boundary_points(11);
  for (const auto& p : bp) CHECK(p.b == doctest::Approx(0.0));

  auto disk = make_flat_disk(1.0);
  CHECK(disk->distance({0, -0.5, 0.0}, {0, 0.5, 0.0}) == doctest::Approx(1.0));
  auto rimc = disk->boundary_curve();
  REQUIRE(rimc.has_value());
  CHECK(rimc->closed);
  CHECK(rimc->length == doctest::Approx(2.0 * kPi));
  auto rim = disk->boundary_points(8);
  for (const auto& p : rim) {
    CHECK(std::hypot(p.a, p.b) == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS((void)disk->distance({0, 1.2, 0.0}, {0, 0.0, 0.0}),
                  std::domain_error);
  check_metric_axioms(*hp);
  check_metric_axioms(*disk);
  check_geodesic_minimality(*disk);
}

TEST_CASE("graph shortest paths") {
  // Two routes between 0 and 2: direct weight 0.8 vs 0.3 + 0.4.
  auto g = make_graph(3, {{0, 1, 0.3}, {1, 2, 0.4}, {0, 2, 0.8}}, {0});
  CHECK(g->distance({0, 0, 0}, {2, 0, 0}) == doctest::Approx(0.7));

  auto tri = make_graph(3, {{0, 1, 3.0}, {1, 2, 4.0}, {0, 2, 5.0}}, {});
  CHECK(tri->distance({0, 0, 0}, {2, 0, 0}) == doctest::Approx(5.0));

  // Subdivision preserves original distances exactly.
  auto fine = subdivide(tri, 0.5);
  CHECK(fine->distance({0, 0, 0}, {2, 0, 0}) == doctest::Approx(5.0));
  CHECK(fine->distance({0, 0, 0}, {1, 0, 0}) == doctest::Approx(3.0));
  CHECK(fine->discretization_pitch() <= 0.5 + 1e-12);

  // Single edge split into 4 pieces.
  auto edge = subdivide(make_graph(2, {{0, 1, 1.0}}, {0, 1}), 0.25);
  auto graph = std::dynamic_pointer_cast<const GraphSpace>(edge);
  REQUIRE(graph);
  CHECK(graph->vertex_count() == 5);
  CHECK(graph->vertex_distance(0, 1) == doctest::Approx(1.0));
  CHECK(graph->boundary_vertices() == std::vector<int>{0, 1});

  // Star-graph tripod matches the analytic closed form at interior samples.
  auto star = subdivide(
      make_graph(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}}, {}), 0.125);
  auto sg = std::dynamic_pointer_cast<const GraphSpace>(star);
  REQUIRE(sg);
  // Vertex 4 starts the subdivision points of the first edge.
  const double d14 = sg->vertex_distance(1, 2);
  CHECK(d14 == doctest::Approx(2.0));

  CHECK_THROWS_AS(make_graph(4, {{0, 1, 1.0}}, {}), std::invalid_argument);
  CHECK_THROWS_AS(make_graph(2, {{0, 1, -1.0}}, {}), std::invalid_argument);
  CHECK_THROWS_AS(subdivide(make_segment(1.0), 0.1), std::domain_error);
  check_metric_axioms(*fine, 300, 0.0);
}

TEST_CASE("graph geodesics are deterministic") {
  // Two equal-length routes 0-1-3 and 0-2-3; the tie must resolve the same
  // way on every run.
  auto g = make_graph(4, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 3, 1.0}, {2, 3, 1.0}},
                      {});
  auto gs = std::dynamic_pointer_cast<const GraphSpace>(g);
  REQUIRE(gs);
  const auto p1 = gs->shortest_path(0, 3);
  const auto p2 = gs->shortest_path(0, 3);
  CHECK(p1 == p2);
  CHECK(p1 == std::vector<int>{0, 1, 3});  // smaller predecessor id wins
}

TEST_CASE("build_space JSON schema") {
  using nlohmann::json;
  CHECK(build_space(json::parse(R"({"kind":"segment","params":{"L":2}})"))
            ->kind() == "segment");
  CHECK(build_space(json::parse(R"({"kind":"k_pod","m":3,"R":1})"))->kind() ==
        "k_pod");
  CHECK(build_space(json::parse(R"({"kind":"flat_cone","theta_total":4.0})"))
            ->kind() == "flat_cone");
  CHECK(build_space(json::parse(R"({"kind":"sphere","k":1})"))->kind() ==
        "sphere");
  CHECK(build_space(
            json::parse(R"({"kind":"spherical_cap","k":1,"rho_c":1.0})"))
            ->kind() == "spherical_cap");
  CHECK(build_space(json::parse(R"({"kind":"half_plane","extent":5})"))
            ->kind() == "half_plane");
  CHECK(build_space(json::parse(R"({"kind":"flat_disk","R":1})"))->kind() ==
        "flat_disk");
  auto graph = build_space(json::parse(
      R"({"kind":"graph","n":3,"edges":[[0,1,1.0],[1,2,1.0]],"boundary":[0,2],"h":0.5})"));
  CHECK(graph->kind() == "graph");
  CHECK(graph->has_boundary());
  CHECK_THROWS_AS(build_space(json::parse(R"({"kind":"moebius"})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_space(json::parse(R"({"kind":"segment","L":-1})")),
                  std::invalid_argument);
}

TEST_CASE("degenerate geodesic requests are rejected") {
  auto seg = make_segment(1.0);
  CHECK_THROWS_AS((void)seg->geodesic({0, 0.5, 0}, {0, 0.5, 0}, 0.1),
                  std::domain_error);
  auto sph = make_sphere(1.0);
  CHECK_THROWS_AS((void)sph->geodesic({0, 0.3, 0.1}, {0, 0.3, 0.1}, 0.1),
                  std::domain_error);
}
