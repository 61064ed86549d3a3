#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace complab::spaces {

enum class Side : int { base = 0, mirror = 1 };

/// Space-kind-specific coordinates. The meaning of the fields depends on
/// the catalog kind:
///   segment        a = position in [0, L]
///   k_pod          index = ray id, a = radius
///   flat_cone      a = radius, b = angle in [0, theta_total)
///   sphere         a = polar angle in [0, pi], b = azimuth
///   spherical_cap  a = intrinsic polar radius in [0, rho_c], b = azimuth
///   half_plane     a = x, b = y >= 0
///   flat_disk      a = x, b = y
///   graph          index = vertex id
/// The side tag is only meaningful for doubled spaces.
struct SpacePoint {
  int index = 0;
  double a = 0.0;
  double b = 0.0;
  Side side = Side::base;
};

bool lex_less(const SpacePoint& lhs, const SpacePoint& rhs);

/// Arc-length-parameterized minimal geodesic sample. `eval` evaluates the
/// path at any parameter in [0, length]; for graph-backed spaces it snaps to
/// the nearest subdivided vertex and `snap_pitch` reports the snap scale.
struct GeodesicPath {
  SpacePoint start, end;
  double length = 0.0;
  std::vector<double> params;
  std::vector<SpacePoint> points;
  std::function<SpacePoint(double)> eval;
  double snap_pitch = 0.0;

  SpacePoint at(double t) const;
};

GeodesicPath make_sampled_path(const SpacePoint& x, const SpacePoint& y,
                               double length, double step,
                               std::function<SpacePoint(double)> eval,
                               double snap_pitch = 0.0);

/// One-dimensional parameterization of a declared continuous boundary.
struct BoundaryCurve {
  double length = 0.0;
  bool closed = false;
  std::function<SpacePoint(double)> at;
};

class Space {
 public:
  virtual ~Space() = default;

  virtual std::string kind() const = 0;
  virtual double distance(const SpacePoint& x, const SpacePoint& y) const = 0;

  /// All distinct minimal geodesics the catalog kind can enumerate between
  /// x and y, deterministically ordered. Most kinds return exactly one.
  virtual std::vector<GeodesicPath> geodesics(const SpacePoint& x,
                                              const SpacePoint& y,
                                              double step) const = 0;

  /// Deterministic first choice of `geodesics`.
  GeodesicPath geodesic(const SpacePoint& x, const SpacePoint& y,
                        double step) const;

  virtual SpacePoint sample(std::mt19937_64& rng) const = 0;
  virtual void validate(const SpacePoint& p) const = 0;

  virtual bool has_boundary() const { return false; }
  /// Nonempty for spaces whose boundary is a finite point set.
  virtual std::vector<SpacePoint> boundary_finite() const { return {}; }
  virtual std::optional<BoundaryCurve> boundary_curve() const {
    return std::nullopt;
  }
  /// n points sampling the declared boundary (empty list if no boundary).
  std::vector<SpacePoint> boundary_points(int n) const;

  /// Distinguished singular points (cone apex, k-pod center). Used by the
  /// condition harness to build accumulating check families.
  virtual std::vector<SpacePoint> special_points() const { return {}; }

  /// Positive for graph-backed spaces: the subdivision pitch below which
  /// interior samples are not trustworthy.
  virtual double discretization_pitch() const { return 0.0; }

  virtual std::string describe(const SpacePoint& p) const;
};

using SpacePtr = std::shared_ptr<const Space>;

/// Catalog constructor; see the space specification schema in the CLI docs.
SpacePtr build_space(const nlohmann::json& spec);

/// Graph spaces only: splits every edge into segments of length <= h.
SpacePtr subdivide(const SpacePtr& space, double h);

// Direct constructors for the analytic catalog.
SpacePtr make_segment(double length);
SpacePtr make_k_pod(int rays, double ray_length);
SpacePtr make_flat_cone(double theta_total, double r_max = 1.0);
SpacePtr make_sphere(double k);
SpacePtr make_spherical_cap(double k, double polar_radius);
SpacePtr make_half_plane(double extent);
SpacePtr make_flat_disk(double radius);

struct GraphEdge {
  int u = 0, v = 0;
  double weight = 0.0;
};
SpacePtr make_graph(int vertex_count, const std::vector<GraphEdge>& edges,
                    const std::vector<int>& boundary_vertices);

}  // namespace complab::spaces
