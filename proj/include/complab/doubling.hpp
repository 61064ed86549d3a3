#pragma once

#include <optional>

#include <nlohmann/json_fwd.hpp>

#include "complab/graph_space.hpp"
#include "complab/report.hpp"
#include "complab/space.hpp"

namespace complab::doubling {

/// Two copies of a base space with boundary, glued along the boundary.
/// Same-side distances are the base distances; cross-side distances minimize
/// |xz| + |zy| over boundary points z (exact for graph bases via a glued
/// graph, sampled + locally refined for analytic boundaries).
class DoubledSpace final : public spaces::Space {
 public:
  explicit DoubledSpace(spaces::SpacePtr base, int boundary_resolution = 256);

  std::string kind() const override { return "double"; }
  double distance(const spaces::SpacePoint& x,
                  const spaces::SpacePoint& y) const override;
  std::vector<spaces::GeodesicPath> geodesics(const spaces::SpacePoint& x,
                                              const spaces::SpacePoint& y,
                                              double step) const override;
  spaces::SpacePoint sample(std::mt19937_64& rng) const override;
  void validate(const spaces::SpacePoint& p) const override;
  std::vector<spaces::SpacePoint> special_points() const override;
  double discretization_pitch() const override;
  std::string describe(const spaces::SpacePoint& p) const override;

  const spaces::SpacePtr& base() const { return base_; }
  int boundary_resolution() const { return n_b_; }

  /// Cross-side distance between base-coordinate points, with the achieved
  /// boundary point (the crossing witness).
  double cross_distance(const spaces::SpacePoint& x, const spaces::SpacePoint& y,
                        spaces::SpacePoint* argmin = nullptr) const;

  /// Distance from a base-coordinate point to the glued boundary.
  double boundary_distance(const spaces::SpacePoint& x) const;

 private:
  spaces::SpacePtr base_;
  int n_b_;
  bool finite_boundary_ = false;
  std::vector<spaces::SpacePoint> boundary_samples_;
  std::optional<spaces::BoundaryCurve> curve_;

  // Exact route for graph bases: the glued double graph plus id mappings.
  std::shared_ptr<const spaces::GraphSpace> glued_;
  std::vector<int> mirror_id_;   // base vertex id -> glued id of its mirror
  std::vector<int> glued_side_;  // glued id -> 0 base, 1 mirror, 2 shared
  std::vector<int> glued_base_;  // glued id -> base vertex id

  int glued_id(const spaces::SpacePoint& p) const;
  spaces::SpacePoint from_glued(int id, spaces::Side preferred) const;
};

spaces::SpacePtr double_space(const spaces::SpacePtr& base,
                              int boundary_resolution = 256);

struct CrossingInfo {
  int count = 0;                       // side changes along the path
  std::vector<double> params;          // parameters where the side flips
  bool contained_in_boundary = false;  // whole path runs inside the boundary
};

/// Counts boundary crossings of a path produced by a doubled space's
/// geodesic oracle; minimal geodesics must cross at most once.
CrossingInfo crossing_count(const DoubledSpace& dspace,
                            const spaces::GeodesicPath& path);

/// Curvature-preservation harness: audits the base, then runs the distance
/// comparison, the additivity of one-sided angles at the crossing (via the
/// derivative gate), the epsilon-layer angle check, and the single-crossing
/// property on stratified samples of the doubled space.
CheckReport check_doubling_theorem(const spaces::SpacePtr& base,
                                   const CheckConfig& config);

/// Space-spec constructor for {"kind": "double", "base": {...}, "n_b": ...}.
spaces::SpacePtr build_doubled_from_spec(const nlohmann::json& spec);

}  // namespace complab::doubling
