#pragma once

#include <random>
#include <string>
#include <vector>

#include "complab/report.hpp"
#include "complab/space.hpp"

namespace complab::cond {

/// Discretized one-sided angle at the start of a geodesic: the windowed
/// extremum of the comparison angles over the finest usable scales (max for
/// the lower direction, min for the upper one).
struct UpperAngleEstimate {
  double value = 0.0;
  bool conclusive = false;
  bool monotone = true;  // non-increasing in |qs| across the whole ladder
  std::vector<CurvePoint> per_scale;  // (|qs|, comparison angle)
};

struct Triple {
  spaces::SpacePoint p, q, r;
};

/// One member of an accumulating family for the uniform epsilon-delta check:
/// a base point q with the geodesic the scales run along, plus the fixed
/// reference point p.
struct FamilyMember {
  spaces::SpacePoint p;
  spaces::GeodesicPath ray;  // emanates from q = ray.start
  std::string label;
};

/// Angle at q of the constant-curvature triangle with side lengths
/// (|pq|, |qr|, |pr|).
double comparison_angle(const spaces::Space& space, model::Kappa kappa,
                        const spaces::SpacePoint& p, const spaces::SpacePoint& q,
                        const spaces::SpacePoint& r);

UpperAngleEstimate upper_angle(const spaces::Space& space,
                               const CheckConfig& config,
                               const spaces::SpacePoint& p,
                               const spaces::GeodesicPath& ray);

/// Distance comparison |ps| >= |p~s~| for all sampled s on [qr]
/// (<= for the upper direction), over every enumerated minimal geodesic.
CheckReport check_condition_1(const spaces::Space& space,
                              const CheckConfig& config,
                              const std::vector<Triple>& triples);

/// Comparison angle non-increasing in |qs| (non-decreasing, upper direction).
CheckReport check_condition_2_monotone(const spaces::Space& space,
                                       const CheckConfig& config,
                                       const spaces::SpacePoint& p,
                                       const spaces::GeodesicPath& ray,
                                       const spaces::SpacePoint& r);

/// First-order defect (|p gamma(t)| - |p~s~(t)|)/t has nonnegative
/// discretized limsup (nonpositive liminf, upper direction).
CheckReport check_condition_A(const spaces::Space& space,
                              const CheckConfig& config,
                              const spaces::SpacePoint& p,
                              const spaces::GeodesicPath& ray,
                              const spaces::SpacePoint& r);

/// -cos of the comparison angle stays within epsilon of -cos of the
/// one-sided angle for all scales below delta (the uniform layer); the
/// residual trend over the finest window is reported, not enforced.
CheckReport check_condition_B(const spaces::Space& space,
                              const CheckConfig& config,
                              const spaces::SpacePoint& p,
                              const spaces::GeodesicPath& ray,
                              double delta_override = -1.0);

/// Searches the candidate delta ladder for one value that makes the uniform
/// layer of check_condition_B pass for every family member simultaneously;
/// fails when no candidate works.
CheckReport check_condition_B_uniform(const spaces::Space& space,
                                      const CheckConfig& config,
                                      const std::vector<FamilyMember>& family);

/// As check_condition_B but stated on the angles themselves.
CheckReport check_condition_B_doubleprime(const spaces::Space& space,
                                          const CheckConfig& config,
                                          const spaces::SpacePoint& p,
                                          const spaces::GeodesicPath& ray);

/// Forward plus backward one-sided angles at an interior parameter t0 must
/// not exceed pi (must reach pi, upper direction). With `exceptional` set the
/// angle test is replaced by the Dini-derivative gate on t -> |p gamma(t)|.
CheckReport check_angle_additivity(const spaces::Space& space,
                                   const CheckConfig& config,
                                   const spaces::SpacePoint& p,
                                   const spaces::GeodesicPath& path, double t0,
                                   bool exceptional = false);

/// Second-order defect |p gamma(t)| - model_side(|pq|, t, one-sided angle):
/// windowed slope bounded by epsilon; `full_range` additionally requires the
/// defect itself nonpositive at every sampled scale.
CheckReport check_condition_C(const spaces::Space& space,
                              const CheckConfig& config,
                              const spaces::SpacePoint& p,
                              const spaces::GeodesicPath& ray,
                              bool full_range = false);

/// Seeded triple enumeration: random triples with separation control plus
/// deterministic triples through the space's special points.
std::vector<Triple> sample_triples(const spaces::Space& space,
                                   const CheckConfig& config,
                                   std::mt19937_64& rng);

/// Known condition ids accepted by run_condition (and the CLI).
const std::vector<std::string>& condition_ids();

/// Sampling harness: builds triples / rays / families for the requested
/// condition id and merges the per-case reports.
CheckReport run_condition(const spaces::Space& space, const CheckConfig& config,
                          const std::string& condition_id);

}  // namespace complab::cond
