#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "complab/report.hpp"
#include "complab/space.hpp"

namespace complab::support {

/// One-variable function sampled on a strictly increasing grid, with an
/// optional finite set of declared exceptional interior points.
struct SampledFunction {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<int> exceptional;  // indices into grid, interior only

  double eval(double t) const;  // linear interpolation, exact at nodes
  double pitch() const;         // min grid spacing
  bool uniform() const;
  bool is_exceptional(int index) const;

  static SampledFunction tabulate(const std::function<double(double)>& fn,
                                  double a, double b, int intervals);
  static SampledFunction from_csv(std::istream& in);
  void to_csv(std::ostream& out) const;
};

enum class BoundSide { upper, lower };

struct SupportBoundEstimate {
  double t = 0.0;
  BoundSide side = BoundSide::upper;
  double estimate = 0.0;  // +-inf at corners
  bool conclusive = false;
  bool corner = false;
  std::vector<CurvePoint> per_scale;  // (tau, symmetric second difference)
};

struct DiniPair {
  double minus_min = 0.0;  // liminf of backward difference quotients
  double plus_max = 0.0;   // limsup of forward difference quotients
  bool conclusive = false;
  std::vector<CurvePoint> backward;
  std::vector<CurvePoint> forward;
};

/// Scale ladder for a point t: starts at a quarter of the reachable span and
/// halves down to 4x the grid pitch.
std::vector<double> default_scales(const SampledFunction& f, double t);

/// Windowed symmetric-second-difference bound at an interior point. Corners
/// (Dini gap beyond corner_tol) map to +-infinity per the support-sense
/// semantics.
SupportBoundEstimate support_second_bound(const SampledFunction& f, double t,
                                          BoundSide side,
                                          const std::vector<double>& scales,
                                          double corner_tol = 1e-3,
                                          int window = 4);

DiniPair dini_derivatives(const SampledFunction& f, double t,
                          const std::vector<double>& scales, int window = 4);

/// Detected first-derivative jump of f at t (0 when the point is smooth):
/// the symmetric gap (f(t+tau) + f(t-tau) - 2 f(t)) / tau tends to the jump
/// at a corner but decays linearly for C^2 inputs, so a gap above corner_tol
/// that fails to decay across the finest scales signals a corner.
double corner_jump(const SampledFunction& f, double t,
                   const std::vector<double>& scales, double corner_tol);

/// Barrier check: hypothesis audit (second difference + k f <= 0 with the
/// Dini gate at exceptional points) followed by the conclusion min f >= 0.
/// The flipped direction checks >= 0 / max f <= 0.
CheckReport verify_barrier(const SampledFunction& f, model::Kappa kappa,
                           Direction direction, double l, double tol = 1e-7);

/// Checks g'' + k g <= 1 in the support sense for g(t) = f_k(|p gamma(t)|).
CheckReport geodesic_energy_check(const spaces::Space& space,
                                  const CheckConfig& config,
                                  const spaces::SpacePoint& p,
                                  const spaces::GeodesicPath& path,
                                  const std::vector<double>& exceptional_params = {});

/// Builds the model comparison g~ from the endpoint data and checks the
/// endpoint matching, the model identity g~'' + k g~ = 1, and the gap
/// g - g~ >= 0 (<= 0 for the upper direction).
CheckReport comparison_gap_check(const spaces::Space& space,
                                 const CheckConfig& config,
                                 const spaces::SpacePoint& p,
                                 const spaces::GeodesicPath& path);

/// Smooth-input pathway: z = f' sn_k - f sn_k' must be nonpositive and
/// non-increasing; corners make the check inconclusive.
CheckReport sturm_ratio_check(const SampledFunction& f, model::Kappa kappa,
                              double l, double tol = 1e-7,
                              double corner_tol = 1e-3);

}  // namespace complab::support
