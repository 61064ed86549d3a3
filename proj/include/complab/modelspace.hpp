#pragma once

#include <limits>
#include <optional>

namespace complab::model {

/// Curvature parameter of the model surface. For k > 0 every length fed to
/// the model operations must stay strictly below the diameter pi/sqrt(k).
struct Kappa {
  double k = 0.0;

  bool positive() const { return k > 0.0; }

  double diameter() const;

  /// Throws std::domain_error if `len` reaches the k>0 diameter
  /// (strict, with a relative margin of 1e-9).
  void require_within_diameter(double len) const;

  bool within_diameter(double len) const;
};

struct ModelTriple {
  double sn = 0.0;
  std::optional<double> ct;  // absent at rho = 0 (sn vanishes)
  double f = 0.0;
};

/// Coefficients of the second-order expansions of the model side length
/// c(t) = model_side(a, t, theta) around t = 0, in both the distance form
/// (c0 + c1 t + c2 t^2) and the f_k form (g0 + g1 t + g2 t^2 approximating
/// f_k(c(t))).
struct ExpansionCoefficients {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  double g0 = 0.0, g1 = 0.0, g2 = 0.0;
};

// Model functions sn_k, sn_k', ct_k, f_k. Series-evaluated near k*rho^2 = 0
// so that the k -> 0 limits agree with the flat branch.
double sn(Kappa kappa, double rho);
double sn_prime(Kappa kappa, double rho);
double ct(Kappa kappa, double rho);  // throws at rho = 0
double fk(Kappa kappa, double rho);

/// Inverse of f_k on [0, diameter]; F must be nonnegative (tiny negative
/// rounding is clamped to zero).
double fk_inverse(Kappa kappa, double F);

ModelTriple model_functions(Kappa kappa, double rho);

/// Third side of the model triangle with sides a, b meeting at angle theta.
double model_side(Kappa kappa, double a, double b, double theta);

/// Angle between the sides of lengths a and b in the model triangle with
/// side lengths (a, b, c); inverse of model_side in theta.
double model_angle(Kappa kappa, double a, double b, double c);

/// Distance from the comparison point p~ to the point at arc length t along
/// the model side [q~ r~] of the triangle with sides (pq, pr, qr).
double comparison_point_distance(Kappa kappa, double pq, double pr, double qr,
                                 double t);

ExpansionCoefficients expansion_coefficients(Kappa kappa, double a,
                                             double theta);

}  // namespace complab::model
