#include "complab/modelspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace complab::model {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSeriesThreshold = 1e-8;  // on |k| * rho^2
constexpr double kCosineClamp = 1e-12;
constexpr double kDiameterMargin = 1e-9;

[[noreturn]] void domain_fail(const std::string& what) {
  throw std::domain_error("modelspace: " + what);
}

}  // namespace

double Kappa::diameter() const {
  if (k > 0.0) return kPi / std::sqrt(k);
  return std::numeric_limits<double>::infinity();
}

bool Kappa::within_diameter(double len) const {
  if (k <= 0.0) return true;
  const double diam = diameter();
  return len < diam * (1.0 - kDiameterMargin);
}

void Kappa::require_within_diameter(double len) const {
  if (!within_diameter(len)) {
    domain_fail("length " + std::to_string(len) +
                " reaches the model diameter pi/sqrt(k) for k = " +
                std::to_string(k));
  }
}

double sn(Kappa kappa, double rho) {
  const double k = kappa.k;
  const double kr2 = k * rho * rho;
  if (std::fabs(kr2) < kSeriesThreshold) {
    // rho (1 - k rho^2/6 + k^2 rho^4/120)
    return rho * (1.0 - kr2 / 6.0 + kr2 * kr2 / 120.0);
  }
  if (k > 0.0) {
    const double s = std::sqrt(k);
    return std::sin(s * rho) / s;
  }
  const double s = std::sqrt(-k);
  return std::sinh(s * rho) / s;
}

double sn_prime(Kappa kappa, double rho) {
  const double k = kappa.k;
  const double kr2 = k * rho * rho;
  if (std::fabs(kr2) < kSeriesThreshold) {
    return 1.0 - kr2 / 2.0 + kr2 * kr2 / 24.0;
  }
  if (k > 0.0) return std::cos(std::sqrt(k) * rho);
  return std::cosh(std::sqrt(-k) * rho);
}

double ct(Kappa kappa, double rho) {
  if (rho <= 0.0) domain_fail("ct_k undefined at rho = 0");
  kappa.require_within_diameter(rho);
  return sn_prime(kappa, rho) / sn(kappa, rho);
}

double fk(Kappa kappa, double rho) {
  const double k = kappa.k;
  const double kr2 = k * rho * rho;
  if (std::fabs(kr2) < kSeriesThreshold) {
    // rho^2/2 (1 - k rho^2/12 + k^2 rho^4/360)
    return 0.5 * rho * rho * (1.0 - kr2 / 12.0 + kr2 * kr2 / 360.0);
  }
  if (k > 0.0) return (1.0 - std::cos(std::sqrt(k) * rho)) / k;
  return (std::cosh(std::sqrt(-k) * rho) - 1.0) / (-k);
}

double fk_inverse(Kappa kappa, double F) {
  if (F < 0.0) {
    if (F < -1e-12) domain_fail("fk_inverse of a negative value");
    F = 0.0;
  }
  const double k = kappa.k;
  const double z = k * F;
  if (std::fabs(z) < kSeriesThreshold) {
    // acos(1 - z)/sqrt(k) = sqrt(2F) (1 + z/12 + 3 z^2/160 + ...)
    return std::sqrt(2.0 * F) * (1.0 + z / 12.0 + 3.0 * z * z / 160.0);
  }
  if (k > 0.0) {
    const double c = std::clamp(1.0 - z, -1.0, 1.0);
    return std::acos(c) / std::sqrt(k);
  }
  return std::acosh(1.0 - z) / std::sqrt(-k);
}

ModelTriple model_functions(Kappa kappa, double rho) {
  if (rho < 0.0) domain_fail("rho must be nonnegative");
  kappa.require_within_diameter(rho);
  ModelTriple out;
  out.sn = sn(kappa, rho);
  out.f = fk(kappa, rho);
  if (rho > 0.0) out.ct = sn_prime(kappa, rho) / out.sn;
  return out;
}

double model_side(Kappa kappa, double a, double b, double theta) {
  if (a < 0.0 || b < 0.0) domain_fail("side lengths must be nonnegative");
  if (theta < -kCosineClamp || theta > kPi + kCosineClamp) {
    domain_fail("angle outside [0, pi]");
  }
  theta = std::clamp(theta, 0.0, kPi);
  kappa.require_within_diameter(a);
  kappa.require_within_diameter(b);

  // Half-angle form of the law of cosines, stable at both degenerate ends
  // (theta near 0 gives |a - b| and theta near pi gives a + b without
  // cancellation):
  //   sin^2(s c / 2) = sin^2(s (a-b) / 2) + sin(s a) sin(s b) sin^2(theta/2)
  // on the sphere (s = sqrt(k)), with sin -> sinh for k < 0 and the flat
  // limit (a-b)^2/4 + a b sin^2(theta/2) in between.
  const double half = std::sin(0.5 * theta);
  const double abs_k = std::fabs(kappa.k);
  double c;
  if (abs_k * (a + b) * (a + b) < 1e-12) {
    const double q =
        0.25 * (a - b) * (a - b) + a * b * half * half;
    c = 2.0 * std::sqrt(q);
  } else if (kappa.k > 0.0) {
    const double s = std::sqrt(kappa.k);
    const double q = std::sin(0.5 * s * (a - b)) * std::sin(0.5 * s * (a - b)) +
                     std::sin(s * a) * std::sin(s * b) * half * half;
    if (q >= 1.0 - kDiameterMargin) {
      domain_fail("model_side output reaches the diameter");
    }
    c = 2.0 * std::asin(std::sqrt(std::max(0.0, q))) / s;
  } else {
    const double s = std::sqrt(abs_k);
    const double q =
        std::sinh(0.5 * s * (a - b)) * std::sinh(0.5 * s * (a - b)) +
        std::sinh(s * a) * std::sinh(s * b) * half * half;
    c = 2.0 * std::asinh(std::sqrt(std::max(0.0, q))) / s;
  }
  kappa.require_within_diameter(c);
  return c;
}

double model_angle(Kappa kappa, double a, double b, double c) {
  if (a <= 0.0 || b <= 0.0) domain_fail("model_angle needs a, b > 0");
  if (c < 0.0) domain_fail("model_angle needs c >= 0");
  const double slack = kCosineClamp * std::max({1.0, a, b, c});
  if (c > a + b + slack || c < std::fabs(a - b) - slack) {
    domain_fail("triangle inequality violated");
  }
  kappa.require_within_diameter(a);
  kappa.require_within_diameter(b);
  kappa.require_within_diameter(c);

  const double fa = fk(kappa, a);
  const double fb = fk(kappa, b);
  const double fc = fk(kappa, c);
  const double cosv =
      (fa + fb - kappa.k * fa * fb - fc) / (sn(kappa, a) * sn(kappa, b));
  if (cosv > 1.0 + kCosineClamp || cosv < -1.0 - kCosineClamp) {
    domain_fail("no model triangle with the given side lengths (cosine " +
                std::to_string(cosv) + ")");
  }
  return std::acos(std::clamp(cosv, -1.0, 1.0));
}

double comparison_point_distance(Kappa kappa, double pq, double pr, double qr,
                                 double t) {
  if (t < -kCosineClamp || t > qr + kCosineClamp) {
    domain_fail("comparison point parameter outside [0, qr]");
  }
  t = std::clamp(t, 0.0, qr);
  if (t == 0.0) return pq;
  if (t == qr) return pr;
  const double theta = model_angle(kappa, pq, qr, pr);
  return model_side(kappa, pq, t, theta);
}

ExpansionCoefficients expansion_coefficients(Kappa kappa, double a,
                                             double theta) {
  if (a <= 0.0) domain_fail("expansion_coefficients needs a > 0 (ct singular)");
  kappa.require_within_diameter(a);
  const double st = std::sin(theta);
  ExpansionCoefficients out;
  out.c0 = a;
  out.c1 = -std::cos(theta);
  out.c2 = 0.5 * ct(kappa, a) * st * st;
  out.g0 = fk(kappa, a);
  out.g1 = -sn(kappa, a) * std::cos(theta);
  out.g2 = 0.5 * (1.0 - kappa.k * out.g0);
  return out;
}

}  // namespace complab::model
