#include "complab/space.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "complab/graph_space.hpp"

namespace complab::doubling {
// Implemented in doubling.cpp; declared here so build_space can dispatch the
// {"kind": "double", ...} spec without a header cycle.
spaces::SpacePtr build_doubled_from_spec(const nlohmann::json& spec);
}  // namespace complab::doubling

namespace complab::spaces {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTieTol = 1e-12;
constexpr double kDomainTol = 1e-9;

[[noreturn]] void construction_fail(const std::string& what) {
  throw std::invalid_argument("spaces: " + what);
}

[[noreturn]] void domain_fail(const std::string& what) {
  throw std::domain_error("spaces: " + what);
}

double wrap_angle(double phi, double period) {
  double w = std::fmod(phi, period);
  if (w < 0.0) w += period;
  return w;
}

struct Vec3 {
  double x = 0, y = 0, z = 0;
};

Vec3 sub(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
Vec3 scale(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
Vec3 normalize(Vec3 a) {
  const double n = norm(a);
  return {a.x / n, a.y / n, a.z / n};
}

}  // namespace

bool lex_less(const SpacePoint& lhs, const SpacePoint& rhs) {
  if (lhs.side != rhs.side) return static_cast<int>(lhs.side) < static_cast<int>(rhs.side);
  if (lhs.index != rhs.index) return lhs.index < rhs.index;
  if (lhs.a != rhs.a) return lhs.a < rhs.a;
  return lhs.b < rhs.b;
}

SpacePoint GeodesicPath::at(double t) const {
  t = std::clamp(t, 0.0, length);
  return eval(t);
}

GeodesicPath make_sampled_path(const SpacePoint& x, const SpacePoint& y,
                               double length, double step,
                               std::function<SpacePoint(double)> eval,
                               double snap_pitch) {
  if (step <= 0.0) domain_fail("geodesic step must be positive");
  GeodesicPath path;
  path.start = x;
  path.end = y;
  path.length = length;
  path.eval = std::move(eval);
  path.snap_pitch = snap_pitch;
  const int m = std::max(1, static_cast<int>(std::ceil(length / step - kTieTol)));
  path.params.reserve(m + 1);
  path.points.reserve(m + 1);
  for (int i = 0; i <= m; ++i) {
    const double t = length * static_cast<double>(i) / m;
    path.params.push_back(t);
    path.points.push_back(path.eval(t));
  }
  return path;
}

GeodesicPath Space::geodesic(const SpacePoint& x, const SpacePoint& y,
                             double step) const {
  auto all = geodesics(x, y, step);
  if (all.empty()) domain_fail("no geodesic between the given points");
  return all.front();
}

std::vector<SpacePoint> Space::boundary_points(int n) const {
  if (!has_boundary()) return {};
  if (n < 1) domain_fail("boundary_points needs n >= 1");
  auto finite = boundary_finite();
  if (!finite.empty()) return finite;
  auto curve = boundary_curve();
  if (!curve) return {};
  std::vector<SpacePoint> out;
  out.reserve(n);
  const int denom = curve->closed ? n : std::max(1, n - 1);
  for (int i = 0; i < n; ++i) {
    out.push_back(curve->at(curve->length * static_cast<double>(i) / denom));
  }
  return out;
}

std::string Space::describe(const SpacePoint& p) const {
  std::ostringstream os;
  os << "(" << p.index << ", " << p.a << ", " << p.b;
  if (p.side == Side::mirror) os << ", mirror";
  os << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// segment
// ---------------------------------------------------------------------------

namespace {

class SegmentSpace final : public Space {
 public:
  explicit SegmentSpace(double length) : length_(length) {
    if (length <= 0.0) construction_fail("segment needs positive length");
  }

  std::string kind() const override { return "segment"; }

  void validate(const SpacePoint& p) const override {
    if (p.a < -kDomainTol || p.a > length_ + kDomainTol) {
      domain_fail("segment point outside [0, L]");
    }
  }

  double distance(const SpacePoint& x, const SpacePoint& y) const override {
    validate(x);
    validate(y);
    return std::fabs(x.a - y.a);
  }

  std::vector<GeodesicPath> geodesics(const SpacePoint& x, const SpacePoint& y,
                                      double step) const override {
    const double d = distance(x, y);
    if (d == 0.0) domain_fail("degenerate geodesic request (x == y)");
    const double x0 = x.a, dir = (y.a > x.a) ? 1.0 : -1.0;
    auto eval = [x0, dir](double t) { return SpacePoint{0, x0 + dir * t, 0.0}; };
    return {make_sampled_path(x, y, d, step, eval)};
  }

  SpacePoint sample(std::mt19937_64& rng) const override {
    std::uniform_real_distribution<double> u(0.0, length_);
    return {0, u(rng), 0.0};
  }

  bool has_boundary() const override { return true; }
  std::vector<SpacePoint> boundary_finite() const override {
    return {{0, 0.0, 0.0}, {0, length_, 0.0}};
  }

  std::string describe(const SpacePoint& p) const override {
    std::ostringstream os;
    os << "t=" << p.a;
    if (p.side == Side::mirror) os << "'";
    return os.str();
  }

  double length() const { return length_; }

 private:
  double length_;
};

// ---------------------------------------------------------------------------
// k-pod
// ---------------------------------------------------------------------------

class KPodSpace final : public Space {
 public:
  KPodSpace(int rays, double ray_length) : rays_(rays), ray_length_(ray_length) {
    if (rays < 2) construction_fail("k_pod needs at least 2 rays");
    if (ray_length <= 0.0) construction_fail("k_pod needs positive ray length");
  }

  std::string kind() const override { return "k_pod"; }

  void validate(const SpacePoint& p) const override {
    if (p.index < 0 || p.index >= rays_) domain_fail("k_pod ray index out of range");
    if (p.a < -kDomainTol || p.a > ray_length_ + kDomainTol) {
      domain_fail("k_pod radius outside [0, R]");
    }
  }

  double distance(const SpacePoint& x, const SpacePoint& y) const override {
    validate(x);
    validate(y);
    if (x.index == y.index) return std::fabs(x.a - y.a);
    return x.a + y.a;  // through the center; exact also when one radius is 0
  }

  std::vector<GeodesicPath> geodesics(const SpacePoint& x, const SpacePoint& y,
                                      double step) const override {
    const double d = distance(x, y);
    if (d == 0.0) domain_fail("degenerate geodesic request (x == y)");
    if (x.index == y.index || x.a == 0.0 || y.a == 0.0) {
      // Along a single ray (through the center if one endpoint is the center).
      const int ray = (x.a == 0.0) ? y.index : x.index;
      const double x0 = x.a, dir = (y.a > x.a) ? 1.0 : -1.0;
      auto eval = [ray, x0, dir](double t) {
        return SpacePoint{ray, x0 + dir * t, 0.0};
      };
      return {make_sampled_path(x, y, d, step, eval)};
    }
    const int ri = x.index, rj = y.index;
    const double a = x.a;
    auto eval = [ri, rj, a](double t) {
      if (t <= a) return SpacePoint{ri, a - t, 0.0};
      return SpacePoint{rj, t - a, 0.0};
    };
    return {make_sampled_path(x, y, d, step, eval)};
  }

  SpacePoint sample(std::mt19937_64& rng) const override {
    std::uniform_int_distribution<int> ray(0, rays_ - 1);
    std::uniform_real_distribution<double> u(0.0, ray_length_);
    return {ray(rng), u(rng), 0.0};
  }

  std::vector<SpacePoint> special_points() const override {
    return {{0, 0.0, 0.0}};
  }

  std::string describe(const SpacePoint& p) const override {
    std::ostringstream os;
    os << "(ray" << p.index << ", " << p.a << ")";
    return os.str();
  }

 private:
  int rays_;
  double ray_length_;
};

// ---------------------------------------------------------------------------
// flat cone
// ---------------------------------------------------------------------------

class FlatConeSpace final : public Space {
 public:
  FlatConeSpace(double theta_total, double r_max)
      : theta_total_(theta_total), r_max_(r_max) {
    if (theta_total <= 0.0) construction_fail("flat_cone needs theta_total > 0");
    if (r_max <= 0.0) construction_fail("flat_cone needs r_max > 0");
  }

  std::string kind() const override { return "flat_cone"; }

  void validate(const SpacePoint& p) const override {
    if (p.a < -kDomainTol) domain_fail("flat_cone radius must be nonnegative");
  }

  double gap(const SpacePoint& x, const SpacePoint& y) const {
    const double d = wrap_angle(std::fabs(x.b - y.b), theta_total_);
    return std::min(d, theta_total_ - d);
  }

  double distance(const SpacePoint& x, const SpacePoint& y) const override {
    validate(x);
    validate(y);
    if (x.a == 0.0 || y.a == 0.0) return x.a + y.a;
    const double g = gap(x, y);
    if (g >= kPi) return x.a + y.a;
    return std::sqrt(std::max(0.0, x.a * x.a + y.a * y.a - 2.0 * x.a * y.a * std::cos(g)));
  }

  std::vector<GeodesicPath> geodesics(const SpacePoint& x, const SpacePoint& y,
                                      double step) const override {
    const double d = distance(x, y);
    if (d == 0.0) domain_fail("degenerate geodesic request (x == y)");
    const double g = gap(x, y);
    if (x.a == 0.0 || y.a == 0.0 || g >= kPi - kTieTol) {
      // Radial through the apex.
      auto eval = [x, y](double t) {
        if (t <= x.a) return SpacePoint{0, x.a - t, x.b};
        return SpacePoint{0, t - x.a, y.b};
      };
      return {make_sampled_path(x, y, d, step, eval)};
    }
    // Unroll the apex-avoiding sector into the plane.
    const double forward = wrap_angle(y.b - x.b, theta_total_);
    std::vector<double> dirs;
    if (std::fabs(forward - (theta_total_ - forward)) < kTieTol) {
      dirs = {1.0, -1.0};  // both angular routes tie
    } else {
      dirs = {forward <= theta_total_ - forward ? 1.0 : -1.0};
    }
    std::vector<GeodesicPath> out;
    for (double dir : dirs) {
      const double phi1 = x.b, r1 = x.a, r2 = y.a, total = theta_total_;
      auto eval = [phi1, r1, r2, g, dir, d, total](double t) {
        const double u = t / d;
        const double px = r1 + u * (r2 * std::cos(g) - r1);
        const double py = u * r2 * std::sin(g);
        const double r = std::hypot(px, py);
        const double psi = std::atan2(py, px);
        return SpacePoint{0, r, wrap_angle(phi1 + dir * psi, total)};
      };
      out.push_back(make_sampled_path(x, y, d, step, eval));
    }
    return out;
  }

  SpacePoint sample(std::mt19937_64& rng) const override {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {0, r_max_ * std::sqrt(u(rng)), theta_total_ * u(rng)};
  }

  std::vector<SpacePoint> special_points() const override {
    return {{0, 0.0, 0.0}};
  }

  std::string describe(const SpacePoint& p) const override {
    std::ostringstream os;
    os << "(r=" << p.a << ", phi=" << p.b << ")";
    return os.str();
  }

 private:
  double theta_total_;
  double r_max_;
};

// ---------------------------------------------------------------------------
// sphere and spherical cap
// ---------------------------------------------------------------------------

class SphereLike : public Space {
 public:
  explicit SphereLike(double k) : k_(k), radius_(1.0 / std::sqrt(k)) {
    if (k <= 0.0) construction_fail("sphere needs k > 0");
  }

  double curvature() const { return k_; }
  double radius() const { return radius_; }

  Vec3 to3(const SpacePoint& p) const {
    const double theta = p.a / radius_;  // intrinsic polar radius -> angle
    return {std::sin(theta) * std::cos(p.b), std::sin(theta) * std::sin(p.b),
            std::cos(theta)};
  }

  SpacePoint from3(Vec3 v) const {
    v = normalize(v);
    const double theta = std::atan2(std::hypot(v.x, v.y), v.z);
    double phi = std::atan2(v.y, v.x);
    if (phi < 0.0) phi += 2.0 * kPi;
    return {0, theta * radius_, phi};
  }

  double distance(const SpacePoint& x, const SpacePoint& y) const override {
    validate(x);
    validate(y);
    const Vec3 u = to3(x), v = to3(y);
    return radius_ * std::atan2(norm(cross(u, v)), dot(u, v));
  }

  std::vector<GeodesicPath> geodesics(const SpacePoint& x, const SpacePoint& y,
                                      double step) const override {
    const double d = distance(x, y);
    if (d == 0.0) domain_fail("degenerate geodesic request (x == y)");
    const Vec3 u = to3(x);
    const Vec3 v = to3(y);
    const double alpha = d / radius_;
    std::vector<Vec3> tangents;
    if (alpha > kPi - 1e-9) {
      // Antipodal pair: enumerate two representative great-circle arcs.
      Vec3 e = (std::fabs(u.x) < 0.9) ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
      Vec3 w = normalize(sub(e, scale(u, dot(e, u))));
      tangents = {w, scale(w, -1.0)};
    } else {
      tangents = {normalize(sub(v, scale(u, dot(v, u))))};
    }
    std::vector<GeodesicPath> out;
    for (const Vec3& w : tangents) {
      const double R = radius_;
      const Vec3 u0 = u, w0 = w;
      auto eval = [this, u0, w0, R](double t) {
        const double beta = t / R;
        Vec3 p{u0.x * std::cos(beta) + w0.x * std::sin(beta),
               u0.y * std::cos(beta) + w0.y * std::sin(beta),
               u0.z * std::cos(beta) + w0.z * std::sin(beta)};
        return from3(p);
      };
      out.push_back(make_sampled_path(x, y, d, step, eval));
    }
    return out;
  }

 protected:
  double k_;
  double radius_;
};

class SphereSpace final : public SphereLike {
 public:
  using SphereLike::SphereLike;

  std::string kind() const override { return "sphere"; }

  void validate(const SpacePoint& p) const override {
    if (p.a < -kDomainTol || p.a > kPi * radius_ + kDomainTol) {
      domain_fail("sphere polar radius outside [0, pi/sqrt(k)]");
    }
  }

  SpacePoint sample(std::mt19937_64& rng) const override {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double z = 1.0 - 2.0 * u(rng);
    return {0, std::acos(z) * radius_, 2.0 * kPi * u(rng)};
  }

  std::string describe(const SpacePoint& p) const override {
    std::ostringstream os;
    os << "(rho=" << p.a << ", phi=" << p.b << ")";
    return os.str();
  }
};

class SphericalCapSpace final : public SphereLike {
 public:
  SphericalCapSpace(double k, double polar_radius)
      : SphereLike(k), polar_radius_(polar_radius) {
    if (polar_radius <= 0.0) construction_fail("spherical_cap needs rho_c > 0");
    // Convexity of the cap (so ambient great-circle distance is intrinsic)
    // requires the cap to stay within a hemisphere.
    if (polar_radius > 0.5 * kPi * radius_ + kDomainTol) {
      construction_fail("spherical_cap needs rho_c <= pi/(2 sqrt(k))");
    }
  }

  std::string kind() const override { return "spherical_cap"; }

  void validate(const SpacePoint& p) const override {
    if (p.a < -kDomainTol || p.a > polar_radius_ + kDomainTol) {
      domain_fail("cap point outside the polar radius");
    }
  }

  SpacePoint sample(std::mt19937_64& rng) const override {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double zmin = std::cos(polar_radius_ / radius_);
    const double z = zmin + (1.0 - zmin) * u(rng);
    return {0, std::acos(z) * radius_, 2.0 * kPi * u(rng)};
  }

  bool has_boundary() const override { return true; }

  std::optional<BoundaryCurve> boundary_curve() const override {
    BoundaryCurve curve;
    const double rim_radius = radius_ * std::sin(polar_radius_ / radius_);
    curve.length = 2.0 * kPi * rim_radius;
    curve.closed = true;
    const double rho = polar_radius_;
    curve.at = [rim_radius, rho](double s) {
      return SpacePoint{0, rho, s / rim_radius};
    };
    return curve;
  }

  double polar_radius() const { return polar_radius_; }

  std::string describe(const SpacePoint& p) const override {
    std::ostringstream os;
    os << "(rho=" << p.a << ", phi=" << p.b << ")";
    return os.str();
  }

 private:
  double polar_radius_;
};

// ---------------------------------------------------------------------------
// half-plane and disk
// ---------------------------------------------------------------------------

class HalfPlaneSpace final : public Space {
 public:
  explicit HalfPlaneSpace(double extent) : extent_(extent) {
    if (extent <= 0.0) construction_fail("half_plane needs positive extent");
  }

  std::string kind() const override { return "half_plane"; }

  void validate(const SpacePoint& p) const override {
    if (p.b < -kDomainTol) domain_fail("half_plane point below the boundary line");
  }

  double distance(const SpacePoint& x, const SpacePoint& y) const override {
    validate(x);
    validate(y);
    return std::hypot(x.a - y.a, x.b - y.b);
  }

  std::vector<GeodesicPath> geodesics(const SpacePoint& x, const SpacePoint& y,
                                      double step) const override {
    const double d = distance(x, y);
    if (d == 0.0) domain_fail("degenerate geodesic request (x == y)");
    auto eval = [x, y, d](double t) {
      const double u = t / d;
      return SpacePoint{0, x.a + u * (y.a - x.a), x.b + u * (y.b - x.b)};
    };
    return {make_sampled_path(x, y, d, step, eval)};
  }

  SpacePoint sample(std::mt19937_64& rng) const override {
    std::uniform_real_distribution<double> ux(-extent_, extent_);
    std::uniform_real_distribution<double> uy(0.0, extent_);
    return {0, ux(rng), uy(rng)};
  }

  bool has_boundary() const override { return true; }

  std::optional<BoundaryCurve> boundary_curve() const override {
    BoundaryCurve curve;
    curve.length = 2.0 * extent_;
    curve.closed = false;
    const double e = extent_;
    curve.at = [e](double s) { return SpacePoint{0, -e + s, 0.0}; };
    return curve;
  }

  std::string describe(const SpacePoint& p) const override {
    std::ostringstream os;
    os << "(" << p.a << ", " << p.b << (p.side == Side::mirror ? ", mirror)" : ")");
    return os.str();
  }

 private:
  double extent_;
};

class FlatDiskSpace final : public Space {
 public:
  explicit FlatDiskSpace(double radius) : radius_(radius) {
    if (radius <= 0.0) construction_fail("flat_disk needs positive radius");
  }

  std::string kind() const override { return "flat_disk"; }

  void validate(const SpacePoint& p) const override {
    if (std::hypot(p.a, p.b) > radius_ + kDomainTol) {
      domain_fail("flat_disk point outside the disk");
    }
  }

  double distance(const SpacePoint& x, const SpacePoint& y) const override {
    validate(x);
    validate(y);
    return std::hypot(x.a - y.a, x.b - y.b);
  }

  std::vector<GeodesicPath> geodesics(const SpacePoint& x, const SpacePoint& y,
                                      double step) const override {
    const double d = distance(x, y);
    if (d == 0.0) domain_fail("degenerate geodesic request (x == y)");
    auto eval = [x, y, d](double t) {
      const double u = t / d;
      return SpacePoint{0, x.a + u * (y.a - x.a), x.b + u * (y.b - x.b)};
    };
    return {make_sampled_path(x, y, d, step, eval)};
  }

  SpacePoint sample(std::mt19937_64& rng) const override {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = radius_ * std::sqrt(u(rng));
    const double phi = 2.0 * kPi * u(rng);
    return {0, r * std::cos(phi), r * std::sin(phi)};
  }

  bool has_boundary() const override { return true; }

  std::optional<BoundaryCurve> boundary_curve() const override {
    BoundaryCurve curve;
    curve.length = 2.0 * kPi * radius_;
    curve.closed = true;
    const double R = radius_;
    curve.at = [R](double s) {
      return SpacePoint{0, R * std::cos(s / R), R * std::sin(s / R)};
    };
    return curve;
  }

  std::string describe(const SpacePoint& p) const override {
    std::ostringstream os;
    os << "(" << p.a << ", " << p.b << (p.side == Side::mirror ? ", mirror)" : ")");
    return os.str();
  }

 private:
  double radius_;
};

}  // namespace

// ---------------------------------------------------------------------------
// factories
// ---------------------------------------------------------------------------

SpacePtr make_segment(double length) {
  return std::make_shared<SegmentSpace>(length);
}

SpacePtr make_k_pod(int rays, double ray_length) {
  return std::make_shared<KPodSpace>(rays, ray_length);
}

SpacePtr make_flat_cone(double theta_total, double r_max) {
  return std::make_shared<FlatConeSpace>(theta_total, r_max);
}

SpacePtr make_sphere(double k) { return std::make_shared<SphereSpace>(k); }

SpacePtr make_spherical_cap(double k, double polar_radius) {
  return std::make_shared<SphericalCapSpace>(k, polar_radius);
}

SpacePtr make_half_plane(double extent) {
  return std::make_shared<HalfPlaneSpace>(extent);
}

SpacePtr make_flat_disk(double radius) {
  return std::make_shared<FlatDiskSpace>(radius);
}

SpacePtr build_space(const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("kind")) {
    construction_fail("space spec must be an object with a \"kind\" field");
  }
  const std::string kind = spec.at("kind").get<std::string>();
  // Parameters may sit under "params" or directly at the top level.
  const nlohmann::json& params =
      spec.contains("params") ? spec.at("params") : spec;

  if (kind == "segment") return make_segment(params.at("L").get<double>());
  if (kind == "k_pod") {
    return make_k_pod(params.at("m").get<int>(), params.at("R").get<double>());
  }
  if (kind == "flat_cone") {
    return make_flat_cone(params.at("theta_total").get<double>(),
                          params.value("r_max", 1.0));
  }
  if (kind == "sphere") return make_sphere(params.at("k").get<double>());
  if (kind == "spherical_cap") {
    return make_spherical_cap(params.at("k").get<double>(),
                              params.at("rho_c").get<double>());
  }
  if (kind == "half_plane") {
    return make_half_plane(params.at("extent").get<double>());
  }
  if (kind == "flat_disk") return make_flat_disk(params.at("R").get<double>());
  if (kind == "graph") {
    std::vector<GraphEdge> edges;
    for (const auto& e : params.at("edges")) {
      edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
    }
    std::vector<int> boundary;
    if (spec.contains("boundary")) {
      boundary = spec.at("boundary").get<std::vector<int>>();
    } else if (params.contains("boundary")) {
      boundary = params.at("boundary").get<std::vector<int>>();
    }
    auto g = make_graph(params.at("n").get<int>(), edges, boundary);
    if (params.contains("h")) return subdivide(g, params.at("h").get<double>());
    return g;
  }
  if (kind == "double") return doubling::build_doubled_from_spec(spec);
  construction_fail("unknown space kind \"" + kind + "\"");
}

}  // namespace complab::spaces
