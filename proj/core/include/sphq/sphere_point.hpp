#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace sphq {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// A point on the unit sphere, stored both as polar angles and as a unit 3-vector.
///
/// theta lies in [0, pi] and phi in (-pi, pi]. At the poles phi is reported as 0.
class SpherePoint {
 public:
  SpherePoint() : SpherePoint(0.0, 0.0) {}

  static SpherePoint from_angles(double theta, double phi) { return SpherePoint(theta, phi); }

  /// Normalizes v; v must be nonzero.
  static SpherePoint from_cartesian(const Vec3& v) {
    const double r = norm(v);
    const Vec3 u{v[0] / r, v[1] / r, v[2] / r};
    const double theta = std::atan2(std::hypot(u[0], u[1]), u[2]);
    const double phi = (u[0] == 0.0 && u[1] == 0.0) ? 0.0 : std::atan2(u[1], u[0]);
    SpherePoint p;
    p.theta_ = theta;
    p.phi_ = phi;
    p.xyz_ = u;
    return p;
  }

  static SpherePoint north() { return SpherePoint(0.0, 0.0); }
  static SpherePoint south() { return SpherePoint(std::numbers::pi, 0.0); }

  double theta() const { return theta_; }
  double phi() const { return phi_; }
  const Vec3& xyz() const { return xyz_; }
  double x() const { return xyz_[0]; }
  double y() const { return xyz_[1]; }
  double z() const { return xyz_[2]; }

  /// Great-circle distance in radians.
  double geodesic_distance(const SpherePoint& o) const {
    return std::atan2(norm(cross(xyz_, o.xyz_)), dot(xyz_, o.xyz_));
  }

 private:
  SpherePoint(double theta, double phi) {
    // wrap phi into (-pi, pi]
    constexpr double pi = std::numbers::pi;
    phi = std::remainder(phi, 2.0 * pi);
    if (phi <= -pi) phi += 2.0 * pi;
    theta_ = theta;
    phi_ = phi;
    const double s = std::sin(theta);
    xyz_ = {s * std::cos(phi), s * std::sin(phi), std::cos(theta)};
    if (theta == 0.0 || theta == pi) phi_ = 0.0;
  }

  double theta_ = 0.0;
  double phi_ = 0.0;
  Vec3 xyz_{0.0, 0.0, 1.0};
};

/// ran(f) of a real function on the connected sphere: a closed interval.
struct RealInterval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double v, double tol = 0.0) const { return v >= lo - tol && v <= hi + tol; }
};

}  // namespace sphq
