#pragma once

#include <vector>

#include "sphq/polynomial.hpp"
#include "sphq/sphere_point.hpp"

namespace sphq {

struct SphereSearchOptions {
  int grid_points = 20000;
  int max_newton_iterations = 50;
  double newton_tolerance = 1e-12;
};

/// Fibonacci lattice of n nearly uniform points.
std::vector<SpherePoint> fibonacci_sphere(int n);

struct RangeResult {
  RealInterval interval;
  SpherePoint argmin;
  SpherePoint argmax;
};

/// [min p, max p] over S^2 for a real polynomial, with the points attaining them.
RangeResult range_with_arguments(const SpherePolynomial& p, const SphereSearchOptions& opts = {});
inline RealInterval range(const SpherePolynomial& p, const SphereSearchOptions& opts = {}) {
  return range_with_arguments(p, opts).interval;
}
/// max |p| over S^2.
double sup_norm(const SpherePolynomial& p, const SphereSearchOptions& opts = {});

struct CriticalPoint {
  SpherePoint point;
  bool nondegenerate = false;
  double value = 0.0;
  /// determinant of the 2x2 tangent-plane Hessian
  double hessian_det = 0.0;
};

/// Tangent-plane gradient of p at a sphere point (ambient gradient minus its normal part).
Vec3 projected_gradient(const SpherePolynomial& p, const SpherePoint& at);

/// Determinant of the Riemannian Hessian of p restricted to the sphere.
double tangent_hessian_det(const SpherePolynomial& p, const SpherePoint& at);

/// All critical points of p on S^2 whose value is within 1e-8 of level, merged at
/// geodesic distance 1e-6. Degenerate points are reported with nondegenerate = false.
/// Throws PreconditionError when p is constant on the sphere (every point is critical).
std::vector<CriticalPoint> critical_points(const SpherePolynomial& p, double level,
                                           const SphereSearchOptions& opts = {});

/// Every critical point regardless of value.
std::vector<CriticalPoint> all_critical_points(const SpherePolynomial& p,
                                               const SphereSearchOptions& opts = {});

}  // namespace sphq
