#include "sphq/sphere_optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "sphq/errors.hpp"

namespace sphq {

namespace {

struct Frame {
  Vec3 p;
  Vec3 e1;
  Vec3 e2;
};

Frame tangent_frame(const Vec3& p) {
  // seed with the axis least aligned with p
  Vec3 a{0.0, 0.0, 0.0};
  const double ax = std::abs(p[0]), ay = std::abs(p[1]), az = std::abs(p[2]);
  if (ax <= ay && ax <= az)
    a[0] = 1.0;
  else if (ay <= az)
    a[1] = 1.0;
  else
    a[2] = 1.0;
  const double d = dot(a, p);
  Vec3 e1{a[0] - d * p[0], a[1] - d * p[1], a[2] - d * p[2]};
  const double n = norm(e1);
  for (double& v : e1) v /= n;
  return {p, e1, cross(p, e1)};
}

struct LocalModel {
  double value;
  double g1, g2;            // Riemannian gradient in the frame
  double h11, h12, h22;     // Riemannian Hessian in the frame
  double det() const { return h11 * h22 - h12 * h12; }
  double grad_norm() const { return std::hypot(g1, g2); }
};

LocalModel local_model(const SpherePolynomial& f, const Frame& fr) {
  const Vec3 g = f.gradient(fr.p);
  const auto H = f.hessian(fr.p);
  auto quad = [&](const Vec3& u, const Vec3& v) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += u[i] * H[3 * i + j] * v[j];
    return s;
  };
  const double radial = dot(fr.p, g);
  LocalModel m;
  m.value = f.evaluate(fr.p).real();
  m.g1 = dot(fr.e1, g);
  m.g2 = dot(fr.e2, g);
  m.h11 = quad(fr.e1, fr.e1) - radial;
  m.h12 = quad(fr.e1, fr.e2);
  m.h22 = quad(fr.e2, fr.e2) - radial;
  return m;
}

Vec3 exp_map(const Frame& fr, double s1, double s2) {
  const double r = std::hypot(s1, s2);
  if (r == 0.0) return fr.p;
  const double c = std::cos(r), s = std::sin(r) / r;
  Vec3 q;
  for (int i = 0; i < 3; ++i) q[i] = c * fr.p[i] + s * (s1 * fr.e1[i] + s2 * fr.e2[i]);
  const double n = norm(q);
  for (double& v : q) v /= n;
  return q;
}

double coefficient_scale(const SpherePolynomial& p) {
  double s = 0.0;
  for (const auto& [m, c] : p.terms()) s = std::max(s, std::abs(c));
  return std::max(s, 1.0);
}

constexpr double kMaxStep = 0.5;

// Maximize sign * f starting at p: Newton when the model is concave, otherwise a
// backtracking gradient step.
Vec3 refine_extremum(const SpherePolynomial& f, Vec3 p, double sign, const SphereSearchOptions& o) {
  for (int it = 0; it < o.max_newton_iterations; ++it) {
    const Frame fr = tangent_frame(p);
    const LocalModel m = local_model(f, fr);
    const double g1 = sign * m.g1, g2 = sign * m.g2;
    const double h11 = sign * m.h11, h12 = sign * m.h12, h22 = sign * m.h22;
    const double det = h11 * h22 - h12 * h12;
    double s1, s2;
    if (h11 < 0.0 && det > 0.0) {
      s1 = -(h22 * g1 - h12 * g2) / det;
      s2 = -(-h12 * g1 + h11 * g2) / det;
    } else {
      s1 = g1;
      s2 = g2;
    }
    double len = std::hypot(s1, s2);
    if (len > kMaxStep) {
      s1 *= kMaxStep / len;
      s2 *= kMaxStep / len;
      len = kMaxStep;
    }
    const double base = sign * m.value;
    double t = 1.0;
    Vec3 q = exp_map(fr, s1, s2);
    while (sign * f.evaluate(q).real() < base && t > 1e-8) {
      t *= 0.5;
      q = exp_map(fr, t * s1, t * s2);
    }
    if (sign * f.evaluate(q).real() < base) break;
    p = q;
    if (t * len < o.newton_tolerance) break;
  }
  return p;
}

// Newton on the projected gradient; converges to saddles as well as extrema.
bool refine_critical(const SpherePolynomial& f, Vec3& p, double grad_tol, const SphereSearchOptions& o) {
  for (int it = 0; it < o.max_newton_iterations; ++it) {
    const Frame fr = tangent_frame(p);
    const LocalModel m = local_model(f, fr);
    if (m.grad_norm() <= grad_tol * 1e-3) return true;
    const double det = m.det();
    double s1, s2;
    const double hscale = std::abs(m.h11) + std::abs(m.h22) + std::abs(m.h12);
    if (std::abs(det) > 1e-14 * hscale * hscale && hscale > 0.0) {
      s1 = -(m.h22 * m.g1 - m.h12 * m.g2) / det;
      s2 = -(-m.h12 * m.g1 + m.h11 * m.g2) / det;
    } else {
      // singular model: fall back to a scaled gradient step on |grad|^2
      const double scale = hscale > 0.0 ? 1.0 / hscale : 1.0;
      s1 = -scale * m.g1;
      s2 = -scale * m.g2;
    }
    const double len = std::hypot(s1, s2);
    if (len > kMaxStep) {
      s1 *= kMaxStep / len;
      s2 *= kMaxStep / len;
    }
    p = exp_map(fr, s1, s2);
    if (len < o.newton_tolerance) break;
  }
  const LocalModel m = local_model(f, tangent_frame(p));
  return m.grad_norm() <= grad_tol;
}

// Bucket grid for radius neighbor queries on the unit sphere.
class NeighborIndex {
 public:
  NeighborIndex(const std::vector<SpherePoint>& pts, double radius) : pts_(pts), cell_(radius) {
    for (std::size_t i = 0; i < pts.size(); ++i) buckets_[key(cell_of(pts[i].xyz()))].push_back(i);
  }

  template <class Fn>
  void for_each_neighbor(std::size_t i, Fn&& fn) const {
    const auto c = cell_of(pts_[i].xyz());
    const double r2 = cell_ * cell_;
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dz = -1; dz <= 1; ++dz) {
          auto it = buckets_.find(key({c[0] + dx, c[1] + dy, c[2] + dz}));
          if (it == buckets_.end()) continue;
          for (std::size_t j : it->second) {
            if (j == i) continue;
            const Vec3& a = pts_[i].xyz();
            const Vec3& b = pts_[j].xyz();
            const double d2 = (a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                              (a[2] - b[2]) * (a[2] - b[2]);
            if (d2 <= r2) fn(j);
          }
        }
  }

 private:
  std::array<int, 3> cell_of(const Vec3& v) const {
    return {static_cast<int>(std::floor(v[0] / cell_)), static_cast<int>(std::floor(v[1] / cell_)),
            static_cast<int>(std::floor(v[2] / cell_))};
  }
  static long long key(const std::array<int, 3>& c) {
    return (static_cast<long long>(c[0] + 4096) << 26) | (static_cast<long long>(c[1] + 4096) << 13) |
           static_cast<long long>(c[2] + 4096);
  }

  const std::vector<SpherePoint>& pts_;
  double cell_;
  std::unordered_map<long long, std::vector<std::size_t>> buckets_;
};

}  // namespace

std::vector<SpherePoint> fibonacci_sphere(int n) {
  std::vector<SpherePoint> pts;
  pts.reserve(n);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    pts.push_back(SpherePoint::from_cartesian({r * std::cos(phi), r * std::sin(phi), z}));
  }
  return pts;
}

Vec3 projected_gradient(const SpherePolynomial& p, const SpherePoint& at) {
  const Vec3 g = p.gradient(at.xyz());
  const double r = dot(g, at.xyz());
  const Vec3& x = at.xyz();
  return {g[0] - r * x[0], g[1] - r * x[1], g[2] - r * x[2]};
}

double tangent_hessian_det(const SpherePolynomial& p, const SpherePoint& at) {
  return local_model(p, tangent_frame(at.xyz())).det();
}

RangeResult range_with_arguments(const SpherePolynomial& p, const SphereSearchOptions& opts) {
  if (!p.is_real()) throw PreconditionError("range requires a real polynomial");
  const auto grid = fibonacci_sphere(opts.grid_points);
  std::vector<double> vals(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) vals[i] = p.value(grid[i]);
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });

  auto best = [&](double sign) {
    // seeds: separated grid points ranked by sign * value
    constexpr int kSeeds = 16;
    constexpr double kSeparation = 0.2;
    std::vector<SpherePoint> seeds;
    for (std::size_t r = 0; r < order.size() && static_cast<int>(seeds.size()) < kSeeds; ++r) {
      const std::size_t idx = sign > 0 ? order[order.size() - 1 - r] : order[r];
      const bool far = std::all_of(seeds.begin(), seeds.end(), [&](const SpherePoint& s) {
        return s.geodesic_distance(grid[idx]) > kSeparation;
      });
      if (far) seeds.push_back(grid[idx]);
    }
    SpherePoint arg = seeds.front();
    double v = sign * p.value(arg);
    for (const auto& s : seeds) {
      const SpherePoint q = SpherePoint::from_cartesian(refine_extremum(p, s.xyz(), sign, opts));
      const double qv = sign * p.value(q);
      if (qv > v) {
        v = qv;
        arg = q;
      }
    }
    return std::pair{sign * v, arg};
  };
  const auto [lo, argmin] = best(-1.0);
  const auto [hi, argmax] = best(1.0);
  return {{lo, hi}, argmin, argmax};
}

double sup_norm(const SpherePolynomial& p, const SphereSearchOptions& opts) {
  const RealInterval r = range(p, opts);
  return std::max(std::abs(r.lo), std::abs(r.hi));
}

std::vector<CriticalPoint> all_critical_points(const SpherePolynomial& p, const SphereSearchOptions& opts) {
  if (!p.is_real()) throw PreconditionError("critical_points requires a real polynomial");
  const SpherePolynomial f = p.reduced();
  if (f.degree() == 0)
    throw PreconditionError("polynomial is constant on the sphere: every point is critical");
  const double scale = coefficient_scale(f);
  const double grad_tol = 1e-10 * scale;

  const auto grid = fibonacci_sphere(opts.grid_points);
  std::vector<double> g2(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec3 g = projected_gradient(f, grid[i]);
    g2[i] = dot(g, g);
  }
  const double spacing = std::sqrt(4.0 * std::numbers::pi / grid.size());
  const NeighborIndex index(grid, 2.5 * spacing);

  std::vector<CriticalPoint> found;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    bool is_min = true;
    index.for_each_neighbor(i, [&](std::size_t j) {
      if (g2[j] < g2[i] || (g2[j] == g2[i] && j < i)) is_min = false;
    });
    if (!is_min) continue;
    Vec3 q = grid[i].xyz();
    if (!refine_critical(f, q, grad_tol, opts)) continue;
    const SpherePoint sp = SpherePoint::from_cartesian(q);
    const bool dup = std::any_of(found.begin(), found.end(), [&](const CriticalPoint& c) {
      return c.point.geodesic_distance(sp) < 1e-6;
    });
    if (dup) continue;
    CriticalPoint cp;
    cp.point = sp;
    cp.value = f.value(sp);
    cp.hessian_det = tangent_hessian_det(f, sp);
    cp.nondegenerate = std::abs(cp.hessian_det) > 1e-8;
    found.push_back(cp);
  }
  std::sort(found.begin(), found.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.point.xyz() < b.point.xyz();
  });
  return found;
}

std::vector<CriticalPoint> critical_points(const SpherePolynomial& p, double level,
                                           const SphereSearchOptions& opts) {
  auto all = all_critical_points(p, opts);
  std::erase_if(all, [&](const CriticalPoint& c) { return std::abs(c.value - level) > 1e-8; });
  return all;
}

}  // namespace sphq
