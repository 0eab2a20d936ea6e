#include "sphq/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

#include "sphq/dicke.hpp"
#include "sphq/errors.hpp"
#include "sphq/quantize.hpp"
#include "sphq/sphere_optimize.hpp"

namespace sphq {

double spectrum_distance(const RealInterval& ran, const Spectrum& spec) {
  if (spec.eigenvalues.empty()) throw PreconditionError("spectrum_distance needs a nonempty spectrum");
  const auto& ev = spec.eigenvalues;
  auto nearest = [&](double x) {
    const auto it = std::lower_bound(ev.begin(), ev.end(), x);
    double d = std::numeric_limits<double>::infinity();
    if (it != ev.end()) d = *it - x;
    if (it != ev.begin()) d = std::min(d, x - *std::prev(it));
    return d;
  };
  double dist = std::max(nearest(ran.lo), nearest(ran.hi));
  for (std::size_t i = 0; i + 1 < ev.size(); ++i) {
    const double mid = 0.5 * (ev[i] + ev[i + 1]);
    if (mid > ran.lo && mid < ran.hi) dist = std::max(dist, 0.5 * (ev[i + 1] - ev[i]));
  }
  return dist;
}

WeylReport weyl_check(const SymbolExpansion& h, int N) {
  if (h.corrections.empty()) throw PreconditionError("weyl_check needs at least one correction");
  if (!h.is_real()) throw PreconditionError("weyl_check needs real symbols");
  WeylReport rep;
  rep.N = N;
  for (const auto& c : h.corrections) rep.bound += std::pow(static_cast<double>(N), -c.order) * sup_norm(c.symbol);
  const Spectrum full = eigh(quantize(h.truncated(N), N));
  const Spectrum lead = eigh(quantize(h.h0.reduced(), N));
  for (std::size_t i = 0; i < full.size(); ++i)
    rep.max_gap = std::max(rep.max_gap, std::abs(full.eigenvalues[i] - lead.eigenvalues[i]));
  rep.passed = rep.max_gap <= rep.bound + 1e-10;
  return rep;
}

double quasi_eigenvector_defect(const SpherePolynomial& h0, double E, const SpherePoint& omega, int N) {
  if (!h0.is_real()) throw PreconditionError("quasi_eigenvector_defect needs a real symbol");
  if (std::abs(h0.value(omega) - E) > 1e-8)
    throw PreconditionError("quasi_eigenvector_defect requires h0(omega) = E");
  const QuantizedOperator Q = quantize(h0.reduced(), N);
  const DickeVector v = coherent_state(N, omega);
  const auto Qv = Q.apply(v.coeffs());
  double s = 0.0;
  for (int k = 0; k <= N; ++k) s += std::norm(Qv[k] - E * v[k]);
  return std::sqrt(s);
}

}  // namespace sphq
