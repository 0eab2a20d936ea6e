#include "sphq/dicke.hpp"

#include <cmath>

#include "sphq/errors.hpp"

namespace sphq {

DickeVector::DickeVector(int N, std::vector<cplx> coeffs) : N_(N), coeffs_(std::move(coeffs)) {
  if (N < 0 || static_cast<int>(coeffs_.size()) != N + 1)
    throw PreconditionError("Dicke vector needs N+1 coefficients");
}

DickeVector DickeVector::basis(int N, int k) {
  if (k < 0 || k > N) throw PreconditionError("basis index out of range");
  DickeVector v(N);
  v[k] = 1.0;
  return v;
}

double DickeVector::norm() const {
  double s = 0.0;
  for (const cplx& c : coeffs_) s += std::norm(c);
  return std::sqrt(s);
}

DickeVector DickeVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw PreconditionError("cannot normalize the zero vector");
  DickeVector out = *this;
  for (cplx& c : out.coeffs_) c /= n;
  return out;
}

DickeVector DickeVector::flipped() const {
  DickeVector out(N_);
  for (int k = 0; k <= N_; ++k) out.coeffs_[k] = coeffs_[N_ - k];
  return out;
}

cplx DickeVector::inner(const DickeVector& o) const {
  if (o.N_ != N_) throw PreconditionError("inner product of vectors with different N");
  cplx s = 0.0;
  for (int k = 0; k <= N_; ++k) s += std::conj(coeffs_[k]) * o.coeffs_[k];
  return s;
}

std::vector<double> log_binomials(int N) {
  std::vector<double> lb(static_cast<std::size_t>(N) + 1, 0.0);
  // symmetric fill keeps accumulated rounding centred
  for (int k = 1; k <= N / 2; ++k) lb[k] = lb[k - 1] + std::log(static_cast<double>(N - k + 1) / k);
  for (int k = N / 2 + 1; k <= N; ++k) lb[k] = lb[N - k];
  return lb;
}

std::vector<double> coherent_amplitudes(int N, double u, std::span<const double> log_binom) {
  std::vector<double> amp(static_cast<std::size_t>(N) + 1, 0.0);
  const double v = 1.0 - u;
  if (u <= 0.0) {
    amp[N] = 1.0;
    return amp;
  }
  if (v <= 0.0) {
    amp[0] = 1.0;
    return amp;
  }
  const double lu = std::log(u), lv = std::log(v);
  for (int k = 0; k <= N; ++k) amp[k] = std::exp(0.5 * (log_binom[k] + (N - k) * lu + k * lv));
  return amp;
}

DickeVector coherent_state(int N, const SpherePoint& omega) {
  if (N < 1) throw PreconditionError("coherent_state requires N >= 1");
  const double h = 0.5 * omega.theta();
  const double c = std::cos(h), s = std::sin(h);
  const auto lb = log_binomials(N);
  // u from the half angle directly avoids cancellation in (1 + cos theta)/2 near the south pole
  const auto amp = coherent_amplitudes(N, c * c, lb);
  DickeVector v(N);
  if (s == 0.0) {
    v[0] = 1.0;
    return v;
  }
  if (c <= 0.0) {
    v[N] = std::polar(1.0, N * omega.phi());
    return v;
  }
  for (int k = 0; k <= N; ++k) v[k] = std::polar(amp[k], k * omega.phi());
  return v;
}

cplx overlap(int N, const SpherePoint& a, const SpherePoint& b) {
  return coherent_state(N, a).inner(coherent_state(N, b));
}

}  // namespace sphq
