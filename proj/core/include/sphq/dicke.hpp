#pragma once

#include <complex>
#include <span>
#include <vector>

#include "sphq/sphere_point.hpp"

namespace sphq {

using cplx = std::complex<double>;

/// Vector in Sym^N(C^2) expressed in the Dicke basis: index k counts down spins, so
/// k = 0 is all-up and the S_z eigenvalue of e_k is m = N/2 - k.
class DickeVector {
 public:
  DickeVector() = default;
  explicit DickeVector(int N) : N_(N), coeffs_(static_cast<std::size_t>(N) + 1) {}
  DickeVector(int N, std::vector<cplx> coeffs);

  static DickeVector basis(int N, int k);

  int N() const { return N_; }
  int dim() const { return N_ + 1; }
  std::span<const cplx> coeffs() const { return coeffs_; }
  std::span<cplx> coeffs() { return coeffs_; }
  cplx operator[](int k) const { return coeffs_[k]; }
  cplx& operator[](int k) { return coeffs_[k]; }

  double norm() const;
  DickeVector normalized() const;
  /// (F psi)_k = psi_{N-k}
  DickeVector flipped() const;

  /// <this, o>, antilinear in the first slot.
  cplx inner(const DickeVector& o) const;

 private:
  int N_ = 0;
  std::vector<cplx> coeffs_;
};

/// log C(N, k) for k = 0..N, accumulated from ratios.
std::vector<double> log_binomials(int N);

/// |c_k(theta)| of the coherent state for k = 0..N, computed in log space so that large N
/// neither overflows nor underflows the binomial weights.
///   |c_k| = sqrt(C(N,k)) cos(theta/2)^(N-k) sin(theta/2)^k
/// Parametrized by u = cos^2(theta/2) = (1 + cos theta)/2.
std::vector<double> coherent_amplitudes(int N, double u, std::span<const double> log_binom);

/// N-spin coherent state v^(Omega): c_k = sqrt(C(N,k)) cos(th/2)^(N-k) sin(th/2)^k e^{i k phi}.
DickeVector coherent_state(int N, const SpherePoint& omega);

/// <v^(a), v^(b)>; its modulus is ((1 + a.b)/2)^(N/2).
cplx overlap(int N, const SpherePoint& a, const SpherePoint& b);

}  // namespace sphq
