#pragma once

#include <complex>
#include <functional>

#include "sphq/dicke.hpp"
#include "sphq/operator.hpp"
#include "sphq/polynomial.hpp"
#include "sphq/sphere_point.hpp"

namespace sphq {

/// Resolution multipliers for the product quadrature. The defaults are the smallest node
/// counts that integrate every matrix element exactly; larger values only test that claim.
struct QuadratureOptions {
  int phi_multiplier = 1;
  int theta_multiplier = 1;
};

/// Berezin quantization Q_{1/N}(p) = (N+1)/(4 pi) \int p(W) |v^W><v^W| dW.
///
/// Evaluated exactly by a uniform phi grid with N+d+1 nodes times Gauss-Legendre in
/// t = cos(theta) with ceil((N+d+1)/2) nodes, d = deg p. The result has halfband d and
/// is Hermitized when p is real. p must be canonical (reduce it first).
QuantizedOperator quantize(const SpherePolynomial& p, int N, const QuadratureOptions& opts = {});

/// <v^W, Q(f) v^W>, the Berezin transform of f at W. f is reduced internally.
double berezin_transform(const SpherePolynomial& f, int N, const SpherePoint& omega);

/// |<v^W, psi>|^2.
double husimi_density(const DickeVector& psi, const SpherePoint& omega);

using SphereRegion = std::function<bool(const SpherePoint&)>;

struct HusimiMassOptions {
  /// Nodes per axis start at max(min_nodes, nodes_per_N * N).
  int nodes_per_N = 4;
  int min_nodes = 64;
  /// Resolution is doubled until two successive results differ by less than this.
  double tolerance = 1e-6;
  int max_doublings = 4;
};

struct HusimiMass {
  double mass = 0.0;
  /// |difference| between the last two resolutions.
  double resolution_change = 0.0;
  int nodes_per_axis = 0;
  bool converged = false;
};

/// (N+1)/(4 pi) \int_region B_psi dW. The indicator breaks polynomial exactness, so the
/// product quadrature is refined by doubling until stable. The error from a sharp region edge
/// falls only like 1/nodes times the density on that edge; when the edge cuts through the
/// bulk of the density the tolerance is usually not reached and converged stays false.
HusimiMass husimi_mass(const DickeVector& psi, const SphereRegion& region,
                       const HusimiMassOptions& opts = {});

/// Husimi mass at a fixed number of nodes per axis (no refinement).
double husimi_mass_at(const DickeVector& psi, const SphereRegion& region, int nodes_per_axis);

/// Stereographic coordinate z = tan(theta/2) e^{-i phi}, chosen so that
/// Psi(z_W) = <v^W, psi> for the Bargmann function of psi.
cplx stereographic(const SpherePoint& omega);

/// Psi(z) = (1+|z|^2)^{-N/2} p(z) with p(X) = sum_k psi_k sqrt(C(N,k)) X^k.
class BargmannFunction {
 public:
  BargmannFunction(int N, std::vector<cplx> coeffs) : N_(N), coeffs_(std::move(coeffs)) {}

  int N() const { return N_; }
  /// Coefficients of p in the basis w_k = sqrt(C(N,k)) X^k.
  std::span<const cplx> coeffs() const { return coeffs_; }

  /// Psi(z), evaluated without forming large powers of z.
  cplx operator()(cplx z) const;
  /// p(z) directly (overflows for large |z|^N; intended for small N).
  cplx polynomial(cplx z) const;
  /// Fock-Bargmann norm (N+1)/pi \int |p|^2 (1+|z|^2)^{-(N+2)} d^2z by radial-angular quadrature.
  double norm() const;

 private:
  int N_;
  std::vector<cplx> coeffs_;
};

BargmannFunction bargmann_transform(const DickeVector& psi);

}  // namespace sphq
