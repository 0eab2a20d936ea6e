#pragma once

#include "sphq/eigensolver.hpp"
#include "sphq/polynomial.hpp"
#include "sphq/sphere_point.hpp"
#include "sphq/spin_models.hpp"

namespace sphq {

/// sup over x in ran of the distance from x to the nearest eigenvalue. The supremum is
/// attained at an endpoint or at a midpoint between consecutive eigenvalues that lies in ran.
double spectrum_distance(const RealInterval& ran, const Spectrum& spec);

struct WeylReport {
  int N = 0;
  /// max_i |lambda_i(Q(h_N)) - lambda_i(Q(h0))|
  double max_gap = 0.0;
  /// sum_k N^{-k} sup|h_k|
  double bound = 0.0;
  bool passed = false;
};

/// Compares the ordered spectra of Q(h_N) and Q(h0). Needs at least one correction.
WeylReport weyl_check(const SymbolExpansion& h, int N);

/// ||Q(h0) v - E v|| for the coherent state v at omega. Requires |h0(omega) - E| <= 1e-8.
double quasi_eigenvector_defect(const SpherePolynomial& h0, double E, const SpherePoint& omega, int N);

}  // namespace sphq
