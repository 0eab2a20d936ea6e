#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "sphq/dicke.hpp"
#include "sphq/operator.hpp"

namespace sphq {

/// Eigenvalues of a Hermitian operator, ascending.
struct Spectrum {
  std::vector<double> eigenvalues;

  std::size_t size() const { return eigenvalues.size(); }
  double min() const { return eigenvalues.front(); }
  double max() const { return eigenvalues.back(); }

  /// Binary format (little-endian):
  ///   u64 payload size | "SPHQSPEC" | u32 version | u64 count | f64 values
  void write_binary(std::ostream& os) const;
  static Spectrum read_binary(std::istream& is);
  /// CSV rows "N,index,eigenvalue" (no header).
  void write_csv_rows(std::ostream& os, int N) const;

  friend bool operator==(const Spectrum&, const Spectrum&) = default;
};

/// Eigenvalues of the real symmetric tridiagonal matrix with diagonal d and
/// off-diagonal e (e.size() == d.size() - 1) by implicit-shift QL.
/// Throws NumericalError after 50 sweeps on a single eigenvalue.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> e);

/// Real symmetric tridiagonal (d, e) unitarily similar to a Hermitian banded operator.
/// Band reduction uses Givens rotations with bulge chasing, O(n^2 b); the final
/// complex off-diagonal is made real by a diagonal phase change.
struct Tridiagonal {
  std::vector<double> d;
  std::vector<double> e;
};
Tridiagonal reduce_to_tridiagonal(const QuantizedOperator& H);

/// Full spectrum of a Hermitian operator. Throws PreconditionError if H is not Hermitian.
Spectrum eigh(const QuantizedOperator& H);

struct EigenPair {
  double value = 0.0;
  /// Unit vector; the first component with magnitude > 1e-8 is real and positive.
  DickeVector vector;
  /// ||H v - value v||
  double residual = 0.0;
  /// Ground state only: the spectral gap above value is below 1e-10 ||H||.
  bool degenerate = false;
  /// +1 / -1 when the pair was computed inside a flip-symmetry sector, 0 otherwise.
  int flip_parity = 0;
};

/// Vector for a known (approximate) eigenvalue by inverse iteration with a banded LU.
/// Refines until ||Hv - lambda v|| <= tol_rel * ||H||.
EigenPair inverse_iteration(const QuantizedOperator& H, double shift, double tol_rel = 1e-12);

struct FlipSectors {
  QuantizedOperator even;
  QuantizedOperator odd;  // empty dimension when N == 0
};

/// True when F H F == H up to tol * max|H|, F the index reversal.
bool commutes_with_flip(const QuantizedOperator& H, double tol = 1e-14);
/// Restrictions of a flip-symmetric H to the +1 / -1 eigenspaces of F.
FlipSectors flip_sectors(const QuantizedOperator& H);
/// Embeds a sector vector back into Sym^N(C^2).
DickeVector lift_from_sector(std::span<const cplx> y, int N, int parity);

/// Lowest eigenpair. For flip-symmetric H the sectors are diagonalized separately; when
/// the sector ground energies coincide within tolerance the even sector is chosen, which
/// is where the Perron-Frobenius vector of a stoquastic H lives.
EigenPair ground_state(const QuantizedOperator& H);

/// Eigenpair whose eigenvalue is closest to target (sector-resolved when H is flip-symmetric).
EigenPair eigenpair_near(const QuantizedOperator& H, double target);

/// Largest singular value.
double operator_norm(const QuantizedOperator& A);

/// Applies the sign convention: first component with |c| > 1e-8 becomes real positive.
void fix_phase(DickeVector& v);

}  // namespace sphq
