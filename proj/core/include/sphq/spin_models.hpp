#pragma once

#include <string>
#include <vector>

#include "sphq/operator.hpp"
#include "sphq/polynomial.hpp"

namespace sphq {

/// Total spin operators on Sym^N(C^2), j = N/2, in the Dicke basis.
struct CollectiveSpinOps {
  int N = 0;
  QuantizedOperator Sx;  // halfband 1
  QuantizedOperator Sy;  // halfband 1
  QuantizedOperator Sz;  // diagonal, m = N/2 - k
};

CollectiveSpinOps collective_ops(int N);

/// (1/(N+2)) (-(2J/N) Sz^2 - 2B Sx), real symmetric tridiagonal.
QuantizedOperator cw_hamiltonian(int N, double J, double B);

/// -lambda/(N(N+2)) (Sx^2 + gamma Sy^2) - B/(N+2) Sz, halfband 2.
QuantizedOperator lmg_hamiltonian(int N, double lambda, double gamma, double B);

/// h_N = h0 + sum_k N^{-k} h_k.
struct SymbolExpansion {
  struct Correction {
    int order = 1;
    SpherePolynomial symbol;
    /// "paper-claimed" for corrections quoted from the literature, "fitted" for measured ones.
    std::string provenance;
  };
  SpherePolynomial h0;
  std::vector<Correction> corrections;

  /// h0 + sum_k N^{-k} h_k, reduced.
  SpherePolynomial truncated(int N) const;
  /// Real principal symbol and corrections.
  bool is_real() const;
};

struct ModelSpec {
  enum class Kind { CurieWeiss, LMG, CustomSymbol };
  Kind kind = Kind::CurieWeiss;
  double J = 1.0;
  double B = 0.5;
  double lambda = 1.0;
  double gamma = 1.0;
  SymbolExpansion custom;

  static ModelSpec curie_weiss(double J, double B);
  /// Throws PreconditionError unless lambda > 0, gamma in (0, 1], B >= 0.
  static ModelSpec lmg(double lambda, double gamma, double B);
  static ModelSpec custom_symbol(SymbolExpansion h);

  /// Stable text form, e.g. "cw J=1 B=0.5"; used for cache keys and reports.
  std::string describe() const;
};

/// Principal symbol plus the literature's first-order correction, tagged "paper-claimed".
///   CW:  h0 = -(J/2) z^2 - B x,                 claimed h1 = -3J z^2 + 1
///   LMG: h0 = -(lambda/4)(x^2 + gamma y^2) - (B/2) z,  claimed h1 = -3/2 (x^2 + gamma y^2) + 1
/// For a custom symbol the expansion is returned unchanged.
SymbolExpansion model_symbol(const ModelSpec& spec);

/// Finite-N operator: the spin Hamiltonian for CW/LMG, Q(h_N) for a custom symbol.
QuantizedOperator hamiltonian(const ModelSpec& spec, int N);

struct SymbolFit {
  /// h0 with the fitted h1 attached as the only correction.
  SymbolExpansion expansion;
  std::vector<Monomial> basis;
  std::vector<double> coefficients;
  std::vector<int> N_list;
  /// ||H_N - Q(h0 + h1/N)|| per N and the same times N^2.
  std::vector<double> residual;
  std::vector<double> scaled_residual;
  /// max |fitted - claimed| over the basis coefficients, and the verdict at 1e-6.
  double claimed_difference = 0.0;
  bool agrees_with_claim = false;
  /// The claimed h1 reduced to canonical form (zero when no claim exists).
  SpherePolynomial claimed;
};

/// Least-squares fit of h1 in the canonical monomials of degree <= max(deg h0, 2) to
/// N (H_N - Q(h0)) ~ Q(h1), jointly over N_list with the Frobenius inner product normalized
/// by the dimension. Needs at least 3 values of N. A rank-deficient normal system throws
/// NumericalError rather than being regularized.
SymbolFit symbol_correction_fit(const ModelSpec& spec, const std::vector<int>& N_list);

}  // namespace sphq
