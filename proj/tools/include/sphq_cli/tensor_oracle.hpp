#pragma once

#include <complex>
#include <vector>

namespace sphq::cli {

using cplx = std::complex<double>;

/// Dense row-major square matrix.
struct DenseMatrix {
  int n = 0;
  std::vector<cplx> a;

  explicit DenseMatrix(int n_ = 0) : n(n_), a(static_cast<std::size_t>(n_) * n_) {}
  cplx& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  cplx operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

/// Hamiltonians built on the full 2^N-dimensional tensor product from Pauli matrices at each
/// site, then compressed to the symmetric subspace: entry (j, k) = <D_j, H D_k> with D_k the
/// normalized symmetrization of |down>^k |up>^(N-k). Intended for N <= 12.
DenseMatrix tensor_cw_hamiltonian(int N, double J, double B);
DenseMatrix tensor_lmg_hamiltonian(int N, double lambda, double gamma, double B);

}  // namespace sphq::cli
