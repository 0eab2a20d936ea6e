#include "sphq_cli/tensor_oracle.hpp"

#include <bit>
#include <cmath>
#include <functional>

#include "sphq/errors.hpp"

namespace sphq::cli {

namespace {

using State = std::vector<cplx>;

// sum_i sigma_a(i) v; bit i set means site i points down
State pauli_sum(int N, int a, const State& v) {
  State out(v.size());
  for (std::size_t s = 0; s < v.size(); ++s) {
    if (v[s] == cplx{}) continue;
    for (int i = 0; i < N; ++i) {
      const bool down = (s >> i) & 1u;
      const std::size_t t = s ^ (std::size_t{1} << i);
      switch (a) {
        case 1:
          out[t] += v[s];
          break;
        case 2:
          // sigma_y |up> = i |down>, sigma_y |down> = -i |up>
          out[t] += (down ? cplx(0, -1) : cplx(0, 1)) * v[s];
          break;
        default:
          out[s] += (down ? -1.0 : 1.0) * v[s];
      }
    }
  }
  return out;
}

State dicke(int N, int k) {
  State v(std::size_t{1} << N);
  double count = 0.0;
  for (std::size_t s = 0; s < v.size(); ++s)
    if (std::popcount(s) == k) count += 1.0;
  for (std::size_t s = 0; s < v.size(); ++s)
    if (std::popcount(s) == k) v[s] = 1.0 / std::sqrt(count);
  return v;
}

DenseMatrix compress(int N, const std::function<State(const State&)>& H) {
  if (N < 1 || N > 14) throw PreconditionError("tensor oracle supports 1 <= N <= 14");
  DenseMatrix M(N + 1);
  std::vector<State> basis;
  for (int k = 0; k <= N; ++k) basis.push_back(dicke(N, k));
  for (int k = 0; k <= N; ++k) {
    const State Hk = H(basis[k]);
    for (int j = 0; j <= N; ++j) {
      cplx s = 0.0;
      for (std::size_t t = 0; t < Hk.size(); ++t) s += std::conj(basis[j][t]) * Hk[t];
      M(j, k) = s;
    }
  }
  return M;
}

}  // namespace

DenseMatrix tensor_cw_hamiltonian(int N, double J, double B) {
  return compress(N, [N, J, B](const State& v) {
    const State zz = pauli_sum(N, 3, pauli_sum(N, 3, v));
    const State x = pauli_sum(N, 1, v);
    State out(v.size());
    for (std::size_t s = 0; s < v.size(); ++s) out[s] = (-J / (2.0 * N) * zz[s] - B * x[s]) / (N + 2.0);
    return out;
  });
}

DenseMatrix tensor_lmg_hamiltonian(int N, double lambda, double gamma, double B) {
  return compress(N, [N, lambda, gamma, B](const State& v) {
    // S_a = (1/2) sum_i sigma_a(i)
    const State xx = pauli_sum(N, 1, pauli_sum(N, 1, v));
    const State yy = pauli_sum(N, 2, pauli_sum(N, 2, v));
    const State z = pauli_sum(N, 3, v);
    State out(v.size());
    for (std::size_t s = 0; s < v.size(); ++s)
      out[s] = -lambda / (N * (N + 2.0)) * 0.25 * (xx[s] + gamma * yy[s]) - B / (N + 2.0) * 0.5 * z[s];
    return out;
  });
}

}  // namespace sphq::cli
