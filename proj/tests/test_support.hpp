#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "sphq/dicke.hpp"
#include "sphq/operator.hpp"

namespace sphq::testing {

inline Eigen::MatrixXcd dense(const QuantizedOperator& A) {
  const int n = A.dim();
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) M(j, k) = A(j, k);
  return M;
}

inline Eigen::VectorXcd dense(const DickeVector& v) {
  Eigen::VectorXcd out(v.dim());
  for (int k = 0; k < v.dim(); ++k) out(k) = v[k];
  return out;
}

inline Eigen::VectorXd dense_eigenvalues(const QuantizedOperator& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense(A), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double dense_norm(const QuantizedOperator& A) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(dense(A));
  return svd.singularValues()(0);
}

inline double binomial(int n, int k) { return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)); }

}  // namespace sphq::testing
