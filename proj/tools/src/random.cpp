#include "sphq_cli/random.hpp"

#include <cmath>
#include <numbers>

namespace sphq::cli {

SpherePoint random_sphere_point(Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double z = u(rng);
  const double phi = std::numbers::pi * u(rng);
  return SpherePoint::from_angles(std::acos(z), phi);
}

SpherePolynomial random_polynomial(Rng& rng, int max_degree, bool complex_coeffs) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::bernoulli_distribution keep(0.6);
  SpherePolynomial::TermMap terms;
  for (const Monomial& m : canonical_basis(max_degree)) {
    if (!keep(rng)) continue;
    const double re = u(rng);
    const double im = complex_coeffs ? u(rng) : 0.0;
    terms[m] = cplx(re, im);
  }
  return SpherePolynomial(terms);
}

DickeVector random_unit_vector(Rng& rng, int N) {
  std::normal_distribution<double> g;
  std::vector<cplx> c(static_cast<std::size_t>(N) + 1);
  for (auto& v : c) v = cplx(g(rng), g(rng));
  return DickeVector(N, std::move(c)).normalized();
}

}  // namespace sphq::cli
