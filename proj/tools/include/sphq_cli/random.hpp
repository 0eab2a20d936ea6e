#pragma once

#include <random>

#include "sphq/dicke.hpp"
#include "sphq/polynomial.hpp"
#include "sphq/sphere_point.hpp"

namespace sphq::cli {

using Rng = std::mt19937_64;

/// Uniform on the sphere (z uniform in [-1, 1]).
SpherePoint random_sphere_point(Rng& rng);

/// Canonical polynomial of degree <= max_degree; each basis monomial is present with
/// probability 0.6 and has a coefficient uniform in [-1, 1] (plus an imaginary part when complex).
SpherePolynomial random_polynomial(Rng& rng, int max_degree, bool complex_coeffs = false);

/// Unit vector with Gaussian components.
DickeVector random_unit_vector(Rng& rng, int N);

}  // namespace sphq::cli
