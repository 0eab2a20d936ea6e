#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "sphq/eigensolver.hpp"
#include "sphq/errors.hpp"
#include "sphq/quantize.hpp"
#include "sphq/spectral.hpp"
#include "sphq/sphere_optimize.hpp"
#include "sphq/spin_models.hpp"
#include "sphq_cli/random.hpp"
#include "test_support.hpp"

using namespace sphq;
using sphq::cli::random_polynomial;
using sphq::cli::Rng;
using sphq::testing::dense;
using sphq::testing::dense_eigenvalues;
using P = SpherePolynomial;

namespace {

QuantizedOperator random_hermitian(Rng& rng, int N, int halfband) {
  std::normal_distribution<double> g;
  QuantizedOperator A(N, halfband);
  for (int j = 0; j <= N; ++j) {
    A.at(j, j) = g(rng);
    for (int k = j + 1; k <= std::min(N, j + halfband); ++k) {
      A.at(j, k) = cplx(g(rng), g(rng));
      A.at(k, j) = std::conj(A(j, k));
    }
  }
  return A;
}

// Number of eigenvalues below x from the inertia of A - xI (LDL^* without pivoting).
int count_below(const Eigen::MatrixXcd& A, double x) {
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXcd M = A - x * Eigen::MatrixXcd::Identity(n, n);
  int neg = 0;
  for (int k = 0; k < n; ++k) {
    const double d = M(k, k).real();
    if (d < 0) ++neg;
    for (int i = k + 1; i < n; ++i) {
      const cplx l = M(i, k) / d;
      for (int j = k + 1; j < n; ++j) M(i, j) -= l * std::conj(M(j, k));
    }
  }
  return neg;
}

double bisect_eigenvalue(const Eigen::MatrixXcd& A, int index) {
  double lo = -100.0, hi = 100.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(A, mid) > index)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Tridiagonal, TwoByTwo) {
  const auto ev = tridiagonal_eigenvalues({2.0, 2.0}, {1.0});
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_NEAR(ev[0], 1.0, 1e-15);
  EXPECT_NEAR(ev[1], 3.0, 1e-15);
}

TEST(Eigh, DiagonalAndSmallExamples) {
  const std::vector<double> d{3.0, -1.0, 2.0};
  const Spectrum s = eigh(QuantizedOperator::diagonal(d));
  EXPECT_EQ(s.eigenvalues, (std::vector<double>{-1.0, 2.0, 3.0}));
  QuantizedOperator A(1, 1);
  A.at(0, 1) = cplx(0.0, 1.0);
  A.at(1, 0) = cplx(0.0, -1.0);
  const Spectrum t = eigh(A);
  EXPECT_NEAR(t.min(), -1.0, 1e-15);
  EXPECT_NEAR(t.max(), 1.0, 1e-15);
}

TEST(Eigh, RejectsNonHermitian) {
  QuantizedOperator A(2, 1);
  A.at(0, 1) = 1.0;
  EXPECT_THROW(eigh(A), PreconditionError);
}

TEST(Eigh, MatchesInertiaBisection) {
  Rng rng(41);
  for (int t = 0; t < 10; ++t) {
    const QuantizedOperator A = random_hermitian(rng, 5, 5);
    const Spectrum s = eigh(A);
    const Eigen::MatrixXcd M = dense(A);
    for (int i = 0; i < 6; ++i) EXPECT_NEAR(s.eigenvalues[i], bisect_eigenvalue(M, i), 1e-11);
  }
}

TEST(Eigh, BandedMatchesDenseSolver) {
  Rng rng(42);
  for (int hb : {1, 2, 4, 7}) {
    const QuantizedOperator A = random_hermitian(rng, 80, hb);
    const Spectrum s = eigh(A);
    const Eigen::VectorXd ref = dense_eigenvalues(A);
    for (int i = 0; i <= 80; ++i) EXPECT_NEAR(s.eigenvalues[i], ref(i), 1e-11) << hb;
  }
}

TEST(Eigh, TraceEqualsSum) {
  Rng rng(43);
  const QuantizedOperator H = quantize(random_polynomial(rng, 4), 200);
  const Spectrum s = eigh(H);
  double sum = 0.0;
  for (double v : s.eigenvalues) sum += v;
  EXPECT_NEAR(sum, H.trace().real(), 1e-10);
  EXPECT_TRUE(std::is_sorted(s.eigenvalues.begin(), s.eigenvalues.end()));
}

TEST(Eigh, SpectrumContainedInRange) {
  Rng rng(44);
  for (int t = 0; t < 10; ++t) {
    const P f = random_polynomial(rng, 3);
    const RealInterval r = range(f);
    const Spectrum s = eigh(quantize(f, 30 + 10 * t));
    EXPECT_GE(s.min(), r.lo - 1e-10);
    EXPECT_LE(s.max(), r.hi + 1e-10);
  }
}

TEST(FlipSectors, SpectrumIsUnionOfSectors) {
  for (int N : {6, 7}) {
    const QuantizedOperator H = lmg_hamiltonian(N, 1.0, 0.4, 0.0);
    ASSERT_TRUE(commutes_with_flip(H));
    const FlipSectors s = flip_sectors(H);
    EXPECT_EQ(s.even.dim() + s.odd.dim(), N + 1);
    std::vector<double> all = eigh(s.even).eigenvalues;
    const auto odd = eigh(s.odd).eigenvalues;
    all.insert(all.end(), odd.begin(), odd.end());
    std::sort(all.begin(), all.end());
    const auto ref = eigh(H).eigenvalues;
    for (int i = 0; i <= N; ++i) EXPECT_NEAR(all[i], ref[i], 1e-14);
  }
}

TEST(FlipSectors, LiftedVectorsHaveParity) {
  std::vector<cplx> y{1.0, 2.0, 3.0};
  const DickeVector even = lift_from_sector(y, 4, +1);
  const DickeVector odd = lift_from_sector(std::vector<cplx>{1.0, 2.0}, 4, -1);
  for (int k = 0; k <= 4; ++k) {
    EXPECT_NEAR(std::abs(even[k] - even.flipped()[k]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(odd[k] + odd.flipped()[k]), 0.0, 1e-15);
  }
  EXPECT_NEAR(even.norm(), std::sqrt(14.0), 1e-14);
}

TEST(GroundState, Examples) {
  const EigenPair g = ground_state(QuantizedOperator::diagonal(std::vector<double>{0.5, -2.0, 1.0}));
  EXPECT_NEAR(g.value, -2.0, 1e-14);
  EXPECT_NEAR(std::abs(g.vector[1]), 1.0, 1e-12);
  EXPECT_FALSE(g.degenerate);
  EXPECT_LE(g.residual, 1e-12);
}

TEST(GroundState, DegenerateFlagAndEvenTieBreak) {
  const EigenPair g = ground_state(QuantizedOperator::diagonal(std::vector<double>{-1.0, 0.0, 0.0, -1.0}));
  EXPECT_NEAR(g.value, -1.0, 1e-14);
  EXPECT_TRUE(g.degenerate);
  EXPECT_EQ(g.flip_parity, 1);
  EXPECT_NEAR(std::abs(g.vector[0] - g.vector[3]), 0.0, 1e-12);
}

TEST(GroundState, CurieWeissTunnelingDoublet) {
  EXPECT_FALSE(ground_state(cw_hamiltonian(8, 1.0, 0.5)).degenerate);
  const EigenPair big = ground_state(cw_hamiltonian(256, 1.0, 0.5));
  EXPECT_TRUE(big.degenerate);
  EXPECT_EQ(big.flip_parity, 1);
  EXPECT_LE(big.residual, 1e-10);
}

TEST(EigenpairNear, PicksClosestEigenvalue) {
  const QuantizedOperator H = cw_hamiltonian(40, 1.0, 0.5);
  const Spectrum s = eigh(H);
  const double target = 0.5 * (s.eigenvalues[10] + s.eigenvalues[11]) - 1e-6;
  const EigenPair p = eigenpair_near(H, target);
  EXPECT_NEAR(p.value, s.eigenvalues[10], 1e-13);
  EXPECT_LE(p.residual, 1e-10);
  EXPECT_NEAR(p.vector.norm(), 1.0, 1e-13);
}

TEST(OperatorNorm, MatchesSingularValues) {
  Rng rng(45);
  const QuantizedOperator A = quantize(random_polynomial(rng, 3, true), 25);
  EXPECT_NEAR(operator_norm(A), sphq::testing::dense_norm(A), 1e-12);
  const QuantizedOperator H = quantize(random_polynomial(rng, 3), 25);
  EXPECT_NEAR(operator_norm(H), sphq::testing::dense_norm(H), 1e-12);
}

TEST(SpectrumIO, BinaryRoundTripAndCsv) {
  const Spectrum s = eigh(cw_hamiltonian(9, 1.0, 0.5));
  std::stringstream b;
  s.write_binary(b);
  EXPECT_TRUE(Spectrum::read_binary(b) == s);
  std::stringstream c;
  Spectrum{{-1.5, 0.25}}.write_csv_rows(c, 7);
  EXPECT_EQ(c.str(), "7,0,-1.5\n7,1,0.25\n");
}

TEST(SpectrumDistance, Examples) {
  const Spectrum s{{-1.0, 0.0, 1.0}};
  EXPECT_DOUBLE_EQ(spectrum_distance({-1.0, 1.0}, s), 0.5);
  EXPECT_DOUBLE_EQ(spectrum_distance({-2.0, 1.0}, s), 1.0);
  EXPECT_DOUBLE_EQ(spectrum_distance({-0.2, 0.2}, Spectrum{{-1.0, 1.0}}), 1.0);
  EXPECT_DOUBLE_EQ(spectrum_distance({0.1, 0.2}, Spectrum{{-1.0, 1.0}}), 0.9);
  EXPECT_DOUBLE_EQ(spectrum_distance({0.0, 0.0}, s), 0.0);
  EXPECT_THROW(spectrum_distance({0.0, 1.0}, Spectrum{}), PreconditionError);
}

TEST(SpectrumDistance, AgreesWithSampledSupremum) {
  Rng rng(46);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 20; ++t) {
    Spectrum s;
    for (int i = 0; i < 7; ++i) s.eigenvalues.push_back(u(rng));
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
    const RealInterval r{-0.8, 0.9};
    double sampled = 0.0;
    for (int i = 0; i <= 20000; ++i) {
      const double x = r.lo + (r.hi - r.lo) * i / 20000.0;
      double d = 1e300;
      for (double v : s.eigenvalues) d = std::min(d, std::abs(v - x));
      sampled = std::max(sampled, d);
    }
    EXPECT_NEAR(spectrum_distance(r, s), sampled, 1e-4);
    EXPECT_GE(spectrum_distance(r, s), sampled - 1e-15);
  }
}

TEST(SpectrumDistance, QuantizedSymbolFillsItsRange) {
  const P h = P::parse("-0.5 z^2 - 0.5 x").reduced();
  const RealInterval r = range(h);
  double prev = 1.0;
  for (int N : {32, 128, 512}) {
    const double d = spectrum_distance(r, eigh(quantize(h, N)));
    EXPECT_LT(d, prev);
    prev = d;
  }
  EXPECT_LT(prev, 0.01);
}

TEST(Weyl, ClaimedCorrectionStaysWithinBound) {
  const SymbolExpansion h = model_symbol(ModelSpec::curie_weiss(1.0, 0.5));
  for (int N : {16, 64}) {
    const WeylReport r = weyl_check(h, N);
    EXPECT_TRUE(r.passed) << r.max_gap << " > " << r.bound;
    EXPECT_NEAR(r.bound, 2.0 / N, 1e-9);
  }
}

TEST(Weyl, ConstantShiftSaturatesBound) {
  SymbolExpansion h;
  h.h0 = P::x();
  h.corrections.push_back({1, P::constant(3.0), "user"});
  const WeylReport r = weyl_check(h, 10);
  EXPECT_NEAR(r.max_gap, 0.3, 1e-13);
  EXPECT_NEAR(r.bound, 0.3, 1e-13);
  EXPECT_TRUE(r.passed);
}

TEST(Weyl, NeedsACorrection) {
  SymbolExpansion h;
  h.h0 = P::z();
  EXPECT_THROW(weyl_check(h, 8), PreconditionError);
}

TEST(QuasiEigenvector, HeightAtNorthPole) {
  for (int N : {2, 10, 100}) EXPECT_NEAR(quasi_eigenvector_defect(P::z(), 1.0, SpherePoint::north(), N), 2.0 / (N + 2), 1e-13);
}

TEST(QuasiEigenvector, DecaysAtRegularLevelPoint) {
  const P h = P::parse("-0.5 z^2 - 0.5 x").reduced();
  const SpherePoint w = SpherePoint::from_angles(1.0, 2.0);
  const double E = h.value(w);
  const double d1 = quasi_eigenvector_defect(h, E, w, 64);
  const double d2 = quasi_eigenvector_defect(h, E, w, 256);
  EXPECT_NEAR(d1 / d2, 2.0, 0.2);
}

TEST(QuasiEigenvector, RequiresPointOnLevelSet) {
  EXPECT_THROW(quasi_eigenvector_defect(P::z(), 0.5, SpherePoint::north(), 8), PreconditionError);
}
