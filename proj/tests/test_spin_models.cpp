#include <gtest/gtest.h>

#include <cmath>

#include "sphq/eigensolver.hpp"
#include "sphq/errors.hpp"
#include "sphq/quantize.hpp"
#include "sphq/spin_models.hpp"
#include "sphq_cli/tensor_oracle.hpp"
#include "test_support.hpp"

using namespace sphq;
using sphq::testing::dense;
using sphq::testing::dense_eigenvalues;
using sphq::testing::dense_norm;
using P = SpherePolynomial;

namespace {

double max_diff(const cli::DenseMatrix& T, const QuantizedOperator& H) {
  double m = 0.0;
  for (int j = 0; j < T.n; ++j)
    for (int k = 0; k < T.n; ++k) m = std::max(m, std::abs(T(j, k) - H(j, k)));
  return m;
}

}  // namespace

TEST(CollectiveOps, SmallExamples) {
  const auto ops = collective_ops(1);
  EXPECT_DOUBLE_EQ(ops.Sz(0, 0).real(), 0.5);
  EXPECT_DOUBLE_EQ(ops.Sz(1, 1).real(), -0.5);
  EXPECT_DOUBLE_EQ(ops.Sx(0, 1).real(), 0.5);
  EXPECT_DOUBLE_EQ(ops.Sx(1, 0).real(), 0.5);
  EXPECT_NEAR(std::abs(ops.Sy(0, 1)), 0.5, 1e-16);
  EXPECT_EQ(ops.Sy(0, 1), std::conj(ops.Sy(1, 0)));
  const auto o2 = collective_ops(2);
  EXPECT_NEAR(o2.Sx(0, 1).real(), std::sqrt(0.5), 1e-15);
}

TEST(CollectiveOps, CommutatorsAndCasimir) {
  for (int N : {1, 2, 5, 16, 64}) {
    const auto o = collective_ops(N);
    const cplx I(0.0, 1.0);
    EXPECT_LE(max_abs_diff(o.Sx * o.Sy - o.Sy * o.Sx, I * o.Sz), 1e-12) << N;
    EXPECT_LE(max_abs_diff(o.Sy * o.Sz - o.Sz * o.Sy, I * o.Sx), 1e-12) << N;
    EXPECT_LE(max_abs_diff(o.Sz * o.Sx - o.Sx * o.Sz, I * o.Sy), 1e-12) << N;
    const double j = 0.5 * N;
    EXPECT_LE(max_abs_diff(o.Sx * o.Sx + o.Sy * o.Sy + o.Sz * o.Sz, cplx(j * (j + 1)) * QuantizedOperator::identity(N)),
              1e-11);
  }
}

TEST(CurieWeiss, SingleSpin) {
  const auto ev = eigh(cw_hamiltonian(1, 1.0, 1.0)).eigenvalues;
  ASSERT_EQ(ev.size(), 2u);
  // (1/3)(-1/2 -+ 1) from Sz^2 = 1/4 and Sx = +-1/2
  EXPECT_NEAR(ev[0], -0.5, 1e-15);
  EXPECT_NEAR(ev[1], 1.0 / 6.0, 1e-15);
}

TEST(CurieWeiss, NoFieldIsDiagonal) {
  const int N = 10;
  const QuantizedOperator H = cw_hamiltonian(N, 1.0, 0.0);
  EXPECT_EQ(H.effective_halfband(), 0);
  for (int k = 0; k <= N; ++k) {
    const double m = 0.5 * N - k;
    EXPECT_NEAR(H(k, k).real(), -2.0 * m * m / (N * (N + 2.0)), 1e-15);
  }
}

TEST(CurieWeiss, MatchesTensorProductOracle) {
  for (int N = 1; N <= 10; ++N) {
    const auto T = cli::tensor_cw_hamiltonian(N, 1.3, 0.7);
    EXPECT_LE(max_diff(T, cw_hamiltonian(N, 1.3, 0.7)), 1e-13) << N;
  }
}

TEST(Lmg, SingleSpinIsScalar) {
  const QuantizedOperator H = lmg_hamiltonian(1, 1.0, 1.0, 0.0);
  EXPECT_LE(max_abs_diff(H, cplx(-1.0 / 6.0) * QuantizedOperator::identity(1)), 1e-15);
}

TEST(Lmg, HalfbandTwoAndTensorOracle) {
  EXPECT_EQ(lmg_hamiltonian(20, 1.0, 0.4, 0.2).halfband(), 2);
  for (int N = 1; N <= 10; ++N) {
    const auto T = cli::tensor_lmg_hamiltonian(N, 0.9, 0.6, 0.25);
    EXPECT_LE(max_diff(T, lmg_hamiltonian(N, 0.9, 0.6, 0.25)), 1e-13) << N;
  }
}

TEST(Lmg, ParameterValidation) {
  EXPECT_THROW(ModelSpec::lmg(0.0, 0.5, 0.0), PreconditionError);
  EXPECT_THROW(ModelSpec::lmg(1.0, 0.0, 0.0), PreconditionError);
  EXPECT_THROW(ModelSpec::lmg(1.0, 1.5, 0.0), PreconditionError);
  EXPECT_THROW(ModelSpec::lmg(1.0, 0.5, -0.1), PreconditionError);
  EXPECT_NO_THROW(ModelSpec::lmg(1.0, 1.0, 0.0));
}

TEST(Models, FlipSymmetry) {
  for (int N : {3, 8, 31}) {
    const QuantizedOperator cw = cw_hamiltonian(N, 1.0, 0.5);
    EXPECT_LE(max_abs_diff(cw.flipped(), cw), 0.0);
    const QuantizedOperator lmg = lmg_hamiltonian(N, 1.0, 0.5, 0.0);
    EXPECT_LE(max_abs_diff(lmg.flipped(), lmg), 1e-16);
    EXPECT_FALSE(commutes_with_flip(lmg_hamiltonian(N, 1.0, 0.5, 0.3)));
  }
}

TEST(Models, SymbolRelationDecaysLikeOneOverN) {
  const ModelSpec specs[] = {ModelSpec::curie_weiss(1.0, 0.5), ModelSpec::lmg(1.0, 0.5, 0.3)};
  for (const auto& spec : specs) {
    const P h0 = model_symbol(spec).h0;
    double prev = 0.0;
    for (int N : {16, 32, 64, 128}) {
      const double d = operator_norm(hamiltonian(spec, N) - quantize(h0, N));
      EXPECT_LE(d * N, 3.0) << spec.describe() << " N=" << N;
      if (prev > 0.0) EXPECT_GT(prev / d, 1.6);
      prev = d;
    }
  }
}

TEST(ModelSymbol, Examples) {
  const SymbolExpansion cw = model_symbol(ModelSpec::curie_weiss(1.0, 0.5));
  EXPECT_LE(max_coeff_diff(cw.h0, P::parse("-0.5 z^2 - 0.5 x").reduced()), 1e-15);
  ASSERT_EQ(cw.corrections.size(), 1u);
  EXPECT_EQ(cw.corrections[0].order, 1);
  EXPECT_EQ(cw.corrections[0].provenance, "paper-claimed");
  EXPECT_LE(max_coeff_diff(cw.corrections[0].symbol, P::parse("-3 z^2 + 1").reduced()), 1e-15);

  const SymbolExpansion lmg = model_symbol(ModelSpec::lmg(2.0, 0.5, 0.4));
  EXPECT_LE(max_coeff_diff(lmg.h0, P::parse("-0.5 x^2 - 0.25 y^2 - 0.2 z")), 1e-15);
  EXPECT_TRUE(lmg.is_real());

  SymbolExpansion custom;
  custom.h0 = P::z();
  EXPECT_EQ(model_symbol(ModelSpec::custom_symbol(custom)).corrections.size(), 0u);
  EXPECT_EQ(ModelSpec::curie_weiss(1.0, 0.5).describe(), "cw J=1 B=0.5");
}

TEST(ModelSymbol, TruncatedExpansion) {
  SymbolExpansion h;
  h.h0 = P::z();
  h.corrections.push_back({1, P::x(), "user"});
  h.corrections.push_back({2, P::constant(4.0), "user"});
  EXPECT_LE(max_coeff_diff(h.truncated(2), P::parse("z + 0.5 x + 1")), 1e-15);
}

TEST(ModelSymbol, CustomHamiltonianIsQuantizedTruncation) {
  SymbolExpansion h;
  h.h0 = P::parse("-0.5 x^2 + 0.2 z").reduced();
  h.corrections.push_back({1, P::parse("0.3 y").reduced(), "user"});
  const ModelSpec spec = ModelSpec::custom_symbol(h);
  EXPECT_LE(max_abs_diff(hamiltonian(spec, 12), quantize(h.truncated(12), 12)), 0.0);
}

TEST(SymbolFit, CurieWeissIsExactAndDisagreesWithClaim) {
  const SymbolFit fit = symbol_correction_fit(ModelSpec::curie_weiss(1.0, 0.5), {16, 32, 64, 128});
  ASSERT_EQ(fit.expansion.corrections.size(), 1u);
  const P& h1 = fit.expansion.corrections[0].symbol;
  EXPECT_LE(max_coeff_diff(h1, P::parse("-1.5 z^2 + 0.5").reduced()), 1e-9) << h1.to_string();
  for (double r : fit.scaled_residual) EXPECT_LE(r, 1e-6);
  EXPECT_FALSE(fit.agrees_with_claim);
  EXPECT_NEAR(fit.claimed_difference, 1.5, 1e-8);
}

TEST(SymbolFit, LmgClosedForm) {
  const double lambda = 1.0, gamma = 0.5;
  const SymbolFit fit = symbol_correction_fit(ModelSpec::lmg(lambda, gamma, 0.3), {16, 32, 64, 128});
  const P expect =
      P::parse("-0.75 x^2 - 0.375 y^2") + P::constant(lambda * (1.0 + gamma) / 4.0);
  EXPECT_LE(max_coeff_diff(fit.expansion.corrections[0].symbol, expect), 1e-9);
  EXPECT_FALSE(fit.agrees_with_claim);
}

TEST(SymbolFit, IsotropicLmgHasEqualQuadraticCoefficients) {
  const SymbolFit fit = symbol_correction_fit(ModelSpec::lmg(1.0, 1.0, 0.0), {8, 16, 32});
  const P& h1 = fit.expansion.corrections[0].symbol;
  EXPECT_NEAR(h1.coeff(2, 0, 0).real(), h1.coeff(0, 2, 0).real(), 1e-10);
}

TEST(SymbolFit, ZeroCouplingsGiveZero) {
  const SymbolFit fit = symbol_correction_fit(ModelSpec::curie_weiss(0.0, 0.0), {8, 16, 32});
  EXPECT_TRUE(fit.expansion.corrections[0].symbol.is_zero());
}

TEST(SymbolFit, RankDeficiencyIsReported) {
  SymbolExpansion h;
  h.h0 = P::parse("x^4 + y^2 z").reduced();
  EXPECT_THROW(symbol_correction_fit(ModelSpec::custom_symbol(h), {1, 2, 3}), NumericalError);
}

TEST(SymbolFit, CustomCorrectionIsRecovered) {
  SymbolExpansion h;
  h.h0 = P::parse("-0.5 x^2 + 0.2 z").reduced();
  h.corrections.push_back({1, P::parse("0.3 y - 0.1 x z").reduced(), "user"});
  const SymbolFit fit = symbol_correction_fit(ModelSpec::custom_symbol(h), {8, 16, 32});
  EXPECT_LE(max_coeff_diff(fit.expansion.corrections[0].symbol, h.corrections[0].symbol), 1e-9);
}

TEST(GroundState, PerronFrobeniusPositivity) {
  for (int N : {4, 11, 40, 200}) {
    const EigenPair g = ground_state(cw_hamiltonian(N, 1.0, 0.5));
    for (int k = 0; k <= N; ++k) {
      EXPECT_GE(g.vector[k].real(), -1e-12);
      EXPECT_NEAR(g.vector[k].imag(), 0.0, 1e-14);
    }
  }
}

TEST(GroundState, MatchesDirectSolveForSmallN) {
  for (int N = 1; N <= 12; ++N) {
    const QuantizedOperator H = lmg_hamiltonian(N, 1.0, 0.7, 0.2);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense(H));
    const EigenPair g = ground_state(H);
    EXPECT_NEAR(g.value, es.eigenvalues()(0), 1e-13);
    const cplx ov = es.eigenvectors().col(0).dot(sphq::testing::dense(g.vector));
    EXPECT_NEAR(std::abs(ov), 1.0, 1e-10);
  }
}
