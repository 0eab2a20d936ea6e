#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sphq/errors.hpp"
#include "sphq/semiclassics.hpp"
#include "sphq/sphere_optimize.hpp"
#include "sphq_cli/random.hpp"

using namespace sphq;
using sphq::cli::random_polynomial;
using sphq::cli::random_sphere_point;
using sphq::cli::random_unit_vector;
using sphq::cli::Rng;
using P = SpherePolynomial;

namespace {

const P kCw = P::parse("-0.5 z^2 - 0.5 x").reduced();

DGRConvention conv(DGRConvention::Hbar h, int sign) {
  DGRConvention c;
  c.hbar = h;
  c.sign = sign;
  return c;
}

}  // namespace

TEST(ClassicalExpectation, Examples) {
  const int N = 20;
  const DickeVector north = coherent_state(N, SpherePoint::north());
  EXPECT_NEAR(classical_expectation(north, P::z()), N / (N + 2.0), 1e-14);
  EXPECT_NEAR(classical_expectation(north, P::constant(1.0)), 1.0, 1e-14);
  EXPECT_NEAR(classical_expectation(DickeVector::basis(N, N / 2), P::z()), 0.0, 1e-14);
  EXPECT_THROW(classical_expectation(north, P::parse("(0,1) x")), PreconditionError);
}

TEST(ClassicalExpectation, AgreesWithBerezinOnCoherentStates) {
  Rng rng(51);
  const P f = random_polynomial(rng, 3);
  const SpherePoint w = random_sphere_point(rng);
  EXPECT_NEAR(classical_expectation(coherent_state(30, w), f), berezin_transform(f, 30, w), 1e-13);
}

TEST(LimitState, CurieWeissGroundLevel) {
  const ClassicalLimitState s = limit_state_prediction(kCw, -5.0 / 8.0);
  ASSERT_EQ(s.points.size(), 2u);
  EXPECT_NEAR(s.weights[0], 0.5, 1e-15);
  EXPECT_NEAR(s.evaluate(P::x()), 0.5, 1e-9);
  EXPECT_NEAR(s.evaluate(P::z()), 0.0, 1e-9);
  EXPECT_NEAR(s.evaluate(P::monomial(0, 0, 2)), 0.75, 1e-9);
  EXPECT_NEAR(s.entropy(), std::log(2.0), 1e-15);
}

TEST(LimitState, StrongFieldHasSingleMinimum) {
  const P h = P::parse("-0.5 z^2 - 1.5 x").reduced();
  const ClassicalLimitState s = limit_state_prediction(h, range(h).lo);
  ASSERT_EQ(s.points.size(), 1u);
  EXPECT_NEAR(s.points[0].x(), 1.0, 1e-9);
  EXPECT_EQ(s.entropy(), 0.0);
}

TEST(LimitState, RejectsEmptyAndDegenerateSets) {
  EXPECT_THROW(limit_state_prediction(P::z(), 2.0), PreconditionError);
  EXPECT_THROW(limit_state_prediction(P::parse("z^3").reduced(), 0.0), PreconditionError);
}

TEST(LimitState, IsAStateAndIsReflectionInvariant) {
  const ClassicalLimitState s = limit_state_prediction(kCw, -5.0 / 8.0);
  double wsum = 0.0;
  for (double w : s.weights) {
    EXPECT_GE(w, 0.0);
    wsum += w;
  }
  EXPECT_NEAR(wsum, 1.0, 1e-15);
  EXPECT_NEAR(s.evaluate(P::constant(1.0)), 1.0, 1e-15);
  Rng rng(52);
  const ClassicalLimitState r = s.mapped(z2_reflect);
  for (int t = 0; t < 10; ++t) {
    const P f = random_polynomial(rng, 3);
    EXPECT_NEAR(r.evaluate(f), s.evaluate(f), 1e-9);
    const P sq = (f * f).reduced();
    EXPECT_GE(s.evaluate(sq), -1e-15);
  }
}

TEST(Z2Reflect, Action) {
  const SpherePoint p = SpherePoint::from_cartesian({0.3, 0.4, std::sqrt(0.75)});
  const SpherePoint q = z2_reflect(p);
  EXPECT_NEAR(q.x(), 0.3, 1e-15);
  EXPECT_NEAR(q.y(), -0.4, 1e-15);
  EXPECT_NEAR(q.z(), -std::sqrt(0.75), 1e-15);
}

TEST(Convergence, CurieWeissGroundState) {
  const ConvergenceReport rep =
      convergence_study(ModelSpec::curie_weiss(1.0, 0.5), StateSelector::ground(),
                        {P::x(), P::monomial(0, 0, 2), P::z()}, {64, 128, 256, 512});
  ASSERT_EQ(rep.curves.size(), 3u);
  EXPECT_FALSE(rep.tracking_failed);
  EXPECT_NEAR(rep.limit_energy, -5.0 / 8.0, 1e-9);
  EXPECT_NEAR(rep.curves[0].target, 0.5, 1e-9);
  EXPECT_NEAR(rep.curves[1].target, 0.75, 1e-9);
  EXPECT_EQ(rep.curves[0].verdict, "converging");
  EXPECT_EQ(rep.curves[1].verdict, "converging");
  EXPECT_NEAR(rep.curves[0].fitted_exponent, -1.0, 0.15);
  for (double v : rep.curves[2].values) EXPECT_NEAR(v, 0.0, 1e-10);
  EXPECT_EQ(rep.rows().size(), 12u);
}

TEST(Convergence, GridPreconditions) {
  const ModelSpec cw = ModelSpec::curie_weiss(1.0, 0.5);
  EXPECT_THROW(convergence_study(cw, StateSelector::ground(), {P::x()}, {64, 128, 256}), PreconditionError);
  EXPECT_THROW(convergence_study(cw, StateSelector::ground(), {P::x()}, {64, 128, 200, 512}), PreconditionError);
}

TEST(ResidualVerdict, Classification) {
  EXPECT_EQ(residual_verdict({0.1, 0.05, 0.025, 0.0125}, 0.02), "converging");
  EXPECT_EQ(residual_verdict({0.1, 0.105, 0.05, 0.01}, 0.02), "converging");
  EXPECT_EQ(residual_verdict({0.1, 0.2, 0.05, 0.01}, 0.02), "inconclusive");
  EXPECT_EQ(residual_verdict({0.1, 0.1, 0.1, 0.1}, 0.02), "inconclusive");
  EXPECT_EQ(residual_verdict({0.1, 0.2, 0.4, 0.8}, 0.02), "diverging");
  EXPECT_EQ(residual_verdict({1e-14, 2e-14, 1e-15}, 0.02), "converging");
  EXPECT_EQ(residual_verdict({}, 0.02), "inconclusive");
}

TEST(FittedExponent, PowerLaw) {
  EXPECT_NEAR(fitted_exponent({10, 20, 40}, {0.3, 0.15, 0.075}), -1.0, 1e-12);
  EXPECT_NEAR(fitted_exponent({10, 100}, {1.0, 0.1 * 0.1}), -2.0, 1e-12);
  EXPECT_TRUE(std::isnan(fitted_exponent({10, 20}, {0.0, 0.1})));
}

TEST(Dgr, ExampleAtEight) {
  const DGRConvention c = conv(DGRConvention::Hbar::TwoOverN, -1);
  EXPECT_NEAR(dgr_defect(P::x(), P::y(), 8, c), 0.16, 1e-13);
  EXPECT_NEAR(dgr_defect(P::x(), P::y(), 30, c), 2.0 * 30 / (32.0 * 32.0), 1e-13);
}

TEST(Dgr, SelfPairHasNoDefect) {
  Rng rng(53);
  const P f = random_polynomial(rng, 3);
  EXPECT_LE(dgr_defect(f, f, 20, conv(DGRConvention::Hbar::TwoOverN, -1)), 1e-12);
}

TEST(Dgr, WrongConventionsDoNotDecay) {
  const double wrong_sign = dgr_defect(P::x(), P::y(), 64, conv(DGRConvention::Hbar::TwoOverN, +1));
  EXPECT_GT(wrong_sign, 1.5);
  const double wrong_scale = dgr_defect(P::x(), P::y(), 64, conv(DGRConvention::Hbar::OneOverN, -1));
  EXPECT_GT(wrong_scale, 0.5);
  EXPECT_NEAR(dgr_defect(P::x(), P::y(), 64, conv(DGRConvention::Hbar::TwoOverNPlus2, -1)), 0.0, 1e-12);
}

TEST(Dgr, HalvesWhenNDoubles) {
  const DGRConvention c = conv(DGRConvention::Hbar::TwoOverN, -1);
  for (const auto& [f, g] : {std::pair{P::x(), P::z()}, std::pair{P::parse("x^2").reduced(), P::parse("y z")}}) {
    std::vector<double> r;
    for (int N : {32, 64, 128, 256}) r.push_back(dgr_defect(f, g, N, c));
    // the ratio approaches 2 from below as the 1/N^2 part dies out
    for (std::size_t i = 1; i + 1 < r.size(); ++i) EXPECT_LT(r[i - 1] / r[i], r[i] / r[i + 1] + 1e-9);
    EXPECT_NEAR(r[2] / r[3], 2.0, 0.1);
  }
}

TEST(Dgr, CalibrationPicksTwoOverNNegative) {
  const DGRCalibration cal = dgr_calibrate(16);
  EXPECT_EQ(cal.chosen.hbar, DGRConvention::Hbar::TwoOverN);
  EXPECT_EQ(cal.chosen.sign, -1);
  EXPECT_EQ(cal.candidates.size(), 4u);
  EXPECT_FALSE(cal.diagnostics.empty());
  EXPECT_EQ(cal.chosen.describe(), "hbar=2/N s=-1");
}

TEST(ProductDefect, HeightFunctionClosedForm) {
  for (int N : {2, 8, 64, 256}) EXPECT_NEAR(product_defect(P::z(), P::z(), N), 1.0 / (N + 3), 1e-13) << N;
}

TEST(ProductDefect, ConstantsAreExact) {
  EXPECT_LE(product_defect(P::constant(2.0), P::x(), 10), 1e-13);
}

TEST(Z2Check, CoherentStateIsNotInvariant) {
  const SpherePoint p = SpherePoint::from_cartesian({0.5, 0.0, std::sqrt(0.75)});
  const Z2Report r = z2_check(coherent_state(64, p));
  EXPECT_GT(r.husimi_asymmetry, 0.9);
  EXPECT_FALSE(r.invariant());
}

TEST(Z2Check, MiddleDickeStateIsInvariant) {
  const Z2Report r = z2_check(DickeVector::basis(10, 5));
  EXPECT_LE(r.even_defect, 1e-15);
  EXPECT_NEAR(r.odd_defect, 2.0, 1e-15);
  EXPECT_LE(r.husimi_asymmetry, 1e-14);
  EXPECT_TRUE(r.invariant());
}

TEST(Z2Check, ParitySymmetrizedStatesAreInvariant) {
  Rng rng(54);
  const DickeVector v = random_unit_vector(rng, 13);
  DickeVector odd(13);
  for (int k = 0; k <= 13; ++k) odd[k] = v[k] - v.flipped()[k];
  const Z2Report r = z2_check(odd.normalized());
  EXPECT_LE(r.odd_defect, 1e-14);
  EXPECT_TRUE(r.invariant());
}

TEST(CapMass, CoherentStateConcentrates) {
  const SpherePoint c = SpherePoint::from_angles(1.0, 0.3);
  const HusimiMass m = cap_mass(coherent_state(256, c), c, 0.3);
  EXPECT_TRUE(m.converged);
  EXPECT_GT(m.mass, 0.99);
}

TEST(Ssb, CurieWeissBreaksSymmetry) {
  const SSBReport r = ssb_report(ModelSpec::curie_weiss(1.0, 0.5), {64, 128, 256});
  EXPECT_TRUE(r.symmetry_broken) << r.verdict;
  EXPECT_FALSE(r.unimodal);
  ASSERT_EQ(r.rows.size(), 3u);
  const SSBRow& last = r.rows.back();
  ASSERT_EQ(last.cap_masses.size(), 2u);
  EXPECT_NEAR(last.cap_masses[0], 0.5, 0.05);
  EXPECT_NEAR(last.cap_masses[1], 0.5, 0.05);
  for (const auto& row : r.rows) EXPECT_TRUE(row.z2.invariant());
}

TEST(Ssb, StrongFieldIsUnimodal) {
  const SSBReport r = ssb_report(ModelSpec::curie_weiss(1.0, 1.5), {64, 128, 256});
  EXPECT_TRUE(r.unimodal) << r.verdict;
  EXPECT_FALSE(r.symmetry_broken);
}

TEST(Ssb, OverlappingCapsAreRejected) {
  EXPECT_THROW(ssb_report(ModelSpec::curie_weiss(1.0, 0.5), {64, 128}, 1.2), PreconditionError);
}

TEST(ForbiddenRegion, GroundStateMassDecays) {
  const ModelSpec spec = ModelSpec::curie_weiss(1.0, 0.5);
  double prev = 1.0;
  for (int N : {32, 64, 128}) {
    const EigenPair g = ground_state(hamiltonian(spec, N));
    const HusimiMass m = forbidden_region_mass(g.vector, kCw, -5.0 / 8.0, 0.2);
    EXPECT_LT(m.mass, prev);
    prev = m.mass;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(ForbiddenRegion, CoherentStateAtMaximum) {
  // the top of z is far from the level z = -1
  const HusimiMass m = forbidden_region_mass(coherent_state(40, SpherePoint::north()), P::z(), -1.0, 0.5);
  EXPECT_NEAR(m.mass, 1.0 - std::pow(0.25, 41), 1e-6);
}
