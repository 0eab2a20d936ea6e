#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sphq/dicke.hpp"
#include "sphq/eigensolver.hpp"
#include "sphq/polynomial.hpp"
#include "sphq/quantize.hpp"
#include "sphq/sphere_point.hpp"
#include "sphq/spin_models.hpp"

namespace sphq {

/// <psi, Q(f) psi> for real f (reduced internally).
double classical_expectation(const DickeVector& psi, const SpherePolynomial& f);

/// Finite convex combination of point evaluations, omega(f) = sum_i w_i f(Omega_i).
struct ClassicalLimitState {
  std::vector<SpherePoint> points;
  std::vector<double> weights;

  double evaluate(const SpherePolynomial& f) const;
  /// -sum w_i log w_i
  double entropy() const;
  /// Image of the state under a point map.
  ClassicalLimitState mapped(const std::function<SpherePoint(const SpherePoint&)>& g) const;
};

/// (x, y, z) -> (x, -y, -z), the reflection generated by the index reversal F.
SpherePoint z2_reflect(const SpherePoint& p);

/// Uniform mixture over the critical points of h0 at level E. Throws PreconditionError when
/// the set is empty or contains a degenerate point.
ClassicalLimitState limit_state_prediction(const SpherePolynomial& h0, double E);

/// Which eigenvector to follow along N.
struct StateSelector {
  enum class Kind { Index, Energy };
  Kind kind = Kind::Index;
  /// Kind::Index: position in the ascending spectrum (0 = ground state).
  int index = 0;
  /// Kind::Energy: eigenvalue closest to this target at every N.
  double energy = 0.0;

  static StateSelector ground() { return {}; }
  static StateSelector at_energy(double e) { return {Kind::Energy, 0, e}; }
};

struct ConvergenceRow {
  int N = 0;
  std::string f;
  double eigenvalue = 0.0;
  double value = 0.0;
  double target = 0.0;
  double residual = 0.0;
};

struct ConvergenceCurve {
  std::string f;
  double target = 0.0;
  std::vector<double> values;
  std::vector<double> residuals;
  /// slope of log residual against log N (NaN when fewer than two residuals are nonzero)
  double fitted_exponent = 0.0;
  /// "converging", "inconclusive" or "diverging"
  std::string verdict;
};

struct ConvergenceReport {
  std::string model;
  std::vector<int> N_grid;
  /// level whose critical points define the predicted limit state
  double limit_energy = 0.0;
  ClassicalLimitState limit_state;
  std::vector<double> eigenvalues;
  std::vector<ConvergenceCurve> curves;
  /// set when the selected eigenvector is not uniquely defined at some N
  bool tracking_failed = false;
  std::string tracking_note;

  std::vector<ConvergenceRow> rows() const;
};

/// Expectations of each f in the selected eigenvector along N_grid, compared with the
/// predicted limit state. N_grid must be geometric with at least 4 points.
ConvergenceReport convergence_study(const ModelSpec& spec, const StateSelector& which,
                                    const std::vector<SpherePolynomial>& f_list, const std::vector<int>& N_grid);

/// Residuals below this are treated as exact zeros in verdicts and exponent fits.
inline constexpr double kResidualFloor = 1e-12;

/// Verdict shared by the convergence studies: residuals decrease (10% upticks allowed) and
/// the last one is below threshold.
std::string residual_verdict(const std::vector<double>& residuals, double threshold);
/// Least-squares slope of log r against log N over entries with r > kResidualFloor.
double fitted_exponent(const std::vector<int>& N, const std::vector<double>& r);

/// Effective Planck constant and bracket orientation in
///   s (i/hbar) [Q(f), Q(g)] - Q({f, g}).
struct DGRConvention {
  enum class Hbar { OneOverN, TwoOverN, TwoOverNPlus2 };
  Hbar hbar = Hbar::TwoOverN;
  int sign = -1;

  double hbar_at(int N) const;
  std::string describe() const;
};

struct DGRCandidate {
  DGRConvention convention;
  double defect = 0.0;         // (x, y) at N_small
  double defect_doubled = 0.0; // (x, y) at 2 N_small
};

struct DGRCalibration {
  DGRConvention chosen;
  int N_small = 32;
  /// every convention in the kappa/N family that was ranked
  std::vector<DGRCandidate> candidates;
  /// hbar = 2/(N+2), evaluated for reference only
  std::vector<DGRCandidate> diagnostics;
};

/// Ranks hbar in {1/N, 2/N} x s in {+1, -1} by the (x, y) defect at N_small and keeps the
/// smallest, provided it decreases from N_small to 2 N_small. hbar = 2/(N+2) makes the defect
/// of every pair of linear symbols vanish identically at finite N, leaving no decay to
/// measure, so it is reported as a diagnostic and not ranked. Throws NumericalError when the
/// best candidate does not decay.
DGRCalibration dgr_calibrate(int N_small = 32);

/// Operator norm of s (i/hbar) [Q(f), Q(g)] - Q({f, g}).
double dgr_defect(const SpherePolynomial& f, const SpherePolynomial& g, int N, const DGRConvention& conv);

/// ||Q(f) Q(g) - Q(fg)||, fg reduced before quantizing.
double product_defect(const SpherePolynomial& f, const SpherePolynomial& g, int N);

struct Z2Report {
  /// ||F psi - psi|| and ||F psi + psi||
  double even_defect = 0.0;
  double odd_defect = 0.0;
  /// max over the test grid of |B(x,y,z) - B(x,-y,-z)|
  double husimi_asymmetry = 0.0;
  bool invariant(double tol = 1e-8) const {
    return std::min(even_defect, odd_defect) <= tol && husimi_asymmetry <= tol;
  }
};

Z2Report z2_check(const DickeVector& psi, int grid_points = 2000);

/// Husimi mass of the geodesic cap {d(W, center) <= radius}.
HusimiMass cap_mass(const DickeVector& psi, const SpherePoint& center, double radius,
                    const HusimiMassOptions& opts = {});

struct SSBRow {
  int N = 0;
  double ground_energy = 0.0;
  bool degenerate = false;
  int flip_parity = 0;
  Z2Report z2;
  /// one entry per predicted support point
  std::vector<double> cap_masses;
  double cap_total = 0.0;
};

struct SSBReport {
  std::string model;
  double cap_radius = 0.3;
  ClassicalLimitState limit_state;
  std::vector<SSBRow> rows;
  /// two support points, every finite-N ground state Z2-invariant, and at the largest N each
  /// cap mass in [0.4, 0.6] with total >= 0.95
  bool symmetry_broken = false;
  /// one support point with cap mass >= 0.95 at the largest N
  bool unimodal = false;
  std::string verdict;
};

SSBReport ssb_report(const ModelSpec& spec, const std::vector<int>& N_grid, double cap_radius = 0.3);

/// Husimi mass on {W : |h0(W) - E| >= margin}.
HusimiMass forbidden_region_mass(const DickeVector& psi, const SpherePolynomial& h0, double E, double margin,
                                 const HusimiMassOptions& opts = {});

}  // namespace sphq
