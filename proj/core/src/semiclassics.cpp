#include "sphq/semiclassics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "sphq/errors.hpp"
#include "sphq/parallel.hpp"
#include "sphq/sphere_optimize.hpp"

namespace sphq {

double classical_expectation(const DickeVector& psi, const SpherePolynomial& f) {
  if (!f.is_real()) throw PreconditionError("classical_expectation needs a real observable");
  const QuantizedOperator Q = quantize(f.reduced(), psi.N());
  const auto Qv = Q.apply(psi.coeffs());
  return psi.inner(DickeVector(psi.N(), Qv)).real();
}

double ClassicalLimitState::evaluate(const SpherePolynomial& f) const {
  double s = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) s += weights[i] * f.value(points[i]);
  return s;
}

double ClassicalLimitState::entropy() const {
  double s = 0.0;
  for (double w : weights)
    if (w > 0.0) s -= w * std::log(w);
  return s;
}

ClassicalLimitState ClassicalLimitState::mapped(const std::function<SpherePoint(const SpherePoint&)>& g) const {
  ClassicalLimitState out = *this;
  for (auto& p : out.points) p = g(p);
  return out;
}

SpherePoint z2_reflect(const SpherePoint& p) { return SpherePoint::from_cartesian({p.x(), -p.y(), -p.z()}); }

ClassicalLimitState limit_state_prediction(const SpherePolynomial& h0, double E) {
  const auto crit = critical_points(h0, E);
  if (crit.empty()) {
    std::ostringstream msg;
    msg << "no critical point of h0 at level " << E << "; the limit-state prediction does not apply";
    throw PreconditionError(msg.str());
  }
  for (const auto& c : crit)
    if (!c.nondegenerate) {
      std::ostringstream msg;
      msg << "degenerate critical point at (" << c.point.x() << ", " << c.point.y() << ", " << c.point.z()
          << "), Hessian determinant " << c.hessian_det << "; the limit-state prediction does not apply";
      throw PreconditionError(msg.str());
    }
  ClassicalLimitState st;
  for (const auto& c : crit) st.points.push_back(c.point);
  st.weights.assign(crit.size(), 1.0 / static_cast<double>(crit.size()));
  return st;
}

std::vector<ConvergenceRow> ConvergenceReport::rows() const {
  std::vector<ConvergenceRow> out;
  for (std::size_t i = 0; i < N_grid.size(); ++i)
    for (const auto& c : curves)
      out.push_back({N_grid[i], c.f, eigenvalues[i], c.values[i], c.target, c.residuals[i]});
  return out;
}

std::string residual_verdict(const std::vector<double>& residuals, double threshold) {
  if (residuals.empty()) return "inconclusive";
  for (double r : residuals)
    if (!std::isfinite(r)) return "inconclusive";
  auto clean = [](double r) { return r <= kResidualFloor ? 0.0 : r; };
  bool monotone = true;
  for (std::size_t i = 1; i < residuals.size(); ++i)
    if (clean(residuals[i]) > 1.1 * clean(residuals[i - 1])) monotone = false;
  const double last = clean(residuals.back());
  if (monotone && last < threshold) return "converging";
  if (last > 1.1 * clean(residuals.front())) return "diverging";
  return "inconclusive";
}

double fitted_exponent(const std::vector<int>& N, const std::vector<double>& r) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < N.size() && i < r.size(); ++i) {
    if (!(r[i] > kResidualFloor)) continue;
    const double lx = std::log(static_cast<double>(N[i])), ly = std::log(r[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

void require_geometric(const std::vector<int>& grid, std::size_t min_points) {
  if (grid.size() < min_points) {
    std::ostringstream msg;
    msg << "N grid needs at least " << min_points << " points";
    throw PreconditionError(msg.str());
  }
  const double ratio = static_cast<double>(grid[1]) / grid[0];
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double q = static_cast<double>(grid[i]) / grid[i - 1];
    if (!(q > 1.0) || std::abs(q - ratio) > 1e-9 * ratio)
      throw PreconditionError("N grid must be strictly increasing and geometric");
  }
}

struct TrackedState {
  EigenPair pair;
  bool ambiguous = false;
};

TrackedState track(const QuantizedOperator& H, const StateSelector& which) {
  TrackedState t;
  const double tol = 1e-10 * std::max(H.max_abs(), 1e-300);
  if (which.kind == StateSelector::Kind::Index && which.index == 0) {
    t.pair = ground_state(H);
    // a degenerate pair inside a single flip sector has no invariant label
    t.ambiguous = t.pair.degenerate && t.pair.flip_parity == 0;
    return t;
  }
  const Spectrum sp = eigh(H);
  double target = which.energy;
  if (which.kind == StateSelector::Kind::Index) {
    if (which.index < 0 || which.index >= static_cast<int>(sp.size()))
      throw PreconditionError("eigen-index outside the spectrum");
    target = sp.eigenvalues[which.index];
    const int i = which.index;
    const bool close_below = i > 0 && sp.eigenvalues[i] - sp.eigenvalues[i - 1] < tol;
    const bool close_above = i + 1 < static_cast<int>(sp.size()) && sp.eigenvalues[i + 1] - sp.eigenvalues[i] < tol;
    t.ambiguous = close_below || close_above;
  } else {
    const auto it = std::lower_bound(sp.eigenvalues.begin(), sp.eigenvalues.end(), target);
    if (it != sp.eigenvalues.begin() && it != sp.eigenvalues.end())
      t.ambiguous = std::abs((*it - target) - (target - *std::prev(it))) < tol;
  }
  t.pair = eigenpair_near(H, target);
  return t;
}

}  // namespace

ConvergenceReport convergence_study(const ModelSpec& spec, const StateSelector& which,
                                    const std::vector<SpherePolynomial>& f_list, const std::vector<int>& N_grid) {
  require_geometric(N_grid, 4);
  for (const auto& f : f_list)
    if (!f.is_real()) throw PreconditionError("convergence_study observables must be real");
  ConvergenceReport rep;
  rep.model = spec.describe();
  rep.N_grid = N_grid;
  const SymbolExpansion sym = model_symbol(spec);
  rep.limit_energy = which.kind == StateSelector::Kind::Energy ? which.energy : range(sym.h0).lo;

  std::string prediction_error;
  bool have_prediction = true;
  try {
    rep.limit_state = limit_state_prediction(sym.h0, rep.limit_energy);
  } catch (const PreconditionError& e) {
    have_prediction = false;
    prediction_error = e.what();
  }

  const std::size_t nN = N_grid.size();
  std::vector<TrackedState> states(nN);
  std::vector<std::vector<double>> values(nN);
  parallel_for(nN, [&](std::size_t i) {
    const int N = N_grid[i];
    states[i] = track(hamiltonian(spec, N), which);
    for (const auto& f : f_list) values[i].push_back(classical_expectation(states[i].pair.vector, f));
  });

  std::ostringstream note;
  for (std::size_t i = 0; i < nN; ++i) {
    rep.eigenvalues.push_back(states[i].pair.value);
    if (states[i].ambiguous) {
      rep.tracking_failed = true;
      note << "eigenvector not uniquely defined at N=" << N_grid[i] << "; ";
    }
  }
  if (!have_prediction) note << prediction_error;
  rep.tracking_note = note.str();

  for (std::size_t j = 0; j < f_list.size(); ++j) {
    ConvergenceCurve c;
    c.f = f_list[j].to_string();
    c.target = have_prediction ? rep.limit_state.evaluate(f_list[j]) : std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < nN; ++i) {
      c.values.push_back(values[i][j]);
      c.residuals.push_back(std::abs(values[i][j] - c.target));
    }
    c.fitted_exponent = fitted_exponent(N_grid, c.residuals);
    if (rep.tracking_failed || !have_prediction)
      c.verdict = "inconclusive";
    else
      c.verdict = residual_verdict(c.residuals, 0.02 * (1.0 + std::abs(c.target)));
    rep.curves.push_back(std::move(c));
  }
  return rep;
}

double DGRConvention::hbar_at(int N) const {
  switch (hbar) {
    case Hbar::OneOverN:
      return 1.0 / N;
    case Hbar::TwoOverN:
      return 2.0 / N;
    case Hbar::TwoOverNPlus2:
      return 2.0 / (N + 2.0);
  }
  return 1.0 / N;
}

std::string DGRConvention::describe() const {
  std::string h = hbar == Hbar::OneOverN ? "1/N" : hbar == Hbar::TwoOverN ? "2/N" : "2/(N+2)";
  return "hbar=" + h + " s=" + (sign > 0 ? "+1" : "-1");
}

double dgr_defect(const SpherePolynomial& f, const SpherePolynomial& g, int N, const DGRConvention& conv) {
  if (!f.is_real() || !g.is_real()) throw PreconditionError("dgr_defect needs real symbols");
  const QuantizedOperator A = quantize(f.reduced(), N);
  const QuantizedOperator B = quantize(g.reduced(), N);
  const QuantizedOperator C = A * B - B * A;
  const SpherePolynomial bracket = poisson_bracket(f.reduced(), g.reduced());
  const QuantizedOperator P = quantize(bracket, N);
  QuantizedOperator D = cplx(0.0, conv.sign / conv.hbar_at(N)) * C - P;
  D.hermitize();
  return operator_norm(D);
}

DGRCalibration dgr_calibrate(int N_small) {
  if (N_small < 2) throw PreconditionError("dgr_calibrate needs N_small >= 2");
  const auto x = SpherePolynomial::x(), y = SpherePolynomial::y();
  auto evaluate = [&](DGRConvention c) {
    return DGRCandidate{c, dgr_defect(x, y, N_small, c), dgr_defect(x, y, 2 * N_small, c)};
  };
  DGRCalibration cal;
  cal.N_small = N_small;
  for (auto h : {DGRConvention::Hbar::OneOverN, DGRConvention::Hbar::TwoOverN})
    for (int s : {+1, -1}) cal.candidates.push_back(evaluate({h, s}));
  for (int s : {+1, -1}) cal.diagnostics.push_back(evaluate({DGRConvention::Hbar::TwoOverNPlus2, s}));
  const auto best = std::min_element(cal.candidates.begin(), cal.candidates.end(),
                                     [](const DGRCandidate& a, const DGRCandidate& b) { return a.defect < b.defect; });
  if (!(best->defect_doubled < best->defect)) {
    std::ostringstream msg;
    msg << "no DGR convention shows a decaying defect: best " << best->convention.describe() << " gives "
        << best->defect << " at N=" << N_small << " and " << best->defect_doubled << " at N=" << 2 * N_small;
    throw NumericalError(msg.str());
  }
  cal.chosen = best->convention;
  return cal;
}

double product_defect(const SpherePolynomial& f, const SpherePolynomial& g, int N) {
  if (!f.is_real() || !g.is_real()) throw PreconditionError("product_defect needs real symbols");
  const QuantizedOperator A = quantize(f.reduced(), N);
  const QuantizedOperator B = quantize(g.reduced(), N);
  const QuantizedOperator P = quantize((f * g).reduced(), N);
  return operator_norm(A * B - P);
}

Z2Report z2_check(const DickeVector& psi, int grid_points) {
  Z2Report r;
  const DickeVector F = psi.flipped();
  double e = 0.0, o = 0.0;
  for (int k = 0; k <= psi.N(); ++k) {
    e += std::norm(F[k] - psi[k]);
    o += std::norm(F[k] + psi[k]);
  }
  r.even_defect = std::sqrt(e);
  r.odd_defect = std::sqrt(o);
  const auto grid = fibonacci_sphere(grid_points);
  std::vector<double> asym(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    asym[i] = std::abs(husimi_density(psi, grid[i]) - husimi_density(psi, z2_reflect(grid[i])));
  });
  r.husimi_asymmetry = *std::max_element(asym.begin(), asym.end());
  return r;
}

HusimiMass cap_mass(const DickeVector& psi, const SpherePoint& center, double radius, const HusimiMassOptions& opts) {
  const double cos_r = std::cos(radius);
  const Vec3 c = center.xyz();
  return husimi_mass(psi, [c, cos_r](const SpherePoint& p) { return dot(p.xyz(), c) >= cos_r; }, opts);
}

SSBReport ssb_report(const ModelSpec& spec, const std::vector<int>& N_grid, double cap_radius) {
  if (N_grid.empty()) throw PreconditionError("ssb_report needs at least one N");
  if (!(cap_radius > 0.0)) throw PreconditionError("cap radius must be positive");
  SSBReport rep;
  rep.model = spec.describe();
  rep.cap_radius = cap_radius;
  const SymbolExpansion sym = model_symbol(spec);
  rep.limit_state = limit_state_prediction(sym.h0, range(sym.h0).lo);
  for (std::size_t a = 0; a < rep.limit_state.points.size(); ++a)
    for (std::size_t b = a + 1; b < rep.limit_state.points.size(); ++b)
      if (rep.limit_state.points[a].geodesic_distance(rep.limit_state.points[b]) <= 2.0 * cap_radius)
        throw PreconditionError("cap radius too large: caps about the limit-state points overlap");

  rep.rows.resize(N_grid.size());
  for (std::size_t i = 0; i < N_grid.size(); ++i) {
    SSBRow& row = rep.rows[i];
    row.N = N_grid[i];
    const EigenPair g = ground_state(hamiltonian(spec, row.N));
    row.ground_energy = g.value;
    row.degenerate = g.degenerate;
    row.flip_parity = g.flip_parity;
    row.z2 = z2_check(g.vector);
    for (const auto& p : rep.limit_state.points) {
      const double m = cap_mass(g.vector, p, cap_radius).mass;
      row.cap_masses.push_back(m);
      row.cap_total += m;
    }
  }
  const SSBRow& last = rep.rows.back();
  const bool all_invariant =
      std::all_of(rep.rows.begin(), rep.rows.end(), [](const SSBRow& r) { return r.z2.invariant(); });
  const std::size_t n = rep.limit_state.points.size();
  if (n == 2) {
    const bool balanced = std::all_of(last.cap_masses.begin(), last.cap_masses.end(),
                                      [](double m) { return m >= 0.4 && m <= 0.6; });
    rep.symmetry_broken = all_invariant && balanced && last.cap_total >= 0.95;
  } else if (n == 1) {
    rep.unimodal = last.cap_total >= 0.95;
  }
  std::ostringstream v;
  if (rep.symmetry_broken)
    v << "finite-N ground states are pure and Z2-invariant with bimodal Husimi mass; the limit state is the "
         "mixture of "
      << n << " points (entropy " << rep.limit_state.entropy() << ")";
  else if (rep.unimodal)
    v << "unique minimum: unimodal Husimi mass, no symmetry breaking";
  else
    v << "no clean symmetry-breaking signature at N=" << last.N << " (" << n << " support points, cap total "
      << last.cap_total << ", Z2-invariant " << (all_invariant ? "yes" : "no") << ")";
  rep.verdict = v.str();
  return rep;
}

HusimiMass forbidden_region_mass(const DickeVector& psi, const SpherePolynomial& h0, double E, double margin,
                                 const HusimiMassOptions& opts) {
  if (!(margin > 0.0)) throw PreconditionError("forbidden_region_mass needs margin > 0");
  if (!h0.is_real()) throw PreconditionError("forbidden_region_mass needs a real symbol");
  const SpherePolynomial h = h0.reduced();
  return husimi_mass(psi, [&h, E, margin](const SpherePoint& p) { return std::abs(h.value(p) - E) >= margin; },
                     opts);
}

}  // namespace sphq
