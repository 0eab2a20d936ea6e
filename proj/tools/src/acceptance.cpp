#include "sphq_cli/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sphq/eigensolver.hpp"
#include "sphq/quantize.hpp"
#include "sphq/semiclassics.hpp"
#include "sphq/spectral.hpp"
#include "sphq/sphere_optimize.hpp"
#include "sphq/spin_models.hpp"
#include "sphq_cli/random.hpp"
#include "sphq_cli/tensor_oracle.hpp"

namespace sphq::cli {

namespace {

using P = SpherePolynomial;

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond) { ok = ok && cond; }
};

std::vector<int> geometric(int lo, int hi) {
  std::vector<int> out;
  for (int n = lo; n <= hi; n *= 2) out.push_back(n);
  return out;
}

SpherePoint omega_plus() { return SpherePoint::from_cartesian({0.5, 0.0, std::sqrt(3.0) / 2.0}); }
SpherePoint omega_minus() { return SpherePoint::from_cartesian({0.5, 0.0, -std::sqrt(3.0) / 2.0}); }

// 1: axioms of a strict deformation quantization on random polynomials
void axioms(Check& c, Rng& rng) {
  double unit = 0, adj = 0, norm_excess = -1e300, min_eig = 1e300;
  for (int N : {8, 32, 128}) {
    unit = std::max(unit, max_abs_diff(quantize(P::constant(1.0), N), QuantizedOperator::identity(N)));
    for (int s = 0; s < 50; ++s) {
      const P f = random_polynomial(rng, 4, true);
      adj = std::max(adj, max_abs_diff(quantize(f.conj(), N), quantize(f, N).adjoint()));
      const P g = random_polynomial(rng, 4);
      const double sup = sup_norm(g);
      norm_excess = std::max(norm_excess, operator_norm(quantize(g, N)) - sup * (1.0 + 1e-9));
      const P p = random_polynomial(rng, 2);
      min_eig = std::min(min_eig, eigh(quantize((p * p).reduced(), N)).min());
    }
  }
  c.require(unit <= 1e-12);
  c.require(adj <= 1e-13);
  c.require(norm_excess <= 0.0);
  c.require(min_eig >= -1e-10);
  c.detail << "|Q(1)-I|=" << unit << " |Q(conj f)-Q(f)*|=" << adj << " max(||Q(f)||-sup|f|(1+1e-9))=" << norm_excess
           << " min eig Q(p^2)=" << min_eig;
}

// 2: exact finite-N identities
void identities(Check& c, Rng& rng) {
  double spec_err = 0.0;
  for (int N : {1, 2, 7, 64, 513}) {
    const Spectrum s = eigh(quantize(P::z(), N));
    for (int k = 0; k <= N; ++k) {
      const double m = -0.5 * N + k;  // ascending
      spec_err = std::max(spec_err, std::abs(s.eigenvalues[k] - 2.0 * m / (N + 2.0)));
    }
  }
  std::uniform_int_distribution<int> pickN(1, 200);
  double ov_err = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int N = pickN(rng);
    const SpherePoint a = random_sphere_point(rng), b = random_sphere_point(rng);
    const double t = dot(a.xyz(), b.xyz());
    ov_err = std::max(ov_err, std::abs(std::abs(overlap(N, a, b)) - std::pow(0.5 * (1.0 + t), 0.5 * N)));
  }
  double mass_err = 0.0;
  const SphereRegion everywhere = [](const SpherePoint&) { return true; };
  for (int N : {1, 8, 64, 256}) {
    mass_err = std::max(mass_err, std::abs(husimi_mass(random_unit_vector(rng, N), everywhere).mass - 1.0));
    mass_err = std::max(mass_err,
                        std::abs(husimi_mass(coherent_state(N, random_sphere_point(rng)), everywhere).mass - 1.0));
  }
  std::uniform_int_distribution<int> pickB(1, 64);
  double barg_err = 0.0;
  for (int i = 0; i < 100; ++i) {
    const DickeVector psi = random_unit_vector(rng, pickB(rng));
    barg_err = std::max(barg_err, std::abs(bargmann_transform(psi).norm() - psi.norm()));
  }
  c.require(spec_err <= 1e-12);
  c.require(ov_err <= 1e-12);
  c.require(mass_err <= 1e-10);
  c.require(barg_err <= 1e-8);
  c.detail << "spec(Q(z)) err=" << spec_err << " overlap err=" << ov_err << " Husimi mass err=" << mass_err
           << " Bargmann isometry err=" << barg_err;
}

double dense_diff(const QuantizedOperator& A, const DenseMatrix& D) {
  double m = 0.0;
  for (int j = 0; j < D.n; ++j)
    for (int k = 0; k < D.n; ++k) m = std::max(m, std::abs(A(j, k) - D(j, k)));
  return m;
}

// 3: collective-operator Hamiltonians against the tensor-product construction
void brute_force(Check& c, Rng&) {
  double cw = 0.0, lmg = 0.0;
  for (int N = 1; N <= 10; ++N) {
    for (auto [J, B] : {std::pair{1.0, 0.5}, std::pair{-0.7, 1.3}})
      cw = std::max(cw, dense_diff(cw_hamiltonian(N, J, B), tensor_cw_hamiltonian(N, J, B)));
    for (auto [l, g, B] : {std::tuple{1.0, 0.5, 0.0}, std::tuple{2.0, 0.3, 0.8}, std::tuple{0.6, 1.0, 0.25}})
      lmg = std::max(lmg, dense_diff(lmg_hamiltonian(N, l, g, B), tensor_lmg_hamiltonian(N, l, g, B)));
  }
  c.require(cw <= 1e-12);
  c.require(lmg <= 1e-12);
  c.detail << "N<=10 max entry diff: CW " << cw << ", LMG " << lmg;
}

// 4: dist(ran h0, spectrum of H_N) and the Weyl bound for CW(J=1, B=1/2)
void spectrum_convergence(Check& c, Rng&) {
  const ModelSpec spec = ModelSpec::curie_weiss(1.0, 0.5);
  const SymbolExpansion sym = model_symbol(spec);
  const RealInterval ran = range(sym.h0);
  std::vector<double> dist;
  bool weyl_ok = true;
  double worst_weyl = 0.0;
  for (int N : geometric(64, 4096)) {
    dist.push_back(spectrum_distance(ran, eigh(hamiltonian(spec, N))));
    const WeylReport w = weyl_check(sym, N);
    weyl_ok = weyl_ok && w.passed && std::abs(w.bound - 2.0 / N) <= 1e-9 / N;
    worst_weyl = std::max(worst_weyl, w.max_gap * N / 2.0);
  }
  for (std::size_t i = 1; i < dist.size(); ++i) c.require(dist[i] <= 1.1 * dist[i - 1]);
  c.require(dist.back() <= 0.01);
  c.require(weyl_ok);
  c.detail << "dist N=64.." << 4096 << ":";
  for (double d : dist) c.detail << ' ' << d;
  c.detail << "; Weyl gap/(2/N) max=" << worst_weyl;
}

// 5: coherent states at the minima are quasi-eigenvectors
void quasi_eigenvector(Check& c, Rng&) {
  const P h0 = model_symbol(ModelSpec::curie_weiss(1.0, 0.5)).h0;
  const double E = -0.625;
  double min_ratio = 1e300;
  c.detail << "defect(Omega+) N=64..1024:";
  for (const SpherePoint& om : {omega_plus(), omega_minus()}) {
    std::vector<double> d;
    for (int N : geometric(64, 1024)) d.push_back(quasi_eigenvector_defect(h0, E, om, N));
    for (std::size_t i = 1; i < d.size(); ++i) min_ratio = std::min(min_ratio, d[i - 1] / d[i]);
    if (om.z() > 0)
      for (double v : d) c.detail << ' ' << v;
  }
  double exact = 0.0;
  for (int N : {1, 16, 64, 1024}) {
    const double d = quasi_eigenvector_defect(P::z(), 1.0, SpherePoint::north(), N);
    exact = std::max(exact, std::abs(d - 2.0 / (N + 2.0)));
  }
  c.require(min_ratio >= 1.4);
  c.require(exact <= 1e-12);
  c.detail << "; min doubling ratio=" << min_ratio << "; |defect(z)-2/(N+2)|=" << exact;
}

// 6: classical limit of the ground state
void classical_limit(Check& c, Rng&) {
  const auto grid = geometric(64, 1024);
  const ConvergenceReport rep = convergence_study(ModelSpec::curie_weiss(1.0, 0.5), StateSelector::ground(),
                                                  {P::z(), P::x(), P::monomial(0, 0, 2)}, grid);
  const auto& cz = rep.curves[0];
  const auto& cx = rep.curves[1];
  const auto& cz2 = rep.curves[2];
  double zmax = 0.0;
  for (double v : cz.values) zmax = std::max(zmax, std::abs(v));
  auto decreasing = [](const std::vector<double>& r) {
    for (std::size_t i = 1; i < r.size(); ++i)
      if (!(r[i] < r[i - 1])) return false;
    return true;
  };
  const double lmg = classical_expectation(ground_state(lmg_hamiltonian(1024, 1.0, 0.5, 0.0)).vector,
                                           P::monomial(2, 0, 0));
  c.require(zmax <= 1e-10);
  c.require(std::abs(cx.target - 0.5) <= 1e-9 && std::abs(cz2.target - 0.75) <= 1e-9);
  c.require(std::abs(cx.values.back() - 0.5) <= 0.02 && decreasing(cx.residuals));
  c.require(std::abs(cz2.values.back() - 0.75) <= 0.02 && decreasing(cz2.residuals));
  c.require(std::abs(lmg - 1.0) <= 0.05);
  c.detail << "max|<z>|=" << zmax << "; <x>(1024)=" << cx.values.back() << " (" << cx.verdict
           << ", exponent " << cx.fitted_exponent << "); <z^2>(1024)=" << cz2.values.back() << " (" << cz2.verdict
           << ", exponent " << cz2.fitted_exponent << "); LMG <x^2>(1024)=" << lmg;
}


// 7: symmetric pure ground state with bimodal Husimi mass, mixed limit state
void ssb(Check& c, Rng&) {
  const SSBReport rep = ssb_report(ModelSpec::curie_weiss(1.0, 0.5), {512});
  const SSBRow& r = rep.rows.back();
  c.require(r.z2.invariant(1e-8));
  c.require(r.cap_masses.size() == 2);
  for (double m : r.cap_masses) c.require(m >= 0.4 && m <= 0.6);
  c.require(r.cap_total >= 0.95);
  c.require(rep.limit_state.points.size() == 2);
  c.require(std::abs(rep.limit_state.entropy() - std::log(2.0)) <= 1e-12);
  c.detail << "N=512 ||F psi -+ psi||=" << std::min(r.z2.even_defect, r.z2.odd_defect)
           << " Husimi asymmetry=" << r.z2.husimi_asymmetry << " caps=";
  for (double m : r.cap_masses) c.detail << m << ' ';
  c.detail << "total=" << r.cap_total << " support=" << rep.limit_state.points.size()
           << " entropy=" << rep.limit_state.entropy();
}

// 8: Dirac-Groenewold-Rieffel and product defects
void dgr(Check& c, Rng&) {
  const DGRCalibration cal = dgr_calibrate(32);
  std::vector<double> d;
  const auto grid = geometric(64, 512);
  for (int N : grid) d.push_back(dgr_defect(P::x(), P::y(), N, cal.chosen));
  double rmin = 1e300, rmax = 0.0;
  for (std::size_t i = 1; i < d.size(); ++i) {
    rmin = std::min(rmin, d[i - 1] / d[i]);
    rmax = std::max(rmax, d[i - 1] / d[i]);
  }
  const double prod = product_defect(P::z(), P::z(), 512);
  c.require(d[2] <= 0.05);
  c.require(rmin >= 1.5 && rmax <= 2.5);
  c.require(prod <= 0.02);
  c.detail << "convention " << cal.chosen.describe() << "; (x,y) defect N=64..512:";
  for (double v : d) c.detail << ' ' << v;
  c.detail << "; ratios in [" << rmin << ", " << rmax << "]; ||Q(z)Q(z)-Q(z^2)||(512)=" << prod;
}

// 9: Husimi mass of the ground state outside the energy shell
void forbidden(Check& c, Rng&) {
  const ModelSpec spec = ModelSpec::curie_weiss(1.0, 0.5);
  const P h0 = model_symbol(spec).h0;
  const double E = range(h0).lo;
  std::vector<double> m;
  bool converged = true;
  for (int N : geometric(64, 1024)) {
    const HusimiMass hm = forbidden_region_mass(ground_state(hamiltonian(spec, N)).vector, h0, E, 0.2);
    converged = converged && hm.converged;
    m.push_back(hm.mass);
  }
  double rmin = 1e300;
  for (std::size_t i = 1; i < m.size(); ++i) rmin = std::min(rmin, m[i - 1] / m[i]);
  c.require(converged);
  c.require(rmin >= 1.5);
  c.require(m.back() <= 0.05);
  c.detail << "mass N=64..1024:";
  for (double v : m) c.detail << ' ' << v;
  c.detail << "; min doubling ratio=" << rmin << "; quadrature converged=" << (converged ? "yes" : "no");
}

// 10: least-squares first-order symbol of the CW Hamiltonian
void symbol_fit(Check& c, Rng&) {
  const SymbolFit fit = symbol_correction_fit(ModelSpec::curie_weiss(1.0, 0.5), geometric(16, 256));
  double worst = 0.0;
  for (double s : fit.scaled_residual) worst = std::max(worst, s);
  c.require(worst <= 1.0);
  c.detail << "fitted h1 = " << fit.expansion.corrections.front().symbol.to_string()
           << "; max N^2 residual=" << worst << "; claimed h1 = " << fit.claimed.to_string() << " -> "
           << (fit.agrees_with_claim ? "agree" : "disagree") << " (max coefficient difference "
           << fit.claimed_difference << ")";
}

struct Entry {
  const char* name;
  void (*fn)(Check&, Rng&);
};

const Entry kEntries[kCriterionCount] = {
    {"quantization axioms on random polynomials", axioms},
    {"exact finite-N identities", identities},
    {"tensor-product oracle for CW and LMG", brute_force},
    {"spectrum converges to the symbol range", spectrum_convergence},
    {"coherent states at the minima are quasi-eigenvectors", quasi_eigenvector},
    {"classical limit of the ground state", classical_limit},
    {"Z2 symmetry breaking picture", ssb},
    {"Dirac-Groenewold-Rieffel and product defects", dgr},
    {"forbidden-region Husimi decay", forbidden},
    {"first-order symbol fit", symbol_fit},
};

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& opts) {
  if (id < 1 || id > kCriterionCount) throw std::out_of_range("acceptance criterion id out of range");
  const Entry& e = kEntries[id - 1];
  CriterionResult r;
  r.id = id;
  r.name = e.name;
  // each criterion gets its own stream so results do not depend on which others ran
  Rng rng(opts.seed + static_cast<std::uint64_t>(id) * 0x9e3779b97f4a7c15ull);
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  c.detail.precision(6);
  try {
    e.fn(c, rng);
    r.passed = c.ok;
    r.detail = c.detail.str();
  } catch (const std::exception& ex) {
    r.passed = false;
    r.detail = c.detail.str() + " [error: " + ex.what() + "]";
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<int> ids = opts.only;
  if (ids.empty())
    for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
  std::vector<CriterionResult> out;
  for (int id : ids) {
    out.push_back(run_criterion(id, opts));
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << ": " << r.detail;
  return os.str();
}

}  // namespace sphq::cli
