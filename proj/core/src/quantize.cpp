#include "sphq/quantize.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

#include "sphq/errors.hpp"
#include "sphq/parallel.hpp"
#include "sphq/quadrature.hpp"

namespace sphq {

namespace {

constexpr double kPi = std::numbers::pi;

double ipow(double b, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// Fourier coefficients (1/M) sum_l cos^a(phi_l) sin^b(phi_l) e^{-i m phi_l} for m in [-d, d].
std::vector<cplx> angular_coefficients(int a, int b, int d, int M) {
  std::vector<cplx> out(2 * d + 1);
  std::vector<CompensatedSum<cplx>> acc(2 * d + 1);
  for (int l = 0; l < M; ++l) {
    const double phi = 2.0 * kPi * l / M;
    const double g = ipow(std::cos(phi), a) * ipow(std::sin(phi), b);
    if (g == 0.0) continue;
    for (int m = -d; m <= d; ++m) acc[m + d].add(g * std::polar(1.0, -m * phi));
  }
  for (int m = -d; m <= d; ++m) out[m + d] = acc[m + d].value() / static_cast<double>(M);
  return out;
}

struct TermData {
  int ab;  // a + b, the power of sin(theta)
  int c;
  cplx coeff;
  std::vector<cplx> harmonics;
};

constexpr int kNodesPerChunk = 16;

}  // namespace

QuantizedOperator quantize(const SpherePolynomial& p, int N, const QuadratureOptions& opts) {
  if (N < 1) throw PreconditionError("quantize requires N >= 1");
  if (!p.canonical())
    throw PreconditionError("quantize requires a canonical polynomial (z exponents <= 1); reduce it first");
  if (opts.phi_multiplier < 1 || opts.theta_multiplier < 1)
    throw PreconditionError("quadrature multipliers must be >= 1");
  const int d = p.degree();
  const int hb = std::min(d, N);
  QuantizedOperator out(N, hb);
  if (p.is_zero()) return out;

  const int M = std::max(N + d + 1, 2 * d + 1) * opts.phi_multiplier;
  const int G = ((N + d + 2) / 2) * opts.theta_multiplier;

  std::vector<TermData> terms;
  for (const auto& [m, c] : p.terms())
    terms.push_back({m.a + m.b, m.c, c, angular_coefficients(m.a, m.b, d, M)});

  const auto rule = gauss_legendre(G);
  const auto lb = log_binomials(N);
  const std::size_t width = 2 * static_cast<std::size_t>(hb) + 1;
  const std::size_t cells = static_cast<std::size_t>(N + 1) * width;

  const std::size_t chunks = (static_cast<std::size_t>(G) + kNodesPerChunk - 1) / kNodesPerChunk;
  std::vector<std::vector<cplx>> partial(chunks);
  parallel_for(chunks, [&](std::size_t ch) {
    std::vector<CompensatedSum<cplx>> acc(cells);
    std::vector<cplx> F(2 * d + 1);
    const int g0 = static_cast<int>(ch) * kNodesPerChunk;
    const int g1 = std::min(G, g0 + kNodesPerChunk);
    for (int g = g0; g < g1; ++g) {
      const double t = rule->nodes[g];
      const double w = rule->weights[g];
      const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
      std::fill(F.begin(), F.end(), cplx{});
      for (const auto& term : terms) {
        const cplx radial = term.coeff * (ipow(s, term.ab) * ipow(t, term.c));
        for (int m = -d; m <= d; ++m) F[m + d] += radial * term.harmonics[m + d];
      }
      const auto A = coherent_amplitudes(N, 0.5 * (1.0 + t), lb);
      for (int j = 0; j <= N; ++j) {
        const double wa = w * A[j];
        if (wa == 0.0) continue;
        for (int off = -hb; off <= hb; ++off) {
          const int k = j + off;
          if (k < 0 || k > N) continue;
          acc[static_cast<std::size_t>(j) * width + (off + hb)].add(wa * A[k] * F[off + d]);
        }
      }
    }
    partial[ch].resize(cells);
    for (std::size_t i = 0; i < cells; ++i) partial[ch][i] = acc[i].value();
  });

  const double scale = 0.5 * (N + 1);
  for (int j = 0; j <= N; ++j)
    for (int off = -hb; off <= hb; ++off) {
      const int k = j + off;
      if (k < 0 || k > N) continue;
      CompensatedSum<cplx> total;
      const std::size_t idx = static_cast<std::size_t>(j) * width + (off + hb);
      for (const auto& part : partial) total.add(part[idx]);
      out.at(j, k) = scale * total.value();
    }
  if (p.is_real()) out.hermitize();
  return out;
}

double berezin_transform(const SpherePolynomial& f, int N, const SpherePoint& omega) {
  if (!f.is_real()) throw PreconditionError("berezin_transform requires a real symbol");
  const QuantizedOperator Q = quantize(f.reduced(), N);
  const DickeVector v = coherent_state(N, omega);
  const auto Qv = Q.apply(v.coeffs());
  return v.inner(DickeVector(N, Qv)).real();
}

double husimi_density(const DickeVector& psi, const SpherePoint& omega) {
  return std::norm(coherent_state(psi.N(), omega).inner(psi));
}

namespace {

// FFTW planning and plan destruction are not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex mu;
  return mu;
}

struct FftwPlan {
  explicit FftwPlan(int M) : M(M) {
    in = fftw_alloc_complex(M);
    out = fftw_alloc_complex(M);
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(M, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  ~FftwPlan() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);
  }
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;

  int M;
  fftw_complex* in;
  fftw_complex* out;
  fftw_plan plan;
};

}  // namespace

double husimi_mass_at(const DickeVector& psi, const SphereRegion& region, int R) {
  const int N = psi.N();
  if (R < N + 1) throw PreconditionError("husimi_mass needs at least N+1 nodes per axis");
  const auto rule = gauss_legendre(R);
  const auto lb = log_binomials(N);
  const int M = R;
  std::vector<double> phis(M);
  for (int l = 0; l < M; ++l) phis[l] = 2.0 * kPi * l / M;
  const std::size_t chunks = (static_cast<std::size_t>(R) + kNodesPerChunk - 1) / kNodesPerChunk;
  std::vector<double> partial(chunks, 0.0);
  FftwPlan shared(M);
  parallel_for(chunks, [&](std::size_t ch) {
    fftw_complex* in = fftw_alloc_complex(M);
    fftw_complex* out = fftw_alloc_complex(M);
    CompensatedSum<double> acc;
    const int g0 = static_cast<int>(ch) * kNodesPerChunk;
    const int g1 = std::min(R, g0 + kNodesPerChunk);
    for (int g = g0; g < g1; ++g) {
      const double t = rule->nodes[g];
      const double theta = std::acos(t);
      const auto A = coherent_amplitudes(N, 0.5 * (1.0 + t), lb);
      for (int l = 0; l < M; ++l) in[l][0] = in[l][1] = 0.0;
      for (int k = 0; k <= N; ++k) {
        const cplx b = A[k] * psi[k];
        in[k % M][0] += b.real();
        in[k % M][1] += b.imag();
      }
      fftw_execute_dft(shared.plan, in, out);
      double row = 0.0;
      for (int l = 0; l < M; ++l) {
        const SpherePoint pt = SpherePoint::from_angles(theta, phis[l]);
        if (!region(pt)) continue;
        row += out[l][0] * out[l][0] + out[l][1] * out[l][1];
      }
      acc.add(rule->weights[g] * row);
    }
    partial[ch] = acc.value();
    fftw_free(in);
    fftw_free(out);
  });
  CompensatedSum<double> total;
  for (double v : partial) total.add(v);
  // (N+1)/(4 pi) * (2 pi / M)
  return total.value() * (N + 1) / (2.0 * M);
}

HusimiMass husimi_mass(const DickeVector& psi, const SphereRegion& region, const HusimiMassOptions& opts) {
  const int N = psi.N();
  int R = std::max({opts.min_nodes, opts.nodes_per_N * N, N + 1});
  HusimiMass res;
  double prev = husimi_mass_at(psi, region, R);
  for (int i = 0; i < opts.max_doublings; ++i) {
    R *= 2;
    const double cur = husimi_mass_at(psi, region, R);
    res.resolution_change = std::abs(cur - prev);
    res.mass = cur;
    res.nodes_per_axis = R;
    prev = cur;
    if (res.resolution_change < opts.tolerance) {
      res.converged = true;
      return res;
    }
  }
  if (opts.max_doublings == 0) {
    res.mass = prev;
    res.nodes_per_axis = R;
    res.converged = true;
  }
  return res;
}

cplx stereographic(const SpherePoint& omega) {
  return std::polar(std::tan(0.5 * omega.theta()), -omega.phi());
}

cplx BargmannFunction::operator()(cplx z) const {
  // u = 1/(1+|z|^2) = cos^2(theta/2) for z = tan(theta/2) e^{i alpha}
  const double r2 = std::norm(z);
  const double u = 1.0 / (1.0 + r2);
  const double alpha = std::arg(z);
  const auto A = coherent_amplitudes(N_, u, log_binomials(N_));
  cplx s = 0.0;
  for (int k = 0; k <= N_; ++k) s += coeffs_[k] * std::polar(A[k], k * alpha);
  return s;
}

cplx BargmannFunction::polynomial(cplx z) const {
  const auto lb = log_binomials(N_);
  cplx s = 0.0;
  cplx zk = 1.0;
  for (int k = 0; k <= N_; ++k) {
    s += coeffs_[k] * std::exp(0.5 * lb[k]) * zk;
    zk *= z;
  }
  return s;
}

double BargmannFunction::norm() const {
  // s = |z|^2/(1+|z|^2) maps C onto [0,1); the weight becomes (N+1)/(2 pi) ds dalpha and
  // |Psi|^2 is a polynomial of degree N in s after angular integration.
  const int G = N_ + 1;
  const int M = 2 * N_ + 2;
  const auto rule = gauss_legendre(G);
  const auto lb = log_binomials(N_);
  CompensatedSum<double> acc;
  for (int g = 0; g < G; ++g) {
    const double s = 0.5 * (1.0 + rule->nodes[g]);
    const auto A = coherent_amplitudes(N_, 1.0 - s, lb);
    double row = 0.0;
    for (int l = 0; l < M; ++l) {
      const double alpha = 2.0 * kPi * l / M;
      cplx v = 0.0;
      for (int k = 0; k <= N_; ++k) v += coeffs_[k] * std::polar(A[k], k * alpha);
      row += std::norm(v);
    }
    // ds = dt/2 on [0,1]; dalpha = 2 pi / M
    acc.add(0.5 * rule->weights[g] * row * (2.0 * kPi / M));
  }
  return std::sqrt(acc.value() * (N_ + 1) / (2.0 * kPi));
}

BargmannFunction bargmann_transform(const DickeVector& psi) {
  return BargmannFunction(psi.N(), std::vector<cplx>(psi.coeffs().begin(), psi.coeffs().end()));
}

}  // namespace sphq
