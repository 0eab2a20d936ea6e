#include "sphq/spin_models.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "sphq/eigensolver.hpp"
#include "sphq/errors.hpp"
#include "sphq/quantize.hpp"

namespace sphq {

CollectiveSpinOps collective_ops(int N) {
  if (N < 1) throw PreconditionError("collective_ops requires N >= 1");
  CollectiveSpinOps ops{N, QuantizedOperator(N, 1), QuantizedOperator(N, 1), QuantizedOperator(N, 0)};
  const double j = 0.5 * N;
  for (int k = 0; k <= N; ++k) ops.Sz.at(k, k) = j - k;
  for (int k = 1; k <= N; ++k) {
    // S+ maps e_k (m = j-k) to e_{k-1}
    const double m = j - k;
    const double s = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    ops.Sx.at(k - 1, k) = 0.5 * s;
    ops.Sx.at(k, k - 1) = 0.5 * s;
    ops.Sy.at(k - 1, k) = cplx(0.0, -0.5 * s);
    ops.Sy.at(k, k - 1) = cplx(0.0, 0.5 * s);
  }
  return ops;
}

QuantizedOperator cw_hamiltonian(int N, double J, double B) {
  if (N < 1) throw PreconditionError("cw_hamiltonian requires N >= 1");
  const CollectiveSpinOps ops = collective_ops(N);
  QuantizedOperator H(N, 1);
  const double pre = 1.0 / (N + 2.0);
  for (int k = 0; k <= N; ++k) {
    const double m = ops.Sz(k, k).real();
    H.at(k, k) = pre * (-(2.0 * J / N) * m * m);
  }
  for (int k = 1; k <= N; ++k) {
    const double v = pre * (-2.0 * B) * ops.Sx(k - 1, k).real();
    H.at(k - 1, k) = v;
    H.at(k, k - 1) = v;
  }
  return H;
}

QuantizedOperator lmg_hamiltonian(int N, double lambda, double gamma, double B) {
  if (N < 1) throw PreconditionError("lmg_hamiltonian requires N >= 1");
  const CollectiveSpinOps ops = collective_ops(N);
  QuantizedOperator quad = ops.Sx * ops.Sx + cplx(gamma) * (ops.Sy * ops.Sy);
  QuantizedOperator H = cplx(-lambda / (N * (N + 2.0))) * quad - cplx(B / (N + 2.0)) * ops.Sz;
  // Sx^2 and Sy^2 are real; drop the exact-zero imaginary residue of the products
  QuantizedOperator out(N, 2);
  for (int j = 0; j <= N; ++j)
    for (int k = std::max(0, j - 2); k <= std::min(N, j + 2); ++k) out.at(j, k) = H(j, k).real();
  out.hermitize();
  return out;
}

SpherePolynomial SymbolExpansion::truncated(int N) const {
  SpherePolynomial h = h0;
  for (const auto& c : corrections) h = h + std::pow(static_cast<double>(N), -c.order) * c.symbol;
  return h.reduced();
}

bool SymbolExpansion::is_real() const {
  if (!h0.is_real()) return false;
  for (const auto& c : corrections)
    if (!c.symbol.is_real()) return false;
  return true;
}

ModelSpec ModelSpec::curie_weiss(double J, double B) {
  ModelSpec s;
  s.kind = Kind::CurieWeiss;
  s.J = J;
  s.B = B;
  return s;
}

ModelSpec ModelSpec::lmg(double lambda, double gamma, double B) {
  if (!(lambda > 0.0)) throw PreconditionError("LMG requires lambda > 0");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw PreconditionError("LMG requires gamma in (0, 1]");
  if (!(B >= 0.0)) throw PreconditionError("LMG requires B >= 0");
  ModelSpec s;
  s.kind = Kind::LMG;
  s.lambda = lambda;
  s.gamma = gamma;
  s.B = B;
  return s;
}

ModelSpec ModelSpec::custom_symbol(SymbolExpansion h) {
  if (!h.is_real()) throw PreconditionError("custom symbols must be real");
  ModelSpec s;
  s.kind = Kind::CustomSymbol;
  s.custom = std::move(h);
  return s;
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string ModelSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::CurieWeiss:
      os << "cw J=" << num(J) << " B=" << num(B);
      break;
    case Kind::LMG:
      os << "lmg lambda=" << num(lambda) << " gamma=" << num(gamma) << " B=" << num(B);
      break;
    case Kind::CustomSymbol:
      os << "custom h0=" << custom.h0.to_string();
      for (const auto& c : custom.corrections) os << " h" << c.order << '=' << c.symbol.to_string();
      break;
  }
  return os.str();
}

SymbolExpansion model_symbol(const ModelSpec& spec) {
  using P = SpherePolynomial;
  SymbolExpansion h;
  switch (spec.kind) {
    case ModelSpec::Kind::CurieWeiss: {
      h.h0 = (cplx(-0.5 * spec.J) * P::monomial(0, 0, 2) - cplx(spec.B) * P::x()).reduced();
      const P claimed = cplx(-3.0 * spec.J) * P::monomial(0, 0, 2) + P::constant(1.0);
      h.corrections.push_back({1, claimed.reduced(), "paper-claimed"});
      break;
    }
    case ModelSpec::Kind::LMG: {
      const P quad = P::monomial(2, 0, 0) + cplx(spec.gamma) * P::monomial(0, 2, 0);
      h.h0 = (cplx(-0.25 * spec.lambda) * quad - cplx(0.5 * spec.B) * P::z()).reduced();
      const P claimed = cplx(-1.5) * quad + P::constant(1.0);
      h.corrections.push_back({1, claimed.reduced(), "paper-claimed"});
      break;
    }
    case ModelSpec::Kind::CustomSymbol:
      return spec.custom;
  }
  return h;
}

QuantizedOperator hamiltonian(const ModelSpec& spec, int N) {
  switch (spec.kind) {
    case ModelSpec::Kind::CurieWeiss:
      return cw_hamiltonian(N, spec.J, spec.B);
    case ModelSpec::Kind::LMG:
      return lmg_hamiltonian(N, spec.lambda, spec.gamma, spec.B);
    case ModelSpec::Kind::CustomSymbol:
      return quantize(spec.custom.truncated(N), N);
  }
  throw PreconditionError("unknown model kind");
}

SymbolFit symbol_correction_fit(const ModelSpec& spec, const std::vector<int>& N_list) {
  if (N_list.size() < 3) throw PreconditionError("symbol_correction_fit needs at least 3 values of N");
  const SymbolExpansion sym = model_symbol(spec);
  const int deg = std::max(sym.h0.degree(), 2);
  SymbolFit fit;
  fit.basis = canonical_basis(deg);
  fit.N_list = N_list;
  const std::size_t nb = fit.basis.size();
  for (int N : N_list)
    if (N < 1) throw PreconditionError("symbol_correction_fit needs N >= 1");

  std::vector<double> G(nb * nb, 0.0), r(nb, 0.0);
  std::vector<QuantizedOperator> targets;
  std::vector<std::vector<QuantizedOperator>> qbasis;
  for (int N : N_list) {
    // for a custom symbol the fit sees H_N - Q(h0), i.e. the quantized corrections
    const QuantizedOperator H = hamiltonian(spec, N);
    const QuantizedOperator D = cplx(static_cast<double>(N)) * (H - quantize(sym.h0, N));
    std::vector<QuantizedOperator> qs;
    qs.reserve(nb);
    for (const Monomial& m : fit.basis) qs.push_back(quantize(SpherePolynomial::monomial(m.a, m.b, m.c), N));
    const double w = 1.0 / (N + 1.0);
    for (std::size_t i = 0; i < nb; ++i) {
      r[i] += w * frobenius_dot(qs[i], D);
      for (std::size_t j = 0; j <= i; ++j) G[i * nb + j] += w * frobenius_dot(qs[i], qs[j]);
    }
    targets.push_back(D);
    qbasis.push_back(std::move(qs));
  }
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = i + 1; j < nb; ++j) G[i * nb + j] = G[j * nb + i];

  // Cholesky; a tiny relative pivot means the ansatz is not identifiable on N_list
  std::vector<double> L(nb * nb, 0.0);
  double max_diag = 0.0;
  for (std::size_t i = 0; i < nb; ++i) max_diag = std::max(max_diag, G[i * nb + i]);
  for (std::size_t j = 0; j < nb; ++j) {
    double d = G[j * nb + j];
    for (std::size_t k = 0; k < j; ++k) d -= L[j * nb + k] * L[j * nb + k];
    if (d <= 1e-12 * max_diag) {
      std::ostringstream msg;
      msg << "symbol fit is rank-deficient at basis monomial x^" << fit.basis[j].a << " y^" << fit.basis[j].b
          << " z^" << fit.basis[j].c << " (relative pivot " << d / max_diag << ")";
      throw NumericalError(msg.str());
    }
    L[j * nb + j] = std::sqrt(d);
    for (std::size_t i = j + 1; i < nb; ++i) {
      double s = G[i * nb + j];
      for (std::size_t k = 0; k < j; ++k) s -= L[i * nb + k] * L[j * nb + k];
      L[i * nb + j] = s / L[j * nb + j];
    }
  }
  std::vector<double> c(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    double s = r[i];
    for (std::size_t k = 0; k < i; ++k) s -= L[i * nb + k] * c[k];
    c[i] = s / L[i * nb + i];
  }
  for (std::size_t ii = nb; ii-- > 0;) {
    double s = c[ii];
    for (std::size_t k = ii + 1; k < nb; ++k) s -= L[k * nb + ii] * c[k];
    c[ii] = s / L[ii * nb + ii];
  }
  fit.coefficients = c;

  // coefficients at the level of the solve's roundoff are reported as zero in the polynomial
  double cmax = 0.0;
  for (double v : c) cmax = std::max(cmax, std::abs(v));
  SpherePolynomial::TermMap terms;
  for (std::size_t i = 0; i < nb; ++i)
    if (std::abs(c[i]) > 1e-9 * std::max(cmax, 1.0)) terms[fit.basis[i]] = c[i];
  const SpherePolynomial h1(terms);
  fit.expansion.h0 = sym.h0;
  fit.expansion.corrections.push_back({1, h1, "fitted"});

  for (std::size_t n = 0; n < N_list.size(); ++n) {
    const int N = N_list[n];
    QuantizedOperator model(N, 0);
    for (std::size_t i = 0; i < nb; ++i) model = model + cplx(c[i]) * qbasis[n][i];
    QuantizedOperator R = cplx(1.0 / N) * (targets[n] - model);
    R.hermitize();
    const double res = operator_norm(R);
    fit.residual.push_back(res);
    fit.scaled_residual.push_back(res * double(N) * double(N));
  }

  for (const auto& corr : sym.corrections)
    if (corr.order == 1 && corr.provenance == "paper-claimed") fit.claimed = corr.symbol.reduced();
  double diff = 0.0;
  for (std::size_t i = 0; i < nb; ++i) {
    const Monomial& m = fit.basis[i];
    diff = std::max(diff, std::abs(c[i] - fit.claimed.coeff(m.a, m.b, m.c).real()));
  }
  for (const auto& [m, v] : fit.claimed.terms())
    if (m.degree() > deg) diff = std::max(diff, std::abs(v));
  fit.claimed_difference = diff;
  fit.agrees_with_claim = diff <= 1e-6;
  return fit;
}

}  // namespace sphq
