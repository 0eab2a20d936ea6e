#include "sphq/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "sphq/errors.hpp"

namespace sphq {

// ---------------------------------------------------------------------------
// Spectrum I/O

void Spectrum::write_binary(std::ostream& os) const {
  const std::uint64_t count = eigenvalues.size();
  const std::uint64_t payload = 8 + 4 + 8 + count * 8;
  os.write(reinterpret_cast<const char*>(&payload), sizeof payload);
  os.write("SPHQSPEC", 8);
  const std::uint32_t version = kBinaryFormatVersion;
  os.write(reinterpret_cast<const char*>(&version), sizeof version);
  os.write(reinterpret_cast<const char*>(&count), sizeof count);
  os.write(reinterpret_cast<const char*>(eigenvalues.data()), static_cast<std::streamsize>(count * 8));
}

Spectrum Spectrum::read_binary(std::istream& is) {
  std::uint64_t payload = 0, count = 0;
  char magic[8];
  std::uint32_t version = 0;
  is.read(reinterpret_cast<char*>(&payload), sizeof payload);
  is.read(magic, 8);
  is.read(reinterpret_cast<char*>(&version), sizeof version);
  is.read(reinterpret_cast<char*>(&count), sizeof count);
  if (!is || std::memcmp(magic, "SPHQSPEC", 8) != 0) throw ConfigError("not a sphq binary spectrum");
  if (version != kBinaryFormatVersion) throw ConfigError("unsupported spectrum format version");
  if (payload != 8 + 4 + 8 + count * 8 || count > (std::uint64_t{1} << 32))
    throw ConfigError("spectrum payload size mismatch");
  Spectrum s;
  s.eigenvalues.resize(count);
  is.read(reinterpret_cast<char*>(s.eigenvalues.data()), static_cast<std::streamsize>(count * 8));
  if (!is) throw ConfigError("truncated binary spectrum");
  return s;
}

void Spectrum::write_csv_rows(std::ostream& os, int N) const {
  char buf[64];
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", eigenvalues[i]);
    os << N << ',' << i << ',' << buf << '\n';
  }
}

// ---------------------------------------------------------------------------
// Implicit QL

std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> e) {
  const int n = static_cast<int>(d.size());
  if (n == 0) return d;
  if (static_cast<int>(e.size()) != n - 1) throw PreconditionError("off-diagonal must have n-1 entries");
  e.push_back(0.0);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr int kMaxSweeps = 50;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == kMaxSweeps) {
          std::ostringstream msg;
          msg << "implicit QL did not converge for eigenvalue " << l << " of " << n << " after "
              << kMaxSweeps << " sweeps (d=" << d[l] << ", e=" << e[l] << ")";
          throw NumericalError(msg.str());
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          e[i + 1] = (r = std::hypot(f, g));
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          d[i + 1] = g + (p = s * r);
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

// ---------------------------------------------------------------------------
// Band reduction

namespace {

// Hermitian matrix stored as its lower band of width W (entries with 0 <= i-j <= W).
class HermitianBand {
 public:
  HermitianBand(int n, int W) : n_(n), W_(W), data_(static_cast<std::size_t>(n) * (W + 1)) {}

  cplx get(int i, int j) const {
    if (i >= j) {
      if (i - j > W_) return {};
      return data_[static_cast<std::size_t>(i) * (W_ + 1) + (i - j)];
    }
    if (j - i > W_) return {};
    return std::conj(data_[static_cast<std::size_t>(j) * (W_ + 1) + (j - i)]);
  }
  void set(int i, int j, cplx v) {
    if (i >= j) {
      if (i - j > W_) return;  // structurally zero: the caller guarantees v == 0
      data_[static_cast<std::size_t>(i) * (W_ + 1) + (i - j)] = v;
    } else {
      if (j - i > W_) return;
      data_[static_cast<std::size_t>(j) * (W_ + 1) + (j - i)] = std::conj(v);
    }
  }
  int n() const { return n_; }
  int W() const { return W_; }

  // Rotate rows/cols (p, p+1) so that entry (p+1, col) becomes zero.
  void annihilate(int p, int col) {
    const int r = p + 1;
    const cplx a = get(p, col);
    const cplx b = get(r, col);
    if (b == cplx{}) return;
    const double rho = std::hypot(std::abs(a), std::abs(b));
    double c;
    cplx s;
    if (std::abs(a) == 0.0) {
      c = 0.0;
      s = 1.0;
    } else {
      c = std::abs(a) / rho;
      s = (a / std::abs(a)) * std::conj(b) / rho;
    }
    const int lo = std::max(0, p - W_);
    const int hi = std::min(n_ - 1, r + W_);
    for (int k = lo; k <= hi; ++k) {
      if (k == p || k == r) continue;
      const cplx x = get(p, k), y = get(r, k);
      set(p, k, c * x + s * y);
      set(r, k, -std::conj(s) * x + c * y);
    }
    const cplx app = get(p, p), arr = get(r, r), apr = get(p, r), arp = std::conj(apr);
    const cplx gpp = c * app + s * arp, gpr = c * apr + s * arr;
    const cplx grp = -std::conj(s) * app + c * arp, grr = -std::conj(s) * apr + c * arr;
    const cplx npp = gpp * c + gpr * std::conj(s);
    const cplx npr = -gpp * s + gpr * c;
    const cplx nrr = -grp * s + grr * c;
    set(p, p, npp.real());
    set(r, r, nrr.real());
    set(r, p, std::conj(npr));
    set(r, col, 0.0);
  }

 private:
  int n_;
  int W_;
  std::vector<cplx> data_;
};

}  // namespace

Tridiagonal reduce_to_tridiagonal(const QuantizedOperator& H) {
  const int n = H.dim();
  const int b = H.effective_halfband();
  Tridiagonal t;
  t.d.resize(n);
  t.e.assign(n > 0 ? n - 1 : 0, 0.0);
  if (b == 0) {
    for (int i = 0; i < n; ++i) t.d[i] = H(i, i).real();
    return t;
  }
  HermitianBand A(n, b + 1);
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - b); j <= i; ++j) A.set(i, j, i == j ? cplx(H(i, i).real()) : H(i, j));

  for (int kb = b; kb >= 2; --kb) {
    for (int j = 0; j + kb < n; ++j) {
      int row = j + kb;
      int col = j;
      while (row < n) {
        if (A.get(row, col) == cplx{}) break;
        A.annihilate(row - 1, col);
        col = row - 1;
        row += kb;
      }
    }
  }
  for (int i = 0; i < n; ++i) t.d[i] = A.get(i, i).real();
  for (int i = 0; i + 1 < n; ++i) t.e[i] = std::abs(A.get(i + 1, i));
  return t;
}

Spectrum eigh(const QuantizedOperator& H) {
  const double scale = std::max(H.max_abs(), 1e-300);
  if (!H.is_hermitian(1e-12 * scale)) throw PreconditionError("eigh requires a Hermitian operator");
  Tridiagonal t = reduce_to_tridiagonal(H);
  return Spectrum{tridiagonal_eigenvalues(std::move(t.d), std::move(t.e))};
}

// ---------------------------------------------------------------------------
// Banded LU with partial pivoting, used for inverse iteration.

namespace {

class BandLU {
 public:
  // Factorizes (H - shift I).
  BandLU(const QuantizedOperator& H, double shift, double pivot_floor)
      : n_(H.dim()), b_(H.halfband()), w_(3 * H.halfband() + 1) {
    rows_.assign(static_cast<std::size_t>(n_) * w_, cplx{});
    mult_.assign(static_cast<std::size_t>(n_) * (b_ + 1), cplx{});
    piv_.resize(n_);
    for (int i = 0; i < n_; ++i)
      for (int k = std::max(0, i - b_); k <= std::min(n_ - 1, i + b_); ++k)
        at(i, k) = H(i, k) - (i == k ? cplx(shift) : cplx{});
    for (int i = 0; i < n_; ++i) {
      int p = i;
      double best = std::abs(at(i, i));
      for (int r = i + 1; r <= std::min(n_ - 1, i + b_); ++r)
        if (std::abs(at(r, i)) > best) {
          best = std::abs(at(r, i));
          p = r;
        }
      piv_[i] = p;
      if (p != i)
        for (int k = i; k <= std::min(n_ - 1, i + 2 * b_); ++k) std::swap(at(i, k), at(p, k));
      if (std::abs(at(i, i)) < pivot_floor) at(i, i) = pivot_floor;
      const cplx pivot = at(i, i);
      for (int r = i + 1; r <= std::min(n_ - 1, i + b_); ++r) {
        const cplx f = at(r, i) / pivot;
        mult_[static_cast<std::size_t>(i) * (b_ + 1) + (r - i)] = f;
        at(r, i) = 0.0;
        if (f == cplx{}) continue;
        for (int k = i + 1; k <= std::min(n_ - 1, i + 2 * b_); ++k) at(r, k) -= f * at(i, k);
      }
    }
  }

  std::vector<cplx> solve(std::vector<cplx> x) const {
    for (int i = 0; i < n_; ++i) {
      if (piv_[i] != i) std::swap(x[i], x[piv_[i]]);
      for (int r = i + 1; r <= std::min(n_ - 1, i + b_); ++r)
        x[r] -= mult_[static_cast<std::size_t>(i) * (b_ + 1) + (r - i)] * x[i];
    }
    for (int i = n_ - 1; i >= 0; --i) {
      cplx s = x[i];
      for (int k = i + 1; k <= std::min(n_ - 1, i + 2 * b_); ++k) s -= at(i, k) * x[k];
      x[i] = s / at(i, i);
    }
    return x;
  }

 private:
  // row i stores columns i-b .. i+2b
  cplx& at(int i, int k) { return rows_[static_cast<std::size_t>(i) * w_ + (k - i + b_)]; }
  const cplx& at(int i, int k) const { return rows_[static_cast<std::size_t>(i) * w_ + (k - i + b_)]; }

  int n_, b_, w_;
  std::vector<cplx> rows_;
  std::vector<cplx> mult_;
  std::vector<int> piv_;
};

double vec_norm(std::span<const cplx> v) {
  double s = 0.0;
  for (const cplx& c : v) s += std::norm(c);
  return std::sqrt(s);
}

double residual_of(const QuantizedOperator& H, const DickeVector& v, double lambda) {
  const auto Hv = H.apply(v.coeffs());
  double s = 0.0;
  for (int k = 0; k < v.dim(); ++k) s += std::norm(Hv[k] - lambda * v[k]);
  return std::sqrt(s);
}

}  // namespace

void fix_phase(DickeVector& v) {
  for (int k = 0; k < v.dim(); ++k) {
    if (std::abs(v[k]) > 1e-8) {
      const cplx ph = std::conj(v[k]) / std::abs(v[k]);
      for (int j = 0; j < v.dim(); ++j) v[j] *= ph;
      v[k] = std::abs(v[k]);
      return;
    }
  }
}

EigenPair inverse_iteration(const QuantizedOperator& H, double shift, double tol_rel) {
  const int n = H.dim();
  const double scale = std::max(H.max_abs(), 1e-300);
  const double eps = std::numeric_limits<double>::epsilon();
  // nudge the shift off the eigenvalue so the factorization stays well defined
  const double sigma = shift + 8.0 * eps * scale;
  const BandLU lu(H, sigma, eps * scale);
  std::vector<cplx> x(n);
  for (int k = 0; k < n; ++k) x[k] = 1.0 + 0.25 * std::sin(1.0 + 0.7 * k);
  EigenPair best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 8; ++it) {
    x = lu.solve(std::move(x));
    const double nx = vec_norm(x);
    if (!std::isfinite(nx) || nx == 0.0) throw NumericalError("inverse iteration broke down");
    for (cplx& c : x) c /= nx;
    DickeVector v(n - 1, x);
    const auto Hv = H.apply(v.coeffs());
    const double lambda = v.inner(DickeVector(n - 1, Hv)).real();
    const double res = residual_of(H, v, lambda);
    if (res < best.residual) {
      best.value = lambda;
      best.vector = v;
      best.residual = res;
    }
    if (res <= tol_rel * scale && it >= 1) break;
  }
  fix_phase(best.vector);
  return best;
}

// ---------------------------------------------------------------------------
// Flip symmetry

bool commutes_with_flip(const QuantizedOperator& H, double tol) {
  return max_abs_diff(H.flipped(), H) <= tol * std::max(H.max_abs(), 1e-300);
}

FlipSectors flip_sectors(const QuantizedOperator& H) {
  const int N = H.N();
  const int b = H.halfband();
  const int half = (N + 1) / 2;             // pairs (k, N-k) with k < N/2
  const bool middle = N % 2 == 0;           // e_{N/2} is its own mirror image
  const int even_dim = half + (middle ? 1 : 0);
  const int odd_dim = half;
  const double r2 = std::sqrt(2.0);

  auto build = [&](int dim, int sign) {
    QuantizedOperator S(std::max(dim - 1, 0), b);
    if (dim == 0) return S;
    for (int k = 0; k < dim; ++k)
      for (int l = std::max(0, k - b); l <= std::min(dim - 1, k + b); ++l) {
        cplx v;
        const bool km = middle && k == N / 2;
        const bool lm = middle && l == N / 2;
        if (km && lm)
          v = H(k, l);
        else if (km)
          v = r2 * H(k, l);
        else if (lm)
          v = r2 * H(k, l);
        else
          v = H(k, l) + static_cast<double>(sign) * H(k, N - l);
        S.at(k, l) = v;
      }
    return S;
  };
  FlipSectors s{build(even_dim, +1), odd_dim > 0 ? build(odd_dim, -1) : QuantizedOperator()};
  return s;
}

DickeVector lift_from_sector(std::span<const cplx> y, int N, int parity) {
  DickeVector v(N);
  const double r2 = std::sqrt(2.0);
  const int half = (N + 1) / 2;
  for (int k = 0; k < half; ++k) {
    v[k] = y[k] / r2;
    v[N - k] = static_cast<double>(parity) * y[k] / r2;
  }
  if (N % 2 == 0 && parity > 0) v[N / 2] = y[N / 2];
  return v;
}

namespace {

struct SectorSolve {
  Spectrum spectrum;
  const QuantizedOperator* op = nullptr;
  int parity = 0;
};

EigenPair finish_pair(const QuantizedOperator& H, const SectorSolve& s, double value) {
  EigenPair p = inverse_iteration(*s.op, value);
  if (s.parity != 0) {
    p.vector = lift_from_sector(p.vector.coeffs(), H.N(), s.parity);
    fix_phase(p.vector);
    p.flip_parity = s.parity;
  }
  const auto Hv = H.apply(p.vector.coeffs());
  p.value = p.vector.inner(DickeVector(H.N(), Hv)).real();
  p.residual = residual_of(H, p.vector, p.value);
  return p;
}

}  // namespace

EigenPair ground_state(const QuantizedOperator& H) {
  const double scale = std::max(H.max_abs(), 1e-300);
  const double degeneracy_tol = 1e-10 * scale;
  if (H.N() >= 1 && commutes_with_flip(H)) {
    const FlipSectors sec = flip_sectors(H);
    SectorSolve even{eigh(sec.even), &sec.even, +1};
    SectorSolve odd{eigh(sec.odd), &sec.odd, -1};
    const double e0 = even.spectrum.min(), o0 = odd.spectrum.min();
    const bool tie = std::abs(e0 - o0) <= degeneracy_tol;
    const SectorSolve& pick = (tie || e0 <= o0) ? even : odd;
    const SectorSolve& other = (&pick == &even) ? odd : even;
    double next = other.spectrum.min();
    if (pick.spectrum.size() > 1) next = std::min(next, pick.spectrum.eigenvalues[1]);
    EigenPair p = finish_pair(H, pick, pick.spectrum.min());
    p.degenerate = next - pick.spectrum.min() < degeneracy_tol;
    return p;
  }
  const Spectrum sp = eigh(H);
  SectorSolve full{sp, &H, 0};
  EigenPair p = finish_pair(H, full, sp.min());
  p.degenerate = sp.size() > 1 && sp.eigenvalues[1] - sp.eigenvalues[0] < degeneracy_tol;
  return p;
}

EigenPair eigenpair_near(const QuantizedOperator& H, double target) {
  auto nearest = [&](const Spectrum& s) {
    return *std::min_element(s.eigenvalues.begin(), s.eigenvalues.end(),
                             [&](double a, double b) { return std::abs(a - target) < std::abs(b - target); });
  };
  if (H.N() >= 1 && commutes_with_flip(H)) {
    const FlipSectors sec = flip_sectors(H);
    SectorSolve even{eigh(sec.even), &sec.even, +1};
    SectorSolve odd{eigh(sec.odd), &sec.odd, -1};
    const double ve = nearest(even.spectrum), vo = nearest(odd.spectrum);
    return std::abs(ve - target) <= std::abs(vo - target) ? finish_pair(H, even, ve) : finish_pair(H, odd, vo);
  }
  const Spectrum sp = eigh(H);
  return finish_pair(H, SectorSolve{sp, &H, 0}, nearest(sp));
}

double operator_norm(const QuantizedOperator& A) {
  const double scale = A.max_abs();
  if (scale == 0.0) return 0.0;
  if (A.is_hermitian(1e-13 * scale)) {
    QuantizedOperator H = A;
    H.hermitize();
    const Spectrum s = eigh(H);
    return std::max(std::abs(s.min()), std::abs(s.max()));
  }
  QuantizedOperator G = A.adjoint() * A;
  G.hermitize();
  const Spectrum s = eigh(G);
  return std::sqrt(std::max(0.0, s.max()));
}

}  // namespace sphq
