#include "sphq/operator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "sphq/errors.hpp"

namespace sphq {

static_assert(std::endian::native == std::endian::little, "binary formats assume little-endian hosts");

QuantizedOperator::QuantizedOperator(int N, int halfband) : N_(N), halfband_(halfband) {
  if (N < 0 || halfband < 0) throw PreconditionError("operator dimensions must be non-negative");
  halfband_ = std::min(halfband, N);
  data_.assign(static_cast<std::size_t>(N + 1) * width(), cplx{});
}

QuantizedOperator QuantizedOperator::identity(int N) {
  QuantizedOperator I(N, 0);
  for (int j = 0; j <= N; ++j) I.at(j, j) = 1.0;
  return I;
}

QuantizedOperator QuantizedOperator::diagonal(std::span<const double> d) {
  if (d.empty()) throw PreconditionError("diagonal operator needs at least one entry");
  QuantizedOperator D(static_cast<int>(d.size()) - 1, 0);
  for (std::size_t j = 0; j < d.size(); ++j) D.at(static_cast<int>(j), static_cast<int>(j)) = d[j];
  return D;
}

cplx& QuantizedOperator::at(int j, int k) {
  const int off = k - j;
  if (off < -halfband_ || off > halfband_ || j < 0 || j > N_ || k < 0 || k > N_)
    throw PreconditionError("entry outside the stored band");
  return data_[static_cast<std::size_t>(j) * width() + (off + halfband_)];
}

double QuantizedOperator::max_abs() const {
  double m = 0.0;
  for (const cplx& v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool QuantizedOperator::is_hermitian(double tol) const {
  for (int j = 0; j <= N_; ++j)
    for (int k = j; k <= std::min(N_, j + halfband_); ++k)
      if (std::abs((*this)(j, k) - std::conj((*this)(k, j))) > tol) return false;
  return true;
}

bool QuantizedOperator::is_real() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& v) { return v.imag() == 0.0; });
}

void QuantizedOperator::hermitize() {
  for (int j = 0; j <= N_; ++j) {
    at(j, j) = (*this)(j, j).real();
    for (int k = j + 1; k <= std::min(N_, j + halfband_); ++k) {
      const cplx avg = 0.5 * ((*this)(j, k) + std::conj((*this)(k, j)));
      at(j, k) = avg;
      at(k, j) = std::conj(avg);
    }
  }
}

QuantizedOperator QuantizedOperator::with_halfband(int halfband) const {
  QuantizedOperator out(N_, halfband);
  for (int j = 0; j <= N_; ++j)
    for (int k = std::max(0, j - out.halfband_); k <= std::min(N_, j + out.halfband_); ++k)
      out.at(j, k) = (*this)(j, k);
  return out;
}

int QuantizedOperator::effective_halfband(double tol) const {
  int b = 0;
  for (int j = 0; j <= N_; ++j)
    for (int k = std::max(0, j - halfband_); k <= std::min(N_, j + halfband_); ++k)
      if (std::abs((*this)(j, k)) > tol) b = std::max(b, std::abs(k - j));
  return b;
}

std::vector<cplx> QuantizedOperator::apply(std::span<const cplx> v) const {
  if (static_cast<int>(v.size()) != dim()) throw PreconditionError("vector length does not match operator");
  std::vector<cplx> out(v.size());
  for (int j = 0; j <= N_; ++j) {
    cplx acc = 0.0;
    for (int k = std::max(0, j - halfband_); k <= std::min(N_, j + halfband_); ++k)
      acc += (*this)(j, k) * v[k];
    out[j] = acc;
  }
  return out;
}

QuantizedOperator QuantizedOperator::adjoint() const {
  QuantizedOperator out(N_, halfband_);
  for (int j = 0; j <= N_; ++j)
    for (int k = std::max(0, j - halfband_); k <= std::min(N_, j + halfband_); ++k)
      out.at(k, j) = std::conj((*this)(j, k));
  return out;
}

QuantizedOperator QuantizedOperator::flipped() const {
  QuantizedOperator out(N_, halfband_);
  for (int j = 0; j <= N_; ++j)
    for (int k = std::max(0, j - halfband_); k <= std::min(N_, j + halfband_); ++k)
      out.at(N_ - j, N_ - k) = (*this)(j, k);
  return out;
}

double QuantizedOperator::frobenius_norm() const {
  double s = 0.0;
  for (const cplx& v : data_) s += std::norm(v);
  return std::sqrt(s);
}

cplx QuantizedOperator::trace() const {
  cplx t = 0.0;
  for (int j = 0; j <= N_; ++j) t += (*this)(j, j);
  return t;
}

namespace {

void require_same_size(const QuantizedOperator& a, const QuantizedOperator& b) {
  if (a.N() != b.N()) throw PreconditionError("operators act on different spaces");
}

}  // namespace

QuantizedOperator operator+(const QuantizedOperator& a, const QuantizedOperator& b) {
  require_same_size(a, b);
  QuantizedOperator out(a.N_, std::max(a.halfband_, b.halfband_));
  for (int j = 0; j <= a.N_; ++j)
    for (int k = std::max(0, j - out.halfband_); k <= std::min(a.N_, j + out.halfband_); ++k)
      out.at(j, k) = a(j, k) + b(j, k);
  return out;
}

QuantizedOperator operator-(const QuantizedOperator& a, const QuantizedOperator& b) {
  return a + cplx(-1.0) * b;
}

QuantizedOperator operator*(const QuantizedOperator& a, const QuantizedOperator& b) {
  require_same_size(a, b);
  const int n = a.N_;
  QuantizedOperator out(n, a.halfband_ + b.halfband_);
  for (int j = 0; j <= n; ++j)
    for (int l = std::max(0, j - a.halfband_); l <= std::min(n, j + a.halfband_); ++l) {
      const cplx ajl = a(j, l);
      if (ajl == cplx{}) continue;
      for (int k = std::max(0, l - b.halfband_); k <= std::min(n, l + b.halfband_); ++k)
        out.at(j, k) += ajl * b(l, k);
    }
  return out;
}

QuantizedOperator operator*(cplx s, const QuantizedOperator& a) {
  QuantizedOperator out = a;
  for (cplx& v : out.data_) v *= s;
  return out;
}

double max_abs_diff(const QuantizedOperator& a, const QuantizedOperator& b) {
  require_same_size(a, b);
  const int hb = std::max(a.halfband_, b.halfband_);
  double m = 0.0;
  for (int j = 0; j <= a.N_; ++j)
    for (int k = std::max(0, j - hb); k <= std::min(a.N_, j + hb); ++k)
      m = std::max(m, std::abs(a(j, k) - b(j, k)));
  return m;
}

double frobenius_dot(const QuantizedOperator& a, const QuantizedOperator& b) {
  require_same_size(a, b);
  const int hb = std::min(a.halfband_, b.halfband_);
  double s = 0.0;
  for (int j = 0; j <= a.N_; ++j)
    for (int k = std::max(0, j - hb); k <= std::min(a.N_, j + hb); ++k)
      s += (std::conj(a(j, k)) * b(j, k)).real();
  return s;
}

void QuantizedOperator::write_text(std::ostream& os) const {
  os << "sphq-operator 1\n";
  os << "N " << N_ << " halfband " << halfband_ << "\n";
  char buf[64];
  for (int j = 0; j <= N_; ++j) {
    for (int off = -halfband_; off <= halfband_; ++off) {
      const int k = j + off;
      const cplx v = (k < 0 || k > N_) ? cplx{} : (*this)(j, k);
      std::snprintf(buf, sizeof buf, "%.17g %.17g", v.real(), v.imag());
      if (off != -halfband_) os << ' ';
      os << buf;
    }
    os << '\n';
  }
}

QuantizedOperator QuantizedOperator::read_text(std::istream& is) {
  std::string magic, nkey, bkey;
  int version = 0, N = 0, b = 0;
  if (!(is >> magic >> version) || magic != "sphq-operator" || version != 1)
    throw ConfigError("not a sphq-operator v1 text file");
  if (!(is >> nkey >> N >> bkey >> b) || nkey != "N" || bkey != "halfband" || N < 0 || b < 0)
    throw ConfigError("malformed operator header");
  QuantizedOperator out(N, b);
  for (int j = 0; j <= N; ++j)
    for (int off = -b; off <= b; ++off) {
      double re = 0.0, im = 0.0;
      if (!(is >> re >> im)) throw ConfigError("truncated operator text");
      const int k = j + off;
      if (k >= 0 && k <= N && off >= -out.halfband_ && off <= out.halfband_) out.at(j, k) = {re, im};
    }
  return out;
}

void QuantizedOperator::write_binary(std::ostream& os) const {
  const std::uint64_t payload = 8 + 4 + 4 + 4 + data_.size() * 16;
  os.write(reinterpret_cast<const char*>(&payload), sizeof payload);
  os.write("SPHQOPER", 8);
  const std::uint32_t version = kBinaryFormatVersion;
  os.write(reinterpret_cast<const char*>(&version), sizeof version);
  const std::int32_t n = N_, b = halfband_;
  os.write(reinterpret_cast<const char*>(&n), sizeof n);
  os.write(reinterpret_cast<const char*>(&b), sizeof b);
  os.write(reinterpret_cast<const char*>(data_.data()), static_cast<std::streamsize>(data_.size() * 16));
}

QuantizedOperator QuantizedOperator::read_binary(std::istream& is) {
  std::uint64_t payload = 0;
  char magic[8];
  std::uint32_t version = 0;
  std::int32_t n = 0, b = 0;
  is.read(reinterpret_cast<char*>(&payload), sizeof payload);
  is.read(magic, 8);
  is.read(reinterpret_cast<char*>(&version), sizeof version);
  is.read(reinterpret_cast<char*>(&n), sizeof n);
  is.read(reinterpret_cast<char*>(&b), sizeof b);
  if (!is || std::memcmp(magic, "SPHQOPER", 8) != 0) throw ConfigError("not a sphq binary operator");
  if (version != kBinaryFormatVersion) throw ConfigError("unsupported operator format version");
  if (n < 0 || b < 0 || b > n) throw ConfigError("corrupt operator header");
  QuantizedOperator out(n, b);
  if (payload != 8 + 4 + 4 + 4 + out.data_.size() * 16) throw ConfigError("operator payload size mismatch");
  is.read(reinterpret_cast<char*>(out.data_.data()), static_cast<std::streamsize>(out.data_.size() * 16));
  if (!is) throw ConfigError("truncated binary operator");
  return out;
}

}  // namespace sphq
