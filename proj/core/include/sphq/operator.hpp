#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sphq {

using cplx = std::complex<double>;

/// Square (N+1)x(N+1) complex matrix stored by diagonals: entry (j,k) is kept only for
/// |j-k| <= halfband and is exactly zero elsewhere.
///
/// Quantizations of real symbols and the spin Hamiltonians are Hermitian; products and
/// quantizations of complex symbols need not be, so Hermiticity is a checked property
/// rather than a storage assumption.
class QuantizedOperator {
 public:
  QuantizedOperator() = default;
  /// Zero operator on Sym^N(C^2).
  QuantizedOperator(int N, int halfband);

  static QuantizedOperator identity(int N);
  static QuantizedOperator diagonal(std::span<const double> d);

  int N() const { return N_; }
  int dim() const { return N_ + 1; }
  int halfband() const { return halfband_; }

  cplx operator()(int j, int k) const {
    const int off = k - j;
    if (off < -halfband_ || off > halfband_) return {};
    return data_[static_cast<std::size_t>(j) * width() + (off + halfband_)];
  }
  /// |j-k| must not exceed the halfband.
  cplx& at(int j, int k);

  /// Largest absolute entry; used as the scale for relative tolerances.
  double max_abs() const;
  bool is_hermitian(double tol) const;
  /// All imaginary parts exactly zero.
  bool is_real() const;
  /// (A + A^*)/2 in place.
  void hermitize();
  /// Drop diagonals beyond `halfband` (they must be numerically zero) or widen storage.
  QuantizedOperator with_halfband(int halfband) const;
  /// Smallest halfband that keeps every entry with |value| > tol.
  int effective_halfband(double tol = 0.0) const;

  std::vector<cplx> apply(std::span<const cplx> v) const;
  QuantizedOperator adjoint() const;
  /// F A F with F the index reversal k -> N-k.
  QuantizedOperator flipped() const;
  double frobenius_norm() const;
  cplx trace() const;

  friend QuantizedOperator operator+(const QuantizedOperator& a, const QuantizedOperator& b);
  friend QuantizedOperator operator-(const QuantizedOperator& a, const QuantizedOperator& b);
  friend QuantizedOperator operator*(const QuantizedOperator& a, const QuantizedOperator& b);
  friend QuantizedOperator operator*(cplx s, const QuantizedOperator& a);
  /// Largest entrywise difference.
  friend double max_abs_diff(const QuantizedOperator& a, const QuantizedOperator& b);
  /// Re tr(A^* B), the real Frobenius inner product.
  friend double frobenius_dot(const QuantizedOperator& a, const QuantizedOperator& b);

  /// Raw diagonal-major storage, row j holding offsets -halfband..halfband.
  std::span<const cplx> raw() const { return data_; }

  /// Text format:
  ///   sphq-operator 1
  ///   N <N> halfband <b>
  ///   then one line per row j: 2(2b+1) numbers "re im" for k = j-b .. j+b,
  ///   out-of-range positions written as 0.
  void write_text(std::ostream& os) const;
  static QuantizedOperator read_text(std::istream& is);

  /// Binary format (little-endian):
  ///   u64 payload size | "SPHQOPER" | u32 version | i32 N | i32 halfband | f64 pairs
  /// The payload size counts every byte after itself.
  void write_binary(std::ostream& os) const;
  static QuantizedOperator read_binary(std::istream& is);

  friend bool operator==(const QuantizedOperator&, const QuantizedOperator&) = default;

 private:
  int width() const { return 2 * halfband_ + 1; }

  int N_ = 0;
  int halfband_ = 0;
  std::vector<cplx> data_;
};

/// Binary format version tag shared by operator and spectrum files.
inline constexpr std::uint32_t kBinaryFormatVersion = 1;

}  // namespace sphq
