#pragma once

#include <memory>
#include <vector>

namespace sphq {

/// Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree <= 2n-1.
struct GaussLegendreRule {
  std::vector<double> nodes;    // ascending
  std::vector<double> weights;
};

/// Computes (or returns a cached copy of) the n-point rule. Thread-safe.
std::shared_ptr<const GaussLegendreRule> gauss_legendre(int n);

/// Neumaier-compensated accumulator; summation order is the caller's loop order.
template <class T>
class CompensatedSum {
 public:
  void add(T v) {
    const T t = sum_ + v;
    if (magnitude(sum_) >= magnitude(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  static double magnitude(const T& v) {
    using std::abs;
    return abs(v);
  }
  T sum_{};
  T comp_{};
};

}  // namespace sphq
