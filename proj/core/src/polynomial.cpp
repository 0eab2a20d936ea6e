#include "sphq/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "sphq/errors.hpp"

namespace sphq {

namespace {

void add_term(SpherePolynomial::TermMap& m, const Monomial& mono, cplx c) {
  auto [it, inserted] = m.try_emplace(mono, c);
  if (!inserted) it->second += c;
}

double ipow(double base, int e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // shortest representation that still round-trips
  for (int prec = 1; prec < 17; ++prec) {
    char tmp[40];
    std::snprintf(tmp, sizeof tmp, "%.*g", prec, v);
    if (std::strtod(tmp, nullptr) == v) return tmp;
  }
  return buf;
}

class Parser {
 public:
  Parser(std::string_view s, int max_degree) : s_(s), max_degree_(max_degree) {}

  SpherePolynomial parse() {
    SpherePolynomial::TermMap terms;
    skip_ws();
    if (at_end()) throw ConfigError("empty polynomial text");
    bool first = true;
    while (!at_end()) {
      double sign = 1.0;
      if (peek() == '+' || peek() == '-') {
        sign = next() == '-' ? -1.0 : 1.0;
        skip_ws();
      } else if (!first) {
        fail("expected '+' or '-' between terms");
      }
      auto [mono, c] = term();
      add_term(terms, mono, sign * c);
      first = false;
      skip_ws();
    }
    return SpherePolynomial(std::move(terms), max_degree_);
  }

 private:
  std::pair<Monomial, cplx> term() {
    cplx coeff = 1.0;
    bool any = false;
    if (peek() == '(') {
      coeff = complex_literal();
      any = true;
    } else if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
      coeff = number();
      any = true;
    }
    Monomial m;
    for (;;) {
      skip_ws();
      if (at_end()) break;
      char ch = peek();
      if (ch == '*') {
        next();
        skip_ws();
        ch = peek();
        if (ch != 'x' && ch != 'y' && ch != 'z' && ch != 'i' && ch != '(' &&
            !std::isdigit(static_cast<unsigned char>(ch)) && ch != '.')
          fail("dangling '*'");
        if (ch == '(') {
          coeff *= complex_literal();
          any = true;
          continue;
        }
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
          coeff *= number();
          any = true;
          continue;
        }
      }
      if (ch == 'x' || ch == 'y' || ch == 'z') {
        next();
        int e = 1;
        skip_ws();
        if (!at_end() && peek() == '^') {
          next();
          skip_ws();
          e = integer();
        }
        (ch == 'x' ? m.a : ch == 'y' ? m.b : m.c) += e;
        any = true;
      } else if (ch == 'i') {
        next();
        coeff *= cplx(0.0, 1.0);
        any = true;
      } else {
        break;
      }
    }
    if (!any) fail("expected a term");
    if (m.degree() > max_degree_) throw ConfigError("degree-cap overflow while parsing polynomial");
    return {m, coeff};
  }

  double number() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) next();
    if (!at_end() && (peek() == 'e' || peek() == 'E')) {
      std::size_t save = pos_;
      next();
      if (!at_end() && (peek() == '+' || peek() == '-')) next();
      if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) {
        pos_ = save;
      } else {
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) next();
      }
    }
    double v = 0.0;
    auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != s_.data() + pos_) fail("malformed number");
    return v;
  }

  // "(re,im)"
  cplx complex_literal() {
    next();
    skip_ws();
    double sre = 1.0;
    if (peek() == '-' || peek() == '+') sre = next() == '-' ? -1.0 : 1.0;
    const double re = sre * number();
    skip_ws();
    if (at_end() || next() != ',') fail("expected ',' in complex literal");
    skip_ws();
    double sim = 1.0;
    if (peek() == '-' || peek() == '+') sim = next() == '-' ? -1.0 : 1.0;
    const double im = sim * number();
    skip_ws();
    if (at_end() || next() != ')') fail("expected ')' closing complex literal");
    return {re, im};
  }

  int integer() {
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) next();
    int v = 0;
    auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (start == pos_ || res.ec != std::errc()) fail("malformed exponent");
    return v;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  char next() { return s_[pos_++]; }
  [[noreturn]] void fail(const char* what) const {
    throw ConfigError(std::string("polynomial parse error at offset ") + std::to_string(pos_) +
                      ": " + what + " in \"" + std::string(s_) + "\"");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int max_degree_;
};

}  // namespace

SpherePolynomial::SpherePolynomial(TermMap terms, int max_degree) : max_degree_(max_degree) {
  for (auto& [m, c] : terms) {
    if (m.a < 0 || m.b < 0 || m.c < 0) throw ConfigError("negative exponent in monomial");
    if (std::abs(c) < kPruneThreshold) continue;
    if (m.degree() > max_degree_) throw ConfigError("degree-cap overflow: degree " +
                                                    std::to_string(m.degree()) + " exceeds " +
                                                    std::to_string(max_degree_));
    cplx v = c;
    if (std::abs(v.imag()) < kPruneThreshold) v.imag(0.0);
    if (std::abs(v.real()) < kPruneThreshold) v.real(0.0);
    terms_.emplace(m, v);
  }
}

SpherePolynomial SpherePolynomial::parse(std::string_view text, int max_degree) {
  return Parser(text, max_degree).parse();
}

std::string SpherePolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // highest degree first reads naturally
  std::vector<std::pair<Monomial, cplx>> items(terms_.begin(), terms_.end());
  std::stable_sort(items.begin(), items.end(), [](const auto& l, const auto& r) {
    return l.first.degree() > r.first.degree();
  });
  for (const auto& [m, c] : items) {
    std::string coeff;
    bool negative = false;
    if (c.imag() == 0.0) {
      negative = c.real() < 0.0;
      const double mag = std::abs(c.real());
      if (mag != 1.0 || m.degree() == 0) coeff = format_double(mag);
    } else {
      coeff = "(" + format_double(c.real()) + "," + format_double(c.imag()) + ")";
    }
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    os << coeff;
    auto factor = [&](char v, int e) {
      if (e == 0) return;
      if (!coeff.empty()) os << ' ';
      os << v;
      if (e != 1) os << '^' << e;
      coeff = " ";  // subsequent factors are space separated
    };
    factor('x', m.a);
    factor('y', m.b);
    factor('z', m.c);
  }
  return os.str();
}

int SpherePolynomial::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

bool SpherePolynomial::canonical() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.c <= 1; });
}

bool SpherePolynomial::is_real(double tol) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [tol](const auto& t) { return std::abs(t.second.imag()) <= tol; });
}

cplx SpherePolynomial::coeff(int a, int b, int c) const {
  auto it = terms_.find(Monomial{a, b, c});
  return it == terms_.end() ? cplx{} : it->second;
}

SpherePolynomial SpherePolynomial::reduced() const {
  // x^a y^b z^c -> x^a y^b z^(c-2) (1 - x^2 - y^2), processed from the highest z power down
  std::map<Monomial, cplx, std::greater<>> work;
  TermMap out;
  for (const auto& [m, c] : terms_) {
    if (m.c <= 1)
      add_term(out, m, c);
    else
      work[m] += c;
  }
  // ordering by (a,b,c) descending does not sort by c; loop until empty instead
  while (!work.empty()) {
    auto it = std::max_element(work.begin(), work.end(),
                               [](const auto& l, const auto& r) { return l.first.c < r.first.c; });
    const Monomial m = it->first;
    const cplx c = it->second;
    work.erase(it);
    const Monomial lower{m.a, m.b, m.c - 2};
    const Monomial withx{m.a + 2, m.b, m.c - 2};
    const Monomial withy{m.a, m.b + 2, m.c - 2};
    for (const auto& [mm, cc] : {std::pair{lower, c}, std::pair{withx, -c}, std::pair{withy, -c}}) {
      if (mm.c <= 1)
        add_term(out, mm, cc);
      else
        work[mm] += cc;
    }
  }
  return SpherePolynomial(std::move(out), max_degree_);
}

cplx SpherePolynomial::evaluate(const Vec3& p) const {
  cplx acc = 0.0;
  for (const auto& [m, c] : terms_) acc += c * (ipow(p[0], m.a) * ipow(p[1], m.b) * ipow(p[2], m.c));
  return acc;
}

SpherePolynomial SpherePolynomial::derivative(int axis) const {
  TermMap out;
  for (const auto& [m, c] : terms_) {
    Monomial d = m;
    int& e = axis == 0 ? d.a : axis == 1 ? d.b : d.c;
    if (e == 0) continue;
    const double factor = e;
    --e;
    add_term(out, d, c * factor);
  }
  return SpherePolynomial(std::move(out), max_degree_);
}

Vec3 SpherePolynomial::gradient(const Vec3& p) const {
  Vec3 g{0.0, 0.0, 0.0};
  for (const auto& [m, c] : terms_) {
    const double cr = c.real();
    const double px = ipow(p[0], m.a), py = ipow(p[1], m.b), pz = ipow(p[2], m.c);
    if (m.a > 0) g[0] += cr * m.a * ipow(p[0], m.a - 1) * py * pz;
    if (m.b > 0) g[1] += cr * m.b * px * ipow(p[1], m.b - 1) * pz;
    if (m.c > 0) g[2] += cr * m.c * px * py * ipow(p[2], m.c - 1);
  }
  return g;
}

std::array<double, 9> SpherePolynomial::hessian(const Vec3& p) const {
  std::array<double, 9> h{};
  auto dpow = [&](int axis, int e, int k) {
    // k-th derivative of t^e at p[axis]
    if (k > e) return 0.0;
    double f = 1.0;
    for (int i = 0; i < k; ++i) f *= (e - i);
    return f * ipow(p[axis], e - k);
  };
  for (const auto& [m, c] : terms_) {
    const double cr = c.real();
    const int e[3] = {m.a, m.b, m.c};
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        int k[3] = {0, 0, 0};
        ++k[i];
        ++k[j];
        const double v = cr * dpow(0, e[0], k[0]) * dpow(1, e[1], k[1]) * dpow(2, e[2], k[2]);
        h[3 * i + j] += v;
        if (i != j) h[3 * j + i] += v;
      }
    }
  }
  return h;
}

SpherePolynomial SpherePolynomial::conj() const {
  TermMap out;
  for (const auto& [m, c] : terms_) out.emplace(m, std::conj(c));
  return SpherePolynomial(std::move(out), max_degree_);
}

SpherePolynomial operator+(const SpherePolynomial& l, const SpherePolynomial& r) {
  auto out = l.terms_;
  for (const auto& [m, c] : r.terms_) add_term(out, m, c);
  return SpherePolynomial(std::move(out), std::max(l.max_degree_, r.max_degree_));
}

SpherePolynomial operator-(const SpherePolynomial& l, const SpherePolynomial& r) {
  auto out = l.terms_;
  for (const auto& [m, c] : r.terms_) add_term(out, m, -c);
  return SpherePolynomial(std::move(out), std::max(l.max_degree_, r.max_degree_));
}

SpherePolynomial operator*(const SpherePolynomial& l, const SpherePolynomial& r) {
  const int cap = std::max(l.max_degree_, r.max_degree_);
  SpherePolynomial::TermMap out;
  for (const auto& [ml, cl] : l.terms_) {
    for (const auto& [mr, cr] : r.terms_) {
      const Monomial m{ml.a + mr.a, ml.b + mr.b, ml.c + mr.c};
      if (m.degree() > cap) throw ConfigError("degree-cap overflow in polynomial product");
      add_term(out, m, cl * cr);
    }
  }
  return SpherePolynomial(std::move(out), cap);
}

SpherePolynomial operator*(cplx s, const SpherePolynomial& p) {
  auto out = p.terms_;
  for (auto& [m, c] : out) c *= s;
  return SpherePolynomial(std::move(out), p.max_degree_);
}

double max_coeff_diff(const SpherePolynomial& l, const SpherePolynomial& r) {
  double d = 0.0;
  for (const auto& [m, c] : (l - r).terms_) d = std::max(d, std::abs(c));
  return d;
}

SpherePolynomial poisson_bracket(const SpherePolynomial& f, const SpherePolynomial& g) {
  if (!f.is_real() || !g.is_real())
    throw PreconditionError("poisson_bracket requires real polynomials");
  const SpherePolynomial fx = f.derivative(0), fy = f.derivative(1), fz = f.derivative(2);
  const SpherePolynomial gx = g.derivative(0), gy = g.derivative(1), gz = g.derivative(2);
  // x . (grad f x grad g)
  const SpherePolynomial cx = fy * gz - fz * gy;
  const SpherePolynomial cy = fz * gx - fx * gz;
  const SpherePolynomial cz = fx * gy - fy * gx;
  return (SpherePolynomial::x() * cx + SpherePolynomial::y() * cy + SpherePolynomial::z() * cz)
      .reduced();
}

std::vector<Monomial> canonical_basis(int max_degree) {
  std::vector<Monomial> out;
  for (int d = 0; d <= max_degree; ++d)
    for (int c = 0; c <= std::min(1, d); ++c)
      for (int a = d - c; a >= 0; --a) out.push_back(Monomial{a, d - c - a, c});
  return out;
}

}  // namespace sphq
