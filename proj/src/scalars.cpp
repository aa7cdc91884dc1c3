#include "glq/scalars.hpp"

#include <utility>

namespace glq {

IntPoly::IntPoly(long v) {
  if (v != 0) c_.emplace_back(v);
}

IntPoly::IntPoly(const mpz_class& v) {
  if (v != 0) c_.push_back(v);
}

IntPoly::IntPoly(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { trim(); }

IntPoly IntPoly::variable() { return monomial(1, 1); }

IntPoly IntPoly::monomial(const mpz_class& coeff, int deg) {
  IntPoly p;
  if (coeff != 0) {
    p.c_.assign(deg + 1, mpz_class(0));
    p.c_[deg] = coeff;
  }
  return p;
}

void IntPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

mpz_class IntPoly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return 0;
  return c_[i];
}

mpz_class IntPoly::leading() const { return c_.empty() ? mpz_class(0) : c_.back(); }

IntPoly IntPoly::operator-() const {
  IntPoly r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
  IntPoly r;
  r.c_.resize(std::max(a.c_.size(), b.c_.size()), mpz_class(0));
  for (size_t i = 0; i < a.c_.size(); ++i) r.c_[i] = a.c_[i];
  for (size_t i = 0; i < b.c_.size(); ++i) r.c_[i] += b.c_[i];
  r.trim();
  return r;
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + (-b); }

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return IntPoly();
  IntPoly r;
  r.c_.assign(a.c_.size() + b.c_.size() - 1, mpz_class(0));
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) {
      if (b.c_[j] == 0) continue;
      r.c_[i + j] += a.c_[i] * b.c_[j];
    }
  }
  r.trim();
  return r;
}

IntPoly IntPoly::times(const mpz_class& f) const {
  if (f == 0) return IntPoly();
  IntPoly r = *this;
  for (auto& x : r.c_) x *= f;
  return r;
}

bool IntPoly::try_divide(const IntPoly& a, const IntPoly& b, IntPoly& quot) {
  if (b.is_zero()) throw std::domain_error("IntPoly: division by zero");
  if (a.is_zero()) {
    quot = IntPoly();
    return true;
  }
  if (a.degree() < b.degree()) return false;
  const mpz_class lb = b.leading();
  const int db = b.degree();
  std::vector<mpz_class> rem = a.c_;
  std::vector<mpz_class> q(a.degree() - db + 1, mpz_class(0));
  for (int i = static_cast<int>(q.size()) - 1; i >= 0; --i) {
    mpz_class& top = rem[i + db];
    if (top == 0) continue;
    if (!mpz_divisible_p(top.get_mpz_t(), lb.get_mpz_t())) return false;
    mpz_class f = top / lb;
    q[i] = f;
    for (int j = 0; j <= db; ++j) rem[i + j] -= f * b.c_[j];
  }
  for (const auto& x : rem)
    if (x != 0) return false;
  quot = IntPoly(std::move(q));
  return true;
}

IntPoly IntPoly::divide_exact(const IntPoly& a, const IntPoly& b) {
  IntPoly q;
  if (!try_divide(a, b, q)) throw std::domain_error("IntPoly: inexact division");
  return q;
}

mpz_class IntPoly::content() const {
  mpz_class g = 0;
  for (const auto& x : c_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

IntPoly IntPoly::primitive_part() const {
  if (is_zero()) return IntPoly();
  mpz_class ct = content();
  IntPoly r = *this;
  for (auto& x : r.c_) x /= ct;
  return r;
}

namespace {

// Pseudo-remainder: repeatedly scale by the leading coefficient of b so each
// cancellation step stays in Z[q]; only the ideal it generates matters here.
IntPoly pseudo_rem(IntPoly a, const IntPoly& b) {
  const int db = b.degree();
  const mpz_class lb = b.leading();
  while (!a.is_zero() && a.degree() >= db) {
    const int k = a.degree() - db;
    const mpz_class la = a.leading();
    a = a.times(lb) - IntPoly::monomial(la, k) * b;
  }
  return a;
}

}  // namespace

IntPoly IntPoly::gcd(IntPoly a, IntPoly b) {
  auto positive = [](IntPoly p) { return p.leading() < 0 ? -p : p; };
  if (a.is_zero()) return positive(std::move(b));
  if (b.is_zero()) return positive(std::move(a));
  mpz_class cg;
  {
    const mpz_class ca = a.content(), cb = b.content();
    mpz_gcd(cg.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
  }
  a = a.primitive_part();
  b = b.primitive_part();
  while (!b.is_zero()) {
    IntPoly r = pseudo_rem(a, b).primitive_part();
    a = std::move(b);
    b = std::move(r);
  }
  return positive(std::move(a)).times(cg);
}

std::uint64_t IntPoly::eval_mod(std::uint64_t q0, std::uint64_t p) const {
  std::uint64_t r = 0;
  for (int i = degree(); i >= 0; --i) {
    const std::uint64_t ci = mpz_fdiv_ui(c_[i].get_mpz_t(), p);
    r = (r * (q0 % p) + ci) % p;
  }
  return r;
}

std::string IntPoly::str() const {
  if (is_zero()) return "0";
  std::string s;
  for (int i = degree(); i >= 0; --i) {
    if (c_[i] == 0) continue;
    const bool neg = c_[i] < 0;
    if (s.empty()) {
      if (neg) s += "-";
    } else {
      s += neg ? "-" : "+";
    }
    const mpz_class mag = abs(c_[i]);
    if (i == 0) {
      s += mag.get_str();
    } else {
      if (mag != 1) {
        s += mag.get_str();
        s += "*";
      }
      s += (i == 1) ? "q" : "q^" + std::to_string(i);
    }
  }
  return s;
}

RationalScalar RationalScalar::of(IntPoly num, IntPoly den) {
  if (den.is_zero()) throw std::domain_error("RationalScalar: zero denominator");
  RationalScalar r;
  if (num.is_zero()) {
    r.num_ = IntPoly();
    r.den_ = IntPoly(1);
    return r;
  }
  const IntPoly g = IntPoly::gcd(num, den);
  num = IntPoly::divide_exact(num, g);
  den = IntPoly::divide_exact(den, g);
  if (den.leading() < 0) {
    num = -num;
    den = -den;
  }
  r.num_ = std::move(num);
  r.den_ = std::move(den);
  return r;
}

RationalScalar RationalScalar::q_power(long e) {
  if (e >= 0) return RationalScalar(IntPoly::monomial(1, static_cast<int>(e)));
  return of(IntPoly(1), IntPoly::monomial(1, static_cast<int>(-e)));
}

RationalScalar RationalScalar::operator-() const {
  RationalScalar r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalScalar operator+(const RationalScalar& a, const RationalScalar& b) {
  return RationalScalar::of(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalScalar operator-(const RationalScalar& a, const RationalScalar& b) {
  return RationalScalar::of(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RationalScalar operator*(const RationalScalar& a, const RationalScalar& b) {
  if (a.is_zero() || b.is_zero()) return RationalScalar();
  return RationalScalar::of(a.num_ * b.num_, a.den_ * b.den_);
}

RationalScalar operator/(const RationalScalar& a, const RationalScalar& b) {
  return a * b.inverse();
}

RationalScalar RationalScalar::inverse() const {
  if (is_zero()) throw std::domain_error("RationalScalar: inverse of zero");
  return of(den_, num_);
}

std::optional<std::uint64_t> RationalScalar::eval_mod(std::uint64_t q0,
                                                      std::uint64_t p) const {
  const std::uint64_t d = den_.eval_mod(q0, p);
  if (d == 0) return std::nullopt;
  const std::uint64_t n = num_.eval_mod(q0, p);
  return (n * inv_mod(d, p)) % p;
}

std::string RationalScalar::str() const {
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  base %= p;
  while (exp > 0) {
    if (exp & 1) r = (r * base) % p;
    base = (base * base) % p;
    exp >>= 1;
  }
  return r;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  return pow_mod(a % p, p - 2, p);
}

}  // namespace glq
