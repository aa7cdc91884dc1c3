#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace glq {

// Dense polynomial in q with arbitrary-precision integer coefficients.
// coeffs[i] holds the coefficient of q^i; the top coefficient is nonzero
// (the zero polynomial has an empty coefficient vector).
class IntPoly {
 public:
  IntPoly() = default;
  IntPoly(long v);               // NOLINT: implicit constant lift is intended
  IntPoly(const mpz_class& v);   // NOLINT
  explicit IntPoly(std::vector<mpz_class> coeffs);

  static IntPoly variable();  // the polynomial q
  static IntPoly monomial(const mpz_class& coeff, int deg);

  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for 0
  mpz_class coeff(int i) const;
  mpz_class leading() const;  // 0 for the zero polynomial
  const std::vector<mpz_class>& coeffs() const { return c_; }

  IntPoly operator-() const;
  friend IntPoly operator+(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
  IntPoly times(const mpz_class& f) const;
  bool operator==(const IntPoly& o) const { return c_ == o.c_; }

  // Exact division in Z[q]; returns false when b does not divide a there.
  static bool try_divide(const IntPoly& a, const IntPoly& b, IntPoly& quot);
  static IntPoly divide_exact(const IntPoly& a, const IntPoly& b);

  mpz_class content() const;      // gcd of coefficients, nonnegative
  IntPoly primitive_part() const; // self / content, sign of leading kept
  // Full gcd in Z[q] (content included), positive leading coefficient.
  static IntPoly gcd(IntPoly a, IntPoly b);

  // Value at q=q0 in Z/p, p an odd prime below 2^31.
  std::uint64_t eval_mod(std::uint64_t q0, std::uint64_t p) const;

  // Terms in decreasing degree, e.g. "q^2-1", "2*q^3+q-5", "0".
  std::string str() const;

 private:
  std::vector<mpz_class> c_;
  void trim();
};

// Element of Q(q) kept in canonical form: reduced fraction of integer
// polynomials whose denominator has a positive leading coefficient.  The
// canonical form is unique, so structural equality is mathematical equality.
class RationalScalar {
 public:
  RationalScalar() : num_(), den_(1) {}
  RationalScalar(long v) : num_(v), den_(1) {}  // NOLINT
  RationalScalar(const IntPoly& p) : num_(p), den_(1) {}  // NOLINT

  static RationalScalar of(IntPoly num, IntPoly den);
  static RationalScalar q() { return RationalScalar(IntPoly::variable()); }
  static RationalScalar q_power(long e);  // Laurent monomial q^e as a fraction

  const IntPoly& num() const { return num_; }
  const IntPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }

  RationalScalar operator-() const;
  friend RationalScalar operator+(const RationalScalar&, const RationalScalar&);
  friend RationalScalar operator-(const RationalScalar&, const RationalScalar&);
  friend RationalScalar operator*(const RationalScalar&, const RationalScalar&);
  friend RationalScalar operator/(const RationalScalar&, const RationalScalar&);
  RationalScalar& operator+=(const RationalScalar& o) { return *this = *this + o; }
  RationalScalar& operator-=(const RationalScalar& o) { return *this = *this - o; }
  RationalScalar& operator*=(const RationalScalar& o) { return *this = *this * o; }
  RationalScalar& operator/=(const RationalScalar& o) { return *this = *this / o; }
  RationalScalar inverse() const;
  bool operator==(const RationalScalar& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }

  // Value at q=q0 in Z/p; empty when the denominator vanishes there
  // (caller retries with a fresh evaluation point).
  std::optional<std::uint64_t> eval_mod(std::uint64_t q0, std::uint64_t p) const;

  std::string str() const;  // "(<num>)/(<den>)", both canonical

 private:
  IntPoly num_, den_;
};

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t p);
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p);  // p prime, a != 0 mod p

}  // namespace glq
