#pragma once

// The two scalar kinds behind every instance: exact rationals and doubles.
// All tolerance-aware comparisons in the library go through eq_tol/le_tol/lt_tol
// so that exact mode compares exactly and approximate mode compares within the
// global absolute tolerance.

#include <gmpxx.h>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>

#include "powerfact/errors.hpp"

namespace powerfact {

class Rational {
 public:
  static constexpr bool exact = true;

  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT: implicit by design, Sc(0)/Sc(1) everywhere
  Rational(long num, long den) {
    require(den != 0, Errc::zero_value, "rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  static Rational tolerance() { return Rational(0); }

  // Exact decimal or fraction parse; no floats sneak in through configs.
  static Rational parse(const std::string& text);

  const mpq_class& raw() const { return v_; }
  double to_double() const { return v_.get_d(); }
  std::string encode() const { return v_.get_str(); }

  bool is_zero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    require(!o.is_zero(), Errc::zero_value, "rational division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  Rational reciprocal() const {
    require(!is_zero(), Errc::zero_value, "reciprocal of zero");
    return Rational(mpq_class(1) / v_);
  }

  Rational pow(long n) const {
    if (n == 0) return Rational(1);
    bool inv = n < 0;
    unsigned long e = inv ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    Rational base = inv ? reciprocal() : *this;
    Rational out;
    mpz_pow_ui(out.v_.get_num_mpz_t(), base.v_.get_num_mpz_t(), e);
    mpz_pow_ui(out.v_.get_den_mpz_t(), base.v_.get_den_mpz_t(), e);
    out.v_.canonicalize();
    return out;
  }

 private:
  mpq_class v_;
};

inline Rational abs_val(const Rational& x) { return x.sign() < 0 ? -x : x; }

inline Rational Rational_parse_decimal(const std::string& text) {
  // sign? digits [. digits]
  std::size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';
  std::string digits;
  std::size_t frac_len = 0;
  bool seen_dot = false, seen_digit = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      require(!seen_dot, Errc::bad_config, "malformed number '" + text + "'");
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      seen_digit = true;
      if (seen_dot) ++frac_len;
    } else {
      fail(Errc::bad_config, "malformed number '" + text + "'");
    }
  }
  require(seen_digit, Errc::bad_config, "malformed number '" + text + "'");
  mpz_class num(digits.empty() ? "0" : digits, 10);
  mpz_class den(1);
  for (std::size_t k = 0; k < frac_len; ++k) den *= 10;
  mpq_class q(num, den);
  q.canonicalize();
  if (neg) q = -q;
  return Rational(q);
}

inline Rational Rational::parse(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return Rational_parse_decimal(text);
  Rational num = Rational_parse_decimal(text.substr(0, slash));
  Rational den = Rational_parse_decimal(text.substr(slash + 1));
  require(!den.is_zero(), Errc::bad_config, "zero denominator in '" + text + "'");
  return num / den;
}

class ApproxReal {
 public:
  static constexpr bool exact = false;

  ApproxReal() : v_(0.0) {}
  ApproxReal(int n) : v_(n) {}                        // NOLINT: implicit by design
  ApproxReal(long n) : v_(static_cast<double>(n)) {}  // NOLINT: implicit by design
  ApproxReal(long num, long den) : v_(static_cast<double>(num) / static_cast<double>(den)) {
    require(den != 0, Errc::zero_value, "division by zero");
  }
  explicit ApproxReal(double d) : v_(d) { check(); }

  // Global absolute tolerance shared by every comparison in approximate mode.
  static ApproxReal tolerance() { return ApproxReal(tol_ref()); }
  static void set_tolerance(double t) {
    require(t > 0, Errc::parameter_out_of_range, "tolerance must be positive");
    tol_ref() = t;
  }

  static ApproxReal parse(const std::string& text) {
    auto slash = text.find('/');
    if (slash != std::string::npos) {
      ApproxReal num = parse(text.substr(0, slash));
      ApproxReal den = parse(text.substr(slash + 1));
      require(den.raw() != 0.0, Errc::bad_config, "zero denominator in '" + text + "'");
      return num / den;
    }
    double d = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), d);
    require(res.ec == std::errc() && res.ptr == text.data() + text.size(),
            Errc::bad_config, "malformed number '" + text + "'");
    return ApproxReal(d);
  }

  double raw() const { return v_; }
  double to_double() const { return v_; }
  std::string encode() const {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v_);
    return std::string(buf, res.ptr);
  }

  bool is_zero() const { return std::fabs(v_) <= tol_ref(); }
  int sign() const { return is_zero() ? 0 : (v_ < 0 ? -1 : 1); }

  ApproxReal operator-() const { return ApproxReal(-v_); }
  ApproxReal& operator+=(const ApproxReal& o) { v_ += o.v_; check(); return *this; }
  ApproxReal& operator-=(const ApproxReal& o) { v_ -= o.v_; check(); return *this; }
  ApproxReal& operator*=(const ApproxReal& o) { v_ *= o.v_; check(); return *this; }
  ApproxReal& operator/=(const ApproxReal& o) {
    require(o.v_ != 0, Errc::zero_value, "division by zero");
    v_ /= o.v_;
    check();
    return *this;
  }

  friend ApproxReal operator+(ApproxReal a, const ApproxReal& b) { return a += b; }
  friend ApproxReal operator-(ApproxReal a, const ApproxReal& b) { return a -= b; }
  friend ApproxReal operator*(ApproxReal a, const ApproxReal& b) { return a *= b; }
  friend ApproxReal operator/(ApproxReal a, const ApproxReal& b) { return a /= b; }

  friend bool operator==(const ApproxReal& a, const ApproxReal& b) { return a.v_ == b.v_; }
  friend bool operator!=(const ApproxReal& a, const ApproxReal& b) { return a.v_ != b.v_; }
  friend bool operator<(const ApproxReal& a, const ApproxReal& b) { return a.v_ < b.v_; }
  friend bool operator<=(const ApproxReal& a, const ApproxReal& b) { return a.v_ <= b.v_; }
  friend bool operator>(const ApproxReal& a, const ApproxReal& b) { return a.v_ > b.v_; }
  friend bool operator>=(const ApproxReal& a, const ApproxReal& b) { return a.v_ >= b.v_; }

  ApproxReal reciprocal() const {
    require(v_ != 0, Errc::zero_value, "reciprocal of zero");
    return ApproxReal(1.0 / v_);
  }

  ApproxReal pow(long n) const {
    ApproxReal out(1.0);
    ApproxReal base = n < 0 ? reciprocal() : *this;
    for (long k = 0, e = n < 0 ? -n : n; k < e; ++k) out *= base;
    return out;
  }

 private:
  void check() const {
    require(std::isfinite(v_), Errc::norm_bound_violated, "non-finite value");
  }
  static double& tol_ref() {
    static double tol = 1e-9;
    return tol;
  }
  double v_;
};

inline ApproxReal abs_val(const ApproxReal& x) { return ApproxReal(std::fabs(x.raw())); }

// Raw positivity for parameter validation: sign() quantizes away values at
// or below the tolerance, which are still legitimate strictly positive
// parameters (tau itself, deep decay values).
inline bool positive_raw(const Rational& x) { return x.sign() > 0; }
inline bool positive_raw(const ApproxReal& x) { return x.raw() > 0; }

// Tolerance-aware predicates. Exact mode: plain ==, <=, <.
template <class Sc>
bool eq_tol(const Sc& a, const Sc& b) {
  return abs_val(a - b) <= Sc::tolerance();
}
template <class Sc>
bool le_tol(const Sc& a, const Sc& b) {
  return a <= b + Sc::tolerance();
}
template <class Sc>
bool lt_tol(const Sc& a, const Sc& b) {
  // Strictly below with the equality band excluded, so eq_tol and lt_tol
  // never both hold. Exact mode: plain <.
  return !le_tol(b, a);
}

template <class Sc>
Sc min_val(const Sc& a, const Sc& b) { return a < b ? a : b; }
template <class Sc>
Sc max_val(const Sc& a, const Sc& b) { return a < b ? b : a; }

}  // namespace powerfact
