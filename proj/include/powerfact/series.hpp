#pragma once

// Analytic calculus in a unital algebra at desk scale: the geometric inverse
// (1-r)1 + r e |-> its inverse as a certified truncated power series, the
// generic "apply a power series to an element" evaluator, and the telescoping
// decomposition of a^n - b^n used everywhere budgets are derived.

#include <utility>
#include <vector>

#include "powerfact/errors.hpp"
#include "powerfact/scalar.hpp"

namespace powerfact {

template <class Sc>
struct SeriesTruncation {
  long terms = 0;    // number of summands evaluated
  Sc tail_bound;     // rigorous bound on the discarded tail, in norm
};

// ((1-r)1 + r e)^{-1} = (1-r)^{-1} sum_n (r/(r-1))^n e^n, valid for
// ||e|| <= M and r(M+1) < 1. Truncated so the tail is at most tau.
template <class Elem, class Sc = typename Elem::Scalar>
std::pair<Elem, SeriesTruncation<Sc>> geometric_inverse(const Elem& unit, const Elem& e,
                                                        const Sc& r, const Sc& M,
                                                        const Sc& tau) {
  require(r.sign() > 0 && r * (M + Sc(1)) < Sc(1), Errc::parameter_out_of_range,
          "need 0 < r < 1/(M+1)");
  require(M.sign() >= 0, Errc::parameter_out_of_range, "norm bound must be >= 0");
  require(le_tol(e.norm(), M), Errc::norm_bound_violated, "||e|| exceeds the declared bound");
  require(positive_raw(tau), Errc::parameter_out_of_range, "tau must be positive");

  Sc one_minus_r = Sc(1) - r;
  Sc scale = one_minus_r.reciprocal();
  Sc q = -(r / one_minus_r);   // signed term ratio
  Sc rho = r * M / one_minus_r;  // |q| M < 1

  Elem power = unit;
  Elem sum = unit.scaled(scale);
  Sc coeff = scale;
  Sc tail = scale * rho / (Sc(1) - rho);  // after the constant term
  long terms = 1;
  constexpr long kTermCap = 100000;
  while (!le_tol(tail, tau)) {
    require(terms < kTermCap, Errc::schedule_overflow, "geometric inverse series too long");
    power = power * e;
    coeff *= q;
    sum = sum + power.scaled(coeff);
    tail *= rho;
    ++terms;
  }
  return {sum, SeriesTruncation<Sc>{terms, tail}};
}

// Power series data: either a polynomial (finite, entire) or the geometric
// family c rho^n with radius 1/|rho|.
template <class Sc>
class AnalyticSeries {
 public:
  static AnalyticSeries polynomial(std::vector<Sc> coeffs) {
    AnalyticSeries s;
    s.poly_ = std::move(coeffs);
    return s;
  }
  static AnalyticSeries geometric(const Sc& c, const Sc& rho) {
    AnalyticSeries s;
    s.geometric_ = true;
    s.c_ = c;
    s.rho_ = rho;
    return s;
  }

  bool finite() const { return !geometric_; }
  const std::vector<Sc>& poly() const { return poly_; }
  const Sc& geo_c() const { return c_; }
  const Sc& geo_rho() const { return rho_; }
  Sc coeff(long n) const {
    if (!geometric_)
      return n < static_cast<long>(poly_.size()) ? poly_[n] : Sc(0);
    return c_ * rho_.pow(n);
  }

  bool converges_at(const Sc& M) const {
    return !geometric_ || abs_val(rho_) * M < Sc(1);
  }

  // sum_n |alpha_n| M^n
  Sc majorant(const Sc& M) const {
    if (!geometric_) {
      Sc s(0);
      for (std::size_t n = 0; n < poly_.size(); ++n)
        s += abs_val(poly_[n]) * M.pow(static_cast<long>(n));
      return s;
    }
    require(converges_at(M), Errc::divergent_majorant, "series majorant diverges at ||e||");
    return abs_val(c_) / (Sc(1) - abs_val(rho_) * M);
  }

  // L = sum_{n>=1} n |alpha_n| M^{n-1}; a Lipschitz constant for e |-> f(e)
  // on the ball of radius M.
  Sc lipschitz(const Sc& M) const {
    if (!geometric_) {
      Sc s(0);
      for (std::size_t n = 1; n < poly_.size(); ++n)
        s += Sc(static_cast<long>(n)) * abs_val(poly_[n]) * M.pow(static_cast<long>(n) - 1);
      return s;
    }
    require(converges_at(M), Errc::divergent_majorant, "series majorant diverges at ||e||");
    Sc am = abs_val(rho_) * M;
    return abs_val(c_) * abs_val(rho_) / ((Sc(1) - am) * (Sc(1) - am));
  }

  Sc value_at_one() const {
    if (!geometric_) {
      Sc s(0);
      for (const auto& a : poly_) s += a;
      return s;
    }
    require(abs_val(rho_) < Sc(1), Errc::divergent_majorant, "series diverges at 1");
    return c_ / (Sc(1) - rho_);
  }

 private:
  std::vector<Sc> poly_;
  bool geometric_ = false;
  Sc c_{0};
  Sc rho_{0};
};

template <class Elem, class Sc = typename Elem::Scalar>
struct AnalyticApplication {
  Elem value;
  SeriesTruncation<Sc> truncation;
  Sc lipschitz;
};

template <class Elem, class Sc = typename Elem::Scalar>
AnalyticApplication<Elem, Sc> apply_analytic(const AnalyticSeries<Sc>& series, const Elem& unit,
                                             const Elem& e, const Sc& M, const Sc& tau) {
  require(le_tol(e.norm(), M), Errc::norm_bound_violated, "||e|| exceeds the declared bound");
  require(positive_raw(tau), Errc::parameter_out_of_range, "tau must be positive");
  require(series.converges_at(M), Errc::divergent_majorant,
          "coefficient law does not dominate ||e||^n");

  AnalyticApplication<Elem, Sc> out{unit.scaled(Sc(0)), {}, series.lipschitz(M)};
  Elem power = unit;
  if (series.finite()) {
    const auto& coeffs = series.poly();
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
      if (n > 0) power = power * e;
      if (!(coeffs[n] == Sc(0))) out.value = out.value + power.scaled(coeffs[n]);
    }
    out.truncation = {static_cast<long>(coeffs.size()), Sc(0)};
    return out;
  }
  // geometric: alpha_n = c rho^n, tail after N terms: |c| (|rho| M)^{N+1} / (1 - |rho| M)
  const Sc& c = series.geo_c();
  const Sc& rho = series.geo_rho();
  Sc am = abs_val(rho) * M;
  Sc tail = abs_val(c) * am / (Sc(1) - am);
  Sc coeff = c;
  out.value = unit.scaled(coeff);
  long terms = 1;
  constexpr long kTermCap = 100000;
  while (!le_tol(tail, tau)) {
    require(terms < kTermCap, Errc::schedule_overflow, "analytic series too long");
    power = power * e;
    coeff *= rho;
    out.value = out.value + power.scaled(coeff);
    tail *= am;
    ++terms;
  }
  out.truncation = {terms, tail};
  return out;
}

// a^n - b^n = sum_{i=0}^{n-1} a^{n-1-i} (a-b) b^i, returned as the summand list.
template <class Elem>
std::vector<Elem> power_difference_decomposition(const Elem& a, const Elem& b, long n) {
  require(n >= 1, Errc::parameter_out_of_range, "power difference needs n >= 1");
  std::vector<Elem> a_pows{a.pow(0)};  // a^0 .. a^{n-1}
  std::vector<Elem> b_pows{b.pow(0)};
  for (long k = 1; k < n; ++k) {
    a_pows.push_back(a_pows.back() * a);
    b_pows.push_back(b_pows.back() * b);
  }
  Elem diff = a - b;
  std::vector<Elem> terms;
  terms.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i)
    terms.push_back(a_pows[static_cast<std::size_t>(n - 1 - i)] * diff *
                    b_pows[static_cast<std::size_t>(i)]);
  return terms;
}

}  // namespace powerfact
