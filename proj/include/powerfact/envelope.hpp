#pragma once

// Decaying envelopes on the integer line: an explicit symmetric table near
// the origin plus a geometric law for the tail. The solid set S of the line
// module is "nonnegative, dominated by the envelope wherever the envelope
// is at most 1"; membership is decidable site by site.

#include <map>
#include <string>

#include "powerfact/c0_line.hpp"
#include "powerfact/scalar.hpp"

namespace powerfact {

template <class Sc>
struct GeometricTail {
  Sc coeff;  // > 0
  Sc ratio;  // in (0, 1)
};

template <class Sc>
class Envelope {
 public:
  Envelope(std::map<long, Sc> table, GeometricTail<Sc> tail)
      : table_(std::move(table)), tail_(tail) {
    require(tail_.coeff.sign() > 0, Errc::parameter_out_of_range,
            "envelope tail coefficient must be positive");
    require(tail_.ratio.sign() > 0 && tail_.ratio < Sc(1), Errc::parameter_out_of_range,
            "envelope tail ratio must lie in (0, 1)");
    table_radius_ = -1;
    for (const auto& [abs_t, v] : table_) {
      require(abs_t >= 0, Errc::parameter_out_of_range, "envelope table is keyed by |t|");
      require(v.sign() >= 0, Errc::parameter_out_of_range, "envelope values must be >= 0");
      table_radius_ = std::max(table_radius_, abs_t);
    }
    require(table_radius_ + 1 >= 0, Errc::parameter_out_of_range, "empty envelope");
    for (long k = 0; k <= table_radius_; ++k)
      require(table_.count(k) == 1, Errc::parameter_out_of_range,
              "envelope table must cover 0..radius without gaps");
  }

  long table_radius() const { return table_radius_; }
  const std::map<long, Sc>& table() const { return table_; }
  const GeometricTail<Sc>& tail() const { return tail_; }

  Sc at_abs(long abs_t) const {
    require(abs_t >= 0, Errc::parameter_out_of_range, "negative |t|");
    if (abs_t <= table_radius_) return table_.at(abs_t);
    return tail_.coeff * tail_.ratio.pow(abs_t);
  }
  Sc at(long t) const { return at_abs(t < 0 ? -t : t); }

  bool strictly_positive() const {
    for (const auto& [abs_t, v] : table_)
      if (v.sign() <= 0) return false;
    return true;  // tail law is positive by construction
  }

  // Least N >= 0 with "envelope(t) <= bound for all |t| >= N". The tail law
  // decays geometrically, so this terminates for every positive bound.
  long vanishing_threshold(const Sc& bound) const {
    // Raw positivity: a bound below the working tolerance is still a valid
    // target, the tolerance slack keeps the scan finite.
    require(positive_raw(bound), Errc::parameter_out_of_range,
            "vanishing threshold needs a positive bound");
    long n = 0;
    for (const auto& [abs_t, v] : table_)
      if (!le_tol(v, bound)) n = std::max(n, abs_t + 1);
    long m = table_radius_ + 1;
    Sc v = tail_.coeff * tail_.ratio.pow(m);
    constexpr long kIterCap = 1000000;
    while (!le_tol(v, bound)) {
      ++m;
      v *= tail_.ratio;
      require(m - table_radius_ <= kIterCap, Errc::schedule_overflow,
              "vanishing threshold scan exceeded the iteration cap");
    }
    return std::max(n, m > table_radius_ + 1 ? m : 0);
  }

 private:
  std::map<long, Sc> table_;  // |t| -> value, contiguous 0..radius
  long table_radius_;
  GeometricTail<Sc> tail_;
};

// value 2 on |t| <= 2, then 2^{-|t|}.
template <class Sc>
Envelope<Sc> default_envelope() {
  std::map<long, Sc> table{{0, Sc(2)}, {1, Sc(2)}, {2, Sc(2)}};
  return Envelope<Sc>(std::move(table), GeometricTail<Sc>{Sc(1), Sc(1, 2)});
}

template <class Sc>
struct MembershipCheck {
  bool ok = true;
  long witness_site = 0;
  std::string reason;
};

// f is in S iff f >= 0 everywhere and f(t) <= envelope(t) wherever the
// envelope is <= 1. Finite support makes this a finite check.
template <class Sc>
MembershipCheck<Sc> check_membership(const C0Line<Sc>& f, const Envelope<Sc>& env) {
  for (const auto& [t, v] : f.support()) {
    if (v.sign() < 0)
      return {false, t, "negative value"};
    Sc cap = env.at(t);
    if (le_tol(cap, Sc(1)) && !le_tol(v, cap))
      return {false, t, "exceeds the envelope where the envelope is <= 1"};
  }
  return {};
}

template <class Sc>
void require_membership(const C0Line<Sc>& f, const Envelope<Sc>& env) {
  auto check = check_membership(f, env);
  require(check.ok, Errc::not_in_s,
          "probe value at site " + std::to_string(check.witness_site) + ": " + check.reason);
}

}  // namespace powerfact
