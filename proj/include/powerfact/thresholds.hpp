#pragma once

// Closed-form site thresholds for the discrete-line worked example: where the
// envelope falls below the decay schedule (N1), below epsilon/K times it (N2),
// below the growth-law budget (N3), and the growth-law crossover N'. All scans
// are certified by the decreasing tails of the schedules involved.

#include <vector>

#include "powerfact/config.hpp"
#include "powerfact/envelope.hpp"

namespace powerfact {

template <class Sc>
struct KConstant {
  Sc value;
  long argmax_n = 0;
  long argmax_i = 0;
  long scanned_to = 0;  // the certified-tail scan stopped here
};

// K = sup over 1 <= n <= n0, i >= 1 of ((1-r)^{-in} - 1) d(i). The scan stops
// once the majorant h(i) = (1-r)^{-in} d(i) is below the best value seen and
// its step ratio has fallen below 1, which certifies the remaining tail.
template <class Sc>
KConstant<Sc> k_constant(const DecaySchedule<Sc>& d, const Sc& r, long n0) {
  require(r.sign() > 0 && r < Sc(1), Errc::parameter_out_of_range, "need 0 < r < 1");
  require(n0 >= 1, Errc::parameter_out_of_range, "n0 must be >= 1");
  const Sc omr = Sc(1) - r;
  KConstant<Sc> out{Sc(0), 0, 0, 0};
  constexpr long kScanCap = 100000;
  for (long n = 1; n <= n0; ++n) {
    Sc gpow = omr.pow(-n);
    if (!d.step_ratio_vanishes()) {
      // Constant step ratio: the majorant must already contract.
      Sc rho = gpow * d.step_ratio(1);
      require(lt_tol(rho, Sc(1)), Errc::decay_too_slow,
              "decay schedule does not dominate (1-r)^{-in} at n = " + std::to_string(n));
    }
    Sc h = gpow * d.at(1);
    for (long i = 1;; ++i) {
      require(i <= kScanCap, Errc::schedule_overflow, "K-constant scan exceeded its cap");
      Sc g = h - d.at(i);
      if (g > out.value) {
        out.value = g;
        out.argmax_n = n;
        out.argmax_i = i;
      }
      Sc rho_i = gpow * d.step_ratio(i);
      Sc h_next = h * rho_i;
      if (lt_tol(rho_i, Sc(1)) && le_tol(h_next, out.value)) {
        out.scanned_to = std::max(out.scanned_to, i);
        break;
      }
      h = h_next;
    }
  }
  return out;
}

template <class Sc>
struct ThresholdSchedules {
  std::vector<long> N1, N2, N3;  // strictly increasing, one entry per level
  std::vector<long> Nprime;      // least n with (1-r)^{-i} <= alpha_n
  KConstant<Sc> K;
};

template <class Sc>
ThresholdSchedules<Sc> build_thresholds(const Envelope<Sc>& env, const DecaySchedule<Sc>& d,
                                        const Sc& r, const Sc& eps, const Sc& delta, long n0,
                                        const AlphaLaw<Sc>& alpha, long levels) {
  require(levels >= 1, Errc::parameter_out_of_range, "need at least one level");
  require(r.sign() > 0 && r < Sc(1, 2), Errc::parameter_out_of_range,
          "the pyramid construction needs 0 < r < 1/2");
  require(eps.sign() > 0, Errc::parameter_out_of_range, "epsilon must be > 0");
  require(delta.sign() > 0 && le_tol(delta, Sc(1)), Errc::parameter_out_of_range,
          "delta must lie in (0, 1]");
  alpha.validate();

  const Sc omr = Sc(1) - r;
  ThresholdSchedules<Sc> out;
  out.K = k_constant(d, r, n0);

  constexpr long kAlphaCap = 1000000;
  long prev1 = -1, prev2 = -1, prev3 = 0;
  for (long i = 1; i <= levels; ++i) {
    long n1 = env.vanishing_threshold(d.at(i));
    long n2 = env.vanishing_threshold(eps / out.K.value * d.at(i));

    Sc bar = omr.pow(-i);
    long np = 1;
    while (alpha.at(np) < bar) {
      ++np;
      require(np <= kAlphaCap, Errc::schedule_overflow,
              "alpha law never reaches (1-r)^{-i}");
    }

    long n3 = 1;
    for (long n = 1; n < np; ++n) {
      Sc budget = alpha.at(n).pow(n) * delta * omr.pow(i * n);
      n3 = std::max(n3, env.vanishing_threshold(budget));
    }

    // Strict increase is part of the contract; minimal values are clamped up.
    n1 = std::max(n1, prev1 + 1);
    n2 = std::max(n2, prev2 + 1);
    n3 = std::max(n3, prev3 + 1);
    out.N1.push_back(n1);
    out.N2.push_back(n2);
    out.N3.push_back(n3);
    out.Nprime.push_back(np);
    prev1 = n1;
    prev2 = n2;
    prev3 = n3;
  }
  return out;
}

// nu_1 >= every level-1 threshold and the last site where the envelope still
// exceeds min(1, delta); afterwards nu_i strictly increasing through the
// level-i thresholds.
template <class Sc>
std::vector<long> choose_nu(const ThresholdSchedules<Sc>& sched, const Envelope<Sc>& env,
                            const Sc& delta) {
  std::vector<long> nu;
  nu.reserve(sched.N1.size());
  long base = env.vanishing_threshold(min_val(Sc(1), delta));
  for (std::size_t i = 0; i < sched.N1.size(); ++i) {
    long lo = std::max({sched.N1[i], sched.N2[i], sched.N3[i], 1L});
    if (i == 0)
      lo = std::max(lo, base);
    else
      lo = std::max(lo, nu.back() + 1);
    nu.push_back(lo);
  }
  return nu;
}

}  // namespace powerfact
