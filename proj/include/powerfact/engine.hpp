#pragma once

// Top of the construction: derive the growth schedule, run the chain to the
// requested depth, and materialize the factoring element together with the
// power evaluators and their a priori error bounds.

#include <vector>

#include "powerfact/chain.hpp"

namespace powerfact {

// j_1 < j_2 < ... with alpha_n >= 1 + ||pi|| Delta^k for all n >= j_k, each
// j_k minimal given the previous one; j_1 additionally at least n0.
template <class Sc>
std::vector<long> build_j_schedule(const AlphaLaw<Sc>& alpha, const Sc& pi_norm,
                                   const Sc& delta_bound, long steps, long n0, long cap) {
  require(steps >= 1, Errc::parameter_out_of_range, "schedule needs at least one step");
  std::vector<long> j;
  j.reserve(static_cast<std::size_t>(steps));
  long prev = 0;
  for (long k = 1; k <= steps; ++k) {
    Sc target = Sc(1) + pi_norm * delta_bound.pow(k);
    long n = std::max(prev + 1, k == 1 ? n0 : 1L);
    while (alpha.at(n) < target) {
      ++n;
      require(n <= cap, Errc::schedule_overflow,
              "alpha law does not reach 1 + ||pi|| Delta^" + std::to_string(k) +
                  " below the index cap");
    }
    j.push_back(n);
    prev = n;
  }
  return j;
}

template <class Rep>
struct FactorizationResult {
  using Sc = typename Rep::Scalar;
  using AlgebraElem = typename Rep::AlgebraElem;
  using ModuleElem = typename Rep::ModuleElem;

  FactorizationConfig<Sc> config;
  Sc bound_M;
  Sc delta_bound;
  Sc epsilon_effective;
  bool epsilon_tightened = false;
  std::vector<long> j_schedule;
  ThresholdScan<Sc> pre_scan;
  ChainState<Rep> chain;

  AlgebraElem a;
  Sc a_norm;
  Sc a_tail_bound;      // norm budget for the discarded series tail
  bool a_closed_form = false;  // true when the series was summed exactly

  long max_n() const { return j_schedule.back(); }

  // x_n(s) materialized at the deepest chain element; valid for n <= j_K.
  ModuleElem x(const Rep& rep, long n, const ModuleElem& s) const {
    require(n >= 1 && n <= max_n(), Errc::parameter_out_of_range,
            "x_n evaluator is valid for 1 <= n <= " + std::to_string(max_n()));
    return rep.act(chain.current_b_inv(rep).pow(n), s);
  }

  // Distance to the ideal limit under continued chain growth.
  Sc x_error_bound(long n) const {
    require(n >= 1 && n <= max_n(), Errc::parameter_out_of_range,
            "x_n evaluator is valid for 1 <= n <= " + std::to_string(max_n()));
    return epsilon_effective / Sc(2).pow(chain.size());
  }
};

template <class Rep>
FactorizationResult<Rep> run_factorization(const Rep& rep,
                                           const IdentityNet<typename Rep::AlgebraElem>& net,
                                           const ProbeSet<Rep>& probe,
                                           const FactorizationConfig<typename Rep::Scalar>& cfg) {
  using Sc = typename Rep::Scalar;
  const Sc M = net.bound;
  cfg.validate(M);
  if (cfg.path == Path::bounded_probe)
    require(probe.claims().bound.has_value(), Errc::illegal_path,
            "bounded-probe path needs a bounded probe claim");
  else
    require(net.commutative, Errc::illegal_path,
            "commutative path needs a commuting net");

  FactorizationResult<Rep> out;
  out.config = cfg;
  out.bound_M = M;
  out.delta_bound = cfg.delta_bound(M);
  out.epsilon_effective = cfg.epsilon_effective();
  out.epsilon_tightened = cfg.epsilon_tightened();
  // The index cap limits net scans; alpha growth gets its own generous cap.
  constexpr long kAlphaCap = 1000000;
  out.j_schedule = build_j_schedule(cfg.alpha, rep.pi_norm(), out.delta_bound, cfg.steps,
                                    cfg.n0, kAlphaCap);

  // The net must actually converge uniformly on the probe before any scan.
  Sc pre_tol = out.epsilon_effective / Sc(2).pow(cfg.steps + 1);
  out.pre_scan = uniformity_threshold(rep, net, probe.elements(), pre_tol, cfg.index_cap);
  if (!out.pre_scan.threshold)
    throw ExhaustedScan("uniformity pre-check", cfg.index_cap, out.pre_scan.best_index,
                        out.pre_scan.best_residual.to_double(), pre_tol.to_double());

  for (long k = 0; k < cfg.steps; ++k)
    out.chain = advance_chain(rep, net, probe, out.chain, cfg,
                              out.j_schedule[static_cast<std::size_t>(k)]);

  // Materialize a. When every accepted u coincides the full series sums in
  // closed form (sum_i r(1-r)^{i-1} = 1), so there is no tail to budget.
  bool all_equal = true;
  for (const auto& step : out.chain.steps)
    if (!(step.u == out.chain.steps.front().u)) all_equal = false;
  const Sc omr = Sc(1) - cfg.r;
  if (all_equal) {
    out.a = out.chain.steps.front().u;
    out.a_tail_bound = Sc(0);
    out.a_closed_form = true;
  } else {
    auto acc = out.chain.steps.front().u.scaled(cfg.r);
    Sc coef = cfg.r * omr;
    for (std::size_t i = 1; i < out.chain.steps.size(); ++i) {
      acc = acc + out.chain.steps[i].u.scaled(coef);
      coef *= omr;
    }
    out.a = acc;
    out.a_tail_bound = omr.pow(cfg.steps) * M;
    out.a_closed_form = false;
  }
  out.a_norm = rep.super_norm(rep.embed(out.a));
  require(le_tol(out.a_norm + out.a_tail_bound, M), Errc::norm_bound_violated,
          "materialized a exceeds the net bound");
  return out;
}

}  // namespace powerfact
