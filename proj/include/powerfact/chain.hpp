#pragma once

// The inductive chain b_0 = 1, b_{k+1} = (1-r) b_k + r f(e_nu) applied as the
// closed affine form, advanced by scanning net indices upward until the
// candidate passes the probe acceptance gate at the current tolerance slice.

#include <optional>
#include <utility>
#include <vector>

#include "powerfact/config.hpp"
#include "powerfact/identity_net.hpp"
#include "powerfact/representation.hpp"

namespace powerfact {

class ExhaustedScan : public std::runtime_error {
 public:
  ExhaustedScan(std::string stage, long cap, long best_index, double best_margin,
                double threshold)
      : std::runtime_error("scan exhausted during " + stage + ": no index up to " +
                           std::to_string(cap) + " was acceptable (best residual " +
                           std::to_string(best_margin) + " at index " +
                           std::to_string(best_index) + ", needed < " +
                           std::to_string(threshold) + ")"),
        stage(std::move(stage)),
        cap(cap),
        best_index(best_index),
        best_margin(best_margin),
        threshold(threshold) {}

  std::string stage;
  long cap;
  long best_index;
  double best_margin;
  double threshold;
};

template <class Sc>
struct NeumannCheck {
  bool performed = false;
  bool ok = false;
  long terms = 0;
  Sc q;            // ||b_k^{-1}|| ||b_k - g||; the series contracts when < 1
  Sc tail_bound;
  Sc discrepancy;  // distance between the truncated series and the direct inverse
};

template <class Rep>
struct ChainStep {
  using Sc = typename Rep::Scalar;
  long index = 0;
  typename Rep::AlgebraElem u;
  typename Rep::SuperElem b;
  typename Rep::SuperElem b_inv;
  Sc margin;
  Sc threshold;
  bool forced = false;
  NeumannCheck<Sc> neumann;
};

template <class Rep>
struct ChainState {
  std::vector<ChainStep<Rep>> steps;

  long size() const { return static_cast<long>(steps.size()); }
  long last_index() const { return steps.empty() ? 0 : steps.back().index; }
  typename Rep::SuperElem current_b(const Rep& rep) const {
    return steps.empty() ? rep.unit() : steps.back().b;
  }
  typename Rep::SuperElem current_b_inv(const Rep& rep) const {
    return steps.empty() ? rep.unit() : steps.back().b_inv;
  }
};

template <class Rep>
struct CandidateTriple {
  typename Rep::SuperElem g;
  typename Rep::SuperElem b_next;
  std::optional<typename Rep::SuperElem> b_next_inv;  // empty marks a singular candidate
  typename Rep::SuperElem f_factor;                   // (1-r)1 + r e = f(e)^{-1}
};

// g and the next chain element for a prospective net element e, at chain
// length k: g = (1-r)^k 1 + f(e) sum_i r(1-r)^{i-1} u_i and
// b = (1-r)^{k+1} 1 + sum_i r(1-r)^{i-1} u_i + r(1-r)^k e.
template <class Rep>
CandidateTriple<Rep> candidates(const Rep& rep, const ChainState<Rep>& chain,
                                const typename Rep::AlgebraElem& e,
                                const FactorizationConfig<typename Rep::Scalar>& cfg,
                                const typename Rep::Scalar& M) {
  using Sc = typename Rep::Scalar;
  require(le_tol(rep.super_norm(rep.embed(e)), M), Errc::norm_bound_violated,
          "net element exceeds the declared bound");
  const Sc r = cfg.r;
  const Sc omr = Sc(1) - r;
  const long k = chain.size();

  auto be = rep.embed(e);
  auto f_factor = rep.unit().scaled(omr) + be.scaled(r);
  auto f_e = rep.try_invert(f_factor);
  require(f_e.has_value(), Errc::singular,
          "(1-r)1 + r e is not invertible in this instance");

  auto sum = rep.unit().scaled(Sc(0));
  Sc coef = r;
  for (const auto& step : chain.steps) {
    sum = sum + rep.embed(step.u).scaled(coef);
    coef *= omr;
  }

  CandidateTriple<Rep> out{
      rep.unit().scaled(omr.pow(k)) + *f_e * sum,
      rep.unit().scaled(omr.pow(k + 1)) + sum + be.scaled(r * omr.pow(k)),
      std::nullopt,
      f_factor,
  };

  // Coherence: f(e)^{-1} g must reproduce b exactly (up to the mode's tolerance).
  require(le_tol(rep.super_norm(out.f_factor * out.g - out.b_next), Sc(0)),
          Errc::precondition_failed, "candidate identity f(e)^{-1} g = b failed");

  out.b_next_inv = rep.try_invert(out.b_next);
  return out;
}

// Truncated series sum_m (b_k^{-1}(b_k - g))^m b_k^{-1} against the direct
// inverse g^{-1} = b^{-1} f(e)^{-1}. Only meaningful when the ratio is < 1,
// which the accepted candidates approach by construction.
template <class Rep>
NeumannCheck<typename Rep::Scalar> neumann_cross_check(
    const Rep& rep, const ChainState<Rep>& chain, const CandidateTriple<Rep>& cand,
    const typename Rep::Scalar& tau) {
  using Sc = typename Rep::Scalar;
  NeumannCheck<Sc> check;
  auto b_prev = chain.current_b(rep);
  auto b_prev_inv = chain.current_b_inv(rep);
  auto defect = b_prev - cand.g;
  check.q = rep.super_norm(b_prev_inv) * rep.super_norm(defect);
  if (!lt_tol(check.q, Sc(1))) return check;  // not contracting yet; skip

  check.performed = true;
  auto mul = b_prev_inv * defect;
  auto acc = b_prev_inv;
  auto cur = b_prev_inv;
  Sc tail = rep.super_norm(b_prev_inv) * check.q / (Sc(1) - check.q);
  check.terms = 1;
  constexpr long kTermCap = 10000;
  while (!le_tol(tail, tau) && check.terms < kTermCap) {
    cur = mul * cur;
    acc = acc + cur;
    tail *= check.q;
    ++check.terms;
  }
  check.tail_bound = tail;
  require(cand.b_next_inv.has_value(), Errc::singular, "cross-check needs the inverse");
  auto direct = *cand.b_next_inv * cand.f_factor;
  check.discrepancy = rep.super_norm(acc - direct);
  check.ok = le_tol(check.discrepancy, tail + tau);
  return check;
}

template <class Rep>
ChainState<Rep> advance_chain(const Rep& rep,
                              const IdentityNet<typename Rep::AlgebraElem>& net,
                              const ProbeSet<Rep>& probe, const ChainState<Rep>& chain,
                              const FactorizationConfig<typename Rep::Scalar>& cfg,
                              long j_next) {
  using Sc = typename Rep::Scalar;
  const long k = chain.size();
  const Sc threshold = cfg.epsilon_effective() / Sc(2).pow(k + 1);

  // pi(b_k^{-j}) s for j = 1..j_next, shared across all candidates.
  const auto& elems = probe.elements();
  auto b_prev_inv = chain.current_b_inv(rep);
  std::vector<std::vector<typename Rep::ModuleElem>> refs(elems.size());
  for (std::size_t si = 0; si < elems.size(); ++si) {
    auto cur = elems[si];
    refs[si].reserve(static_cast<std::size_t>(j_next));
    for (long j = 1; j <= j_next; ++j) {
      cur = rep.act(b_prev_inv, cur);
      refs[si].push_back(cur);
    }
  }

  auto evaluate = [&](const CandidateTriple<Rep>& cand) -> Sc {
    Sc margin(0);
    for (std::size_t si = 0; si < elems.size(); ++si) {
      auto cur = elems[si];
      for (long j = 1; j <= j_next; ++j) {
        cur = rep.act(*cand.b_next_inv, cur);
        margin = max_val(margin, rep.module_norm(cur - refs[si][static_cast<std::size_t>(j - 1)]));
      }
    }
    return margin;
  };

  auto accept = [&](long nu, const CandidateTriple<Rep>& cand, const Sc& margin,
                    bool forced) {
    ChainState<Rep> out = chain;
    ChainStep<Rep> step;
    step.index = nu;
    step.u = net.at(nu);
    step.b = cand.b_next;
    step.b_inv = *cand.b_next_inv;
    step.margin = margin;
    step.threshold = threshold;
    step.forced = forced;
    step.neumann = neumann_cross_check(rep, chain, cand, cfg.tau);
    out.steps.push_back(std::move(step));
    return out;
  };

  if (cfg.forced_indices) {
    long nu = cfg.forced_indices->at(static_cast<std::size_t>(k));
    require(nu > chain.last_index(), Errc::parameter_out_of_range,
            "forced index does not extend the chain");
    auto cand = candidates(rep, chain, net.at(nu), cfg, net.bound);
    require(cand.b_next_inv.has_value(), Errc::singular, "forced candidate is singular");
    return accept(nu, cand, evaluate(cand), true);
  }

  bool seen = false;
  Sc best_margin(0);
  long best_index = 0;
  for (long nu = chain.last_index() + 1; nu <= cfg.index_cap; ++nu) {
    auto cand = candidates(rep, chain, net.at(nu), cfg, net.bound);
    if (!cand.b_next_inv.has_value()) continue;  // singular candidate, keep scanning
    Sc margin = evaluate(cand);
    if (!seen || margin < best_margin) {
      best_margin = margin;
      best_index = nu;
      seen = true;
    }
    if (lt_tol(margin, threshold)) return accept(nu, cand, margin, false);
  }
  throw ExhaustedScan("chain step " + std::to_string(k + 1), cfg.index_cap, best_index,
                      seen ? best_margin.to_double() : -1.0, threshold.to_double());
}

}  // namespace powerfact
