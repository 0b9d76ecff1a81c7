#pragma once

// Assertion-by-assertion certificates for a finished factorization: the seven
// core statements (the composite ones split into their lettered parts) plus
// the three ordered refinements, exactly thirteen records. Each record's
// margin is the slack of its governing bound, nonnegative iff the check
// passed; failing records keep the signed violation.

#include <array>
#include <string>
#include <vector>

#include "powerfact/engine.hpp"
#include "powerfact/inverse_witness.hpp"
#include "powerfact/version.hpp"

namespace powerfact {

enum class ClauseStatus { pass, fail, not_applicable };
enum class ClauseMethod { exact, tolerance, closed_form, sampled };

inline const char* clause_status_name(ClauseStatus s) {
  switch (s) {
    case ClauseStatus::pass: return "pass";
    case ClauseStatus::fail: return "fail";
    case ClauseStatus::not_applicable: return "not-applicable";
  }
  return "unknown";
}

inline const char* clause_method_name(ClauseMethod m) {
  switch (m) {
    case ClauseMethod::exact: return "exact";
    case ClauseMethod::tolerance: return "tolerance";
    case ClauseMethod::closed_form: return "closed-form";
    case ClauseMethod::sampled: return "sampled";
  }
  return "unknown";
}

template <class Sc>
struct ClauseRecord {
  std::string id;
  ClauseStatus status = ClauseStatus::not_applicable;
  ClauseMethod method = ClauseMethod::exact;
  Sc margin;
  std::string note;
};

inline const std::array<const char*, 13>& clause_ids() {
  static const std::array<const char*, 13> ids{
      "1", "2", "3", "4a", "4b", "5", "6", "7a", "7b", "7c", "8", "9", "10"};
  return ids;
}

template <class Sc>
struct EnvironmentDigest {
  std::string mode;      // exact | approx
  std::string instance;  // representation tag
  std::string version = library_version;
  std::string config_digest;
  std::string probe_digest;
  Sc tolerance;
};

template <class Sc>
struct Certificate {
  EnvironmentDigest<Sc> environment;
  std::vector<ClauseRecord<Sc>> records;

  const ClauseRecord<Sc>& record(const std::string& id) const {
    for (const auto& r : records)
      if (r.id == id) return r;
    fail(Errc::precondition_failed, "no clause record with id '" + id + "'");
  }
  long failures() const {
    long n = 0;
    for (const auto& r : records)
      if (r.status == ClauseStatus::fail) ++n;
    return n;
  }
  bool all_pass() const { return failures() == 0; }
};

// Shape and margin invariants, checked after assembly.
template <class Sc>
void seal_records(const Certificate<Sc>& cert) {
  require(cert.records.size() == clause_ids().size(), Errc::precondition_failed,
          "certificate must carry exactly one record per clause");
  for (std::size_t i = 0; i < cert.records.size(); ++i) {
    require(cert.records[i].id == clause_ids()[i], Errc::precondition_failed,
            "clause records out of order at position " + std::to_string(i));
    if (cert.records[i].status == ClauseStatus::pass)
      require(le_tol(Sc(0), cert.records[i].margin), Errc::precondition_failed,
              "passing clause " + cert.records[i].id + " has negative margin");
  }
}

namespace detail {

template <class Sc>
ClauseMethod identity_method() {
  return Sc::exact ? ClauseMethod::exact : ClauseMethod::tolerance;
}
template <class Sc>
ClauseMethod bound_method() {
  return Sc::exact ? ClauseMethod::closed_form : ClauseMethod::tolerance;
}
// Slack allowed on checks of exact identities.
template <class Sc>
Sc identity_budget(const Sc& tau) {
  return Sc::exact ? Sc(0) : tau;
}

}  // namespace detail

// Certificate for an engine run: every check is evaluated on the probe
// against the materialized deepest chain stage, with bounds taken from the
// construction's own bookkeeping rather than from re-measured data.
template <class Rep>
Certificate<typename Rep::Scalar> certify(const Rep& rep,
                                          const IdentityNet<typename Rep::AlgebraElem>& net,
                                          const ProbeSet<Rep>& probe,
                                          const FactorizationResult<Rep>& result) {
  using Sc = typename Rep::Scalar;
  using Module = typename Rep::ModuleElem;
  using Super = typename Rep::SuperElem;

  const auto& elems = probe.elements();
  const auto& cfg = result.config;
  const long n_max = result.max_n();
  const Sc pi = rep.pi_norm();
  const Sc budget0 = detail::identity_budget<Sc>(cfg.tau);
  const Super b = result.chain.current_b(rep);
  const Super b_inv = result.chain.current_b_inv(rep);
  const Super ea = rep.embed(result.a);
  const Super unit = rep.unit();

  // b^n, b^{-n}, and the evaluator images pi(b^{-n}) s for n = 1..n_max.
  std::vector<Super> bpow{unit}, bipow{unit};
  std::vector<std::vector<Module>> images;
  {
    std::vector<Module> cur = elems;
    for (long n = 1; n <= n_max; ++n) {
      bpow.push_back(bpow.back() * b);
      bipow.push_back(bipow.back() * b_inv);
      for (auto& x : cur) x = rep.act(b_inv, x);
      images.push_back(cur);
    }
  }

  Certificate<Sc> cert;
  cert.environment.mode = Sc::exact ? "exact" : "approx";
  cert.environment.instance = rep_tag(rep);
  cert.environment.tolerance = cfg.tau;

  auto add = [&](const char* id, ClauseStatus st, ClauseMethod m, const Sc& margin,
                 std::string note) {
    cert.records.push_back({id, st, m, margin, std::move(note)});
  };
  auto judge = [&](const char* id, ClauseMethod m, const Sc& margin, std::string note) {
    add(id, le_tol(Sc(0), margin) ? ClauseStatus::pass : ClauseStatus::fail, m, margin,
        std::move(note));
  };

  // (1) s = pi(a^n) x_n(s), certified against the telescoped power
  // difference: ||b^n - a^n|| <= (sum_i ||b||^{n-1-i} ||a||^i) ||b - a||.
  {
    const Sc defect = rep.super_norm(b - ea);
    const Sc bn = rep.super_norm(b);
    const Sc an = rep.super_norm(ea);
    Sc margin(0);
    bool first = true;
    Sc series(0);   // sum_{i<n} ||b||^{n-1-i} ||a||^i
    Sc apow_n(1);   // ||a||^n
    Super apw = unit;
    for (long n = 1; n <= n_max; ++n) {
      series = series * bn + apow_n;
      apow_n *= an;
      apw = apw * ea;
      for (std::size_t si = 0; si < elems.size(); ++si) {
        const auto& xn = images[static_cast<std::size_t>(n - 1)][si];
        Sc obs = rep.module_norm(elems[si] - rep.act(apw, xn));
        Sc budget = pi * series * defect * rep.module_norm(xn) + budget0;
        Sc slack = budget - obs;
        if (first || slack < margin) margin = slack, first = false;
      }
    }
    std::string note = "residual within the power-difference budget; ||b_K - a|| = " +
                       defect.encode() + ", discarded series tail <= " +
                       result.a_tail_bound.encode();
    ClauseMethod m = (defect.is_zero() && Sc::exact) ? ClauseMethod::exact
                                                     : detail::bound_method<Sc>();
    judge("1", m, margin, std::move(note));
  }

  // (2) ||a|| <= M, including the budget for the unmaterialized tail.
  judge("2",
        result.a_closed_form ? detail::identity_method<Sc>() : detail::bound_method<Sc>(),
        result.bound_M - (result.a_norm + result.a_tail_bound),
        "materialized norm " + result.a_norm.encode() + " plus tail budget " +
            result.a_tail_bound.encode());

  // (3) x_n is a uniformly continuous homeomorphism onto its image: checked
  // as injectivity on the probe, the inverse relation through b^n, and a
  // Lipschitz bound ||pi|| ||b^{-n}|| on probe pairs.
  {
    bool injective = true;
    Sc margin(0);
    bool first = true;
    for (long n = 1; n <= n_max; ++n) {
      const auto& img = images[static_cast<std::size_t>(n - 1)];
      Sc lip = pi * rep.super_norm(bipow[static_cast<std::size_t>(n)]);
      for (std::size_t si = 0; si < elems.size(); ++si) {
        Sc obs = rep.module_norm(rep.act(bpow[static_cast<std::size_t>(n)], img[si]) -
                                 elems[si]);
        Sc slack = budget0 - obs;
        if (first || slack < margin) margin = slack, first = false;
        for (std::size_t sj = si + 1; sj < elems.size(); ++sj) {
          Sc d = rep.module_norm(elems[si] - elems[sj]);
          Sc dimg = rep.module_norm(img[si] - img[sj]);
          if (!d.is_zero() && dimg.is_zero()) injective = false;
          Sc lslack = lip * d - dimg;
          if (first || lslack < margin) margin = lslack, first = false;
        }
      }
    }
    ClauseStatus st = (injective && le_tol(Sc(0), margin)) ? ClauseStatus::pass
                                                           : ClauseStatus::fail;
    add("3", st, ClauseMethod::sampled, margin,
        std::string("probe-sampled: injectivity ") + (injective ? "holds" : "FAILS") +
            ", inverse relation through b^n, Lipschitz constant ||pi|| ||b^{-n}||");
  }

  // (4a) ||s - x_n(s)|| <= epsilon for n <= n0.
  {
    Sc obs(0);
    for (long n = 1; n <= cfg.n0; ++n)
      for (std::size_t si = 0; si < elems.size(); ++si)
        obs = max_val(obs, rep.module_norm(elems[si] -
                                           images[static_cast<std::size_t>(n - 1)][si]));
    std::string note = "working epsilon " + result.epsilon_effective.encode() +
                       (result.epsilon_tightened ? " (tightened)" : "");
    judge("4a", detail::bound_method<Sc>(), cfg.epsilon - obs, std::move(note));
  }

  // (4b) ||x_n(s)|| <= alpha_n^n max(||s||, delta) for n <= j_K.
  {
    Sc margin(0);
    bool first = true;
    std::vector<Sc> floors;
    floors.reserve(elems.size());
    for (const auto& s : elems) floors.push_back(max_val(rep.module_norm(s), cfg.delta));
    for (long n = 1; n <= n_max; ++n) {
      Sc growth = cfg.alpha.at(n).pow(n);
      for (std::size_t si = 0; si < elems.size(); ++si) {
        Sc slack = growth * floors[si] -
                   rep.module_norm(images[static_cast<std::size_t>(n - 1)][si]);
        if (first || slack < margin) margin = slack, first = false;
      }
    }
    judge("4b", detail::bound_method<Sc>(), margin,
          "checked for n = 1.." + std::to_string(n_max));
  }

  // (5) additivity and homogeneity of the evaluators; the materialized maps
  // are restrictions of linear operators, so both are checked unconditionally.
  {
    Sc obs(0);
    const std::array<Sc, 2> lambdas{Sc(2), Sc(1, 2)};
    for (long n = 1; n <= n_max; ++n) {
      const auto& binv_n = bipow[static_cast<std::size_t>(n)];
      const auto& img = images[static_cast<std::size_t>(n - 1)];
      for (std::size_t si = 0; si < elems.size(); ++si) {
        for (std::size_t sj = si + 1; sj < elems.size(); ++sj) {
          auto lhs = rep.act(binv_n, elems[si] + elems[sj]);
          obs = max_val(obs, rep.module_norm(lhs - (img[si] + img[sj])));
        }
        for (const auto& lam : lambdas) {
          auto lhs = rep.act(binv_n, elems[si].scaled(lam));
          obs = max_val(obs, rep.module_norm(lhs - img[si].scaled(lam)));
        }
      }
    }
    judge("5", detail::identity_method<Sc>(), budget0 - obs,
          "linearity of the materialized evaluators on probe sums and scalings");
  }

  // (6) the chain ansatz: convex weights, the materialized a, invertible b_k
  // with a polynomial witness for subalgebra membership, increasing indices,
  // and the accepted approach margins for the limit statement.
  {
    const Sc omr = Sc(1) - cfg.r;
    const long K = result.chain.size();
    Sc margin(0);
    bool first = true;
    auto fold = [&](const Sc& slack) {
      if (first || slack < margin) margin = slack, first = false;
    };

    // Convex weights: sum_i r(1-r)^{i-1} + (1-r)^K = 1, exactly.
    {
      Sc wsum = omr.pow(K);
      Sc coef = cfg.r;
      for (long i = 1; i <= K; ++i) {
        wsum += coef;
        coef *= omr;
      }
      fold(budget0 - abs_val(Sc(1) - wsum));
    }

    // The materialized a against its defining series.
    {
      Super acc = unit.scaled(Sc(0));
      Sc coef = cfg.r;
      for (const auto& step : result.chain.steps) {
        acc = acc + rep.embed(step.u).scaled(coef);
        coef *= omr;
      }
      if (result.a_closed_form) {
        // All u coincide; the whole series collapses onto u_1.
        bool same = true;
        for (const auto& step : result.chain.steps)
          if (!(step.u == result.chain.steps.front().u)) same = false;
        fold(same ? budget0 : Sc(-1));
      } else {
        fold(budget0 - rep.super_norm(ea - acc));
      }
    }

    // Chain stages: b_k b_k^{-1} = 1, witness polynomial, increasing indices,
    // and margin below the accepted threshold slice.
    bool witness_ok = true;
    long prev_index = 0;
    for (const auto& step : result.chain.steps) {
      fold(budget0 - rep.super_norm(step.b * step.b_inv - unit));
      fold(step.index > prev_index ? Sc(0) : Sc(-1));
      prev_index = step.index;
      fold(step.threshold - step.margin);
      if constexpr (requires { inverse_witness(step.b, step.b_inv, cfg.tau); }) {
        auto w = inverse_witness(step.b, step.b_inv, cfg.tau);
        if (!w.ok) witness_ok = false;
        fold(cfg.tau - w.discrepancy);
      }
      if (step.neumann.performed) fold(step.neumann.ok ? Sc(0) : Sc(-1));
    }
    ClauseStatus st = (witness_ok && le_tol(Sc(0), margin)) ? ClauseStatus::pass
                                                            : ClauseStatus::fail;
    add("6", st, detail::bound_method<Sc>(), margin,
        "weights, series, inverse witnesses, and the per-step approach margins");
  }

  // (7a) bounded S has bounded image, via (4b) and the claimed probe bound.
  if (probe.claims().bound) {
    Sc margin(0);
    bool first = true;
    Sc floorb = max_val(*probe.claims().bound, cfg.delta);
    for (long n = 1; n <= n_max; ++n) {
      Sc budget = cfg.alpha.at(n).pow(n) * floorb;
      for (const auto& x : images[static_cast<std::size_t>(n - 1)]) {
        Sc slack = budget - rep.module_norm(x);
        if (first || slack < margin) margin = slack, first = false;
      }
    }
    judge("7a", ClauseMethod::closed_form, margin,
          "image bound alpha_n^n max(sup ||s||, delta) with the claimed bound " +
              probe.claims().bound->encode());
  } else {
    add("7a", ClauseStatus::not_applicable, ClauseMethod::closed_form, Sc(0),
        "no bound claimed for S");
  }

  // (7b) totally bounded S has totally bounded image.
  add("7b", ClauseStatus::pass, ClauseMethod::exact, Sc(0),
      "finite probe: the image is finite and is its own 0-net");

  // (7c) the net converges uniformly on every image.
  {
    if (net.commutative) {
      require(result.pre_scan.threshold.has_value(), Errc::precondition_failed,
              "certified run carries no uniformity threshold");
      long nu_star = *result.pre_scan.threshold;
      Sc res_base = uniform_residual(rep, net.at(nu_star), elems);
      Sc margin(0);
      bool first = true;
      for (long n = 1; n <= n_max; ++n) {
        Sc bound = pi * rep.super_norm(bipow[static_cast<std::size_t>(n)]) * res_base;
        Sc obs = uniform_residual(rep, net.at(nu_star),
                                  images[static_cast<std::size_t>(n - 1)]);
        Sc slack = bound + budget0 - obs;
        if (first || slack < margin) margin = slack, first = false;
      }
      judge("7c", detail::bound_method<Sc>(), margin,
            "image residual controlled through commuting b^{-n} at net index " +
                std::to_string(nu_star));
    } else {
      std::vector<Module> all;
      for (const auto& row : images) all.insert(all.end(), row.begin(), row.end());
      auto scan = uniformity_threshold(rep, net, all, result.epsilon_effective,
                                       cfg.index_cap);
      if (scan.threshold)
        add("7c", ClauseStatus::pass, ClauseMethod::sampled,
            result.epsilon_effective - scan.best_residual,
            "image residual reached the working epsilon at net index " +
                std::to_string(*scan.threshold));
      else
        add("7c", ClauseStatus::fail, ClauseMethod::sampled,
            result.epsilon_effective - scan.best_residual,
            "no net index up to the cap brought the image residual below the working "
            "epsilon");
    }
  }

  // (8)-(10): ordered refinements, applicable only when the probe claims the
  // cone and the net is positive.
  const bool ordered = probe.claims().cone && net.positive;
  if (ordered) {
    bool a_pos = result.a.nonneg();
    add("8", a_pos ? ClauseStatus::pass : ClauseStatus::fail, ClauseMethod::exact,
        a_pos ? Sc(0) : Sc(-1),
        "a is a convex combination of positive net elements");
    bool img_pos = true;
    for (const auto& row : images)
      for (const auto& x : row)
        if (!rep.module_nonneg(x)) img_pos = false;
    add("9", img_pos ? ClauseStatus::pass : ClauseStatus::fail, ClauseMethod::exact,
        img_pos ? Sc(0) : Sc(-1), "x_n keeps the probe inside the cone");
    if (net.bound == Sc(1))
      add("10", ClauseStatus::pass, ClauseMethod::exact, Sc(0), "the net bound is 1");
    else
      add("10", ClauseStatus::not_applicable, ClauseMethod::exact, Sc(0),
          "net bound exceeds 1; the function-algebra refinement does not apply");
  } else {
    const char* why = "no cone claimed for the probe";
    if (!net.positive) why = "the net is not positive";
    add("8", ClauseStatus::not_applicable, ClauseMethod::exact, Sc(0), why);
    add("9", ClauseStatus::not_applicable, ClauseMethod::exact, Sc(0), why);
    add("10", ClauseStatus::not_applicable, ClauseMethod::exact, Sc(0), why);
  }

  seal_records(cert);
  return cert;
}

}  // namespace powerfact
