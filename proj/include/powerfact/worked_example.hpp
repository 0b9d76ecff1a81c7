#pragma once

// The fully computable instance on the discrete line: plateau identities, an
// envelope-bounded solid probe family, and a step pyramid whose powers and
// inverses are closed-form. Everything the general construction only bounds
// is evaluated exactly here, so its certificate can use closed-form methods
// where the engine path has to sample.

#include <string>
#include <vector>

#include "powerfact/certificate.hpp"
#include "powerfact/config.hpp"
#include "powerfact/envelope.hpp"
#include "powerfact/inverse_witness.hpp"
#include "powerfact/pyramid.hpp"
#include "powerfact/thresholds.hpp"

namespace powerfact {

// zeta(eta) for x_n: shrink inputs by (1-r)^{(i0-1) n} where i0 is the first
// band whose doubled image bound 2 (1-r)^{-i n} d(i) sits below eta and keeps
// contracting.
template <class Sc>
struct ModulusRow {
  long n = 0;
  Sc eta;
  long band = 0;  // i0; levels + 1 marks the flat Lipschitz fallback
  Sc zeta;
};

// Window radius T with |x_n f(t)| <= eta for every member f and |t| > T.
template <class Sc>
struct TruncationRow {
  long n = 0;
  Sc eta;
  long site = 0;
};

template <class Sc>
struct WorkedExample {
  Sc r;
  Sc epsilon;            // as requested
  Sc epsilon_effective;  // after tightening against delta and alpha_1
  Sc delta;
  long n0 = 0;
  AlphaLaw<Sc> alpha;
  long levels = 0;
  Envelope<Sc> envelope;
  DecaySchedule<Sc> decay;
  Sc tau;

  ThresholdSchedules<Sc> thresholds;
  std::vector<long> nu;
  PyramidBuild<Sc> build;
  EventuallyConstantLine<Sc> a_super;  // the materialized a; what gets certified

  std::vector<ModulusRow<Sc>> modulus;
  std::vector<TruncationRow<Sc>> truncation;
};

namespace detail {

// Least band i with h(i) = 2 (1-r)^{-i n} d(i) <= eta and a certified
// contraction of h beyond i; levels + 1 selects the flat Lipschitz bound
// over all bands instead.
template <class Sc>
long modulus_band(const Sc& r, const DecaySchedule<Sc>& d, long levels, long n,
                  const Sc& eta) {
  const Sc omr = Sc(1) - r;
  for (long i = 1; i <= levels; ++i) {
    Sc h = Sc(2) * omr.pow(-i * n) * d.at(i);
    Sc rho = omr.pow(-n) * d.step_ratio(i);
    if (le_tol(h, eta) && le_tol(rho, Sc(1))) {
      if (!d.step_ratio_vanishes())
        require(lt_tol(rho, Sc(1)), Errc::decay_too_slow,
                "constant-ratio decay cannot certify the modulus at this power");
      return i;
    }
  }
  return levels + 1;
}

}  // namespace detail

template <class Sc>
WorkedExample<Sc> run_worked_example(const Envelope<Sc>& env, const DecaySchedule<Sc>& d,
                                     const Sc& r, const Sc& eps, const Sc& delta, long n0,
                                     const AlphaLaw<Sc>& alpha, long levels, const Sc& tau) {
  require(env.strictly_positive(), Errc::parameter_out_of_range,
          "the solid probe family needs a strictly positive envelope");
  require(eps.sign() > 0, Errc::parameter_out_of_range, "epsilon must be > 0");
  alpha.validate();

  // Same tightening as the engine: work below delta and alpha_1 - 1 so the
  // closeness statement survives the norm floor.
  Sc eps_w = min_val(eps, min_val(delta, (alpha.at(1) - Sc(1)) * delta));

  auto sched = build_thresholds(env, d, r, eps_w, delta, n0, alpha, levels);
  auto nu = choose_nu(sched, env, delta);
  auto build = build_pyramid(nu, r, tau);
  auto a_super = build.pyramid.as_super();

  WorkedExample<Sc> out{r,    eps,   eps_w, delta, n0,      alpha,   levels,
                        env,  d,     tau,   sched, nu,      build,   a_super,
                        {},   {}};

  const Sc omr = Sc(1) - r;
  const std::vector<Sc> etas{Sc(1), Sc(1, 2), Sc(1, 4), Sc(1, 8)};
  for (long n = 1; n <= n0; ++n) {
    for (const auto& eta : etas) {
      long i0 = detail::modulus_band(r, d, levels, n, eta);
      Sc zeta = (i0 <= levels) ? eta * omr.pow((i0 - 1) * n) : eta * omr.pow(levels * n);
      out.modulus.push_back({n, eta, i0, zeta});
      out.truncation.push_back({n, eta, env.vanishing_threshold(eta * omr.pow(levels * n))});
    }
  }
  return out;
}

// Certificate over an explicit probe of envelope members. Powers are taken
// out to n_limit, so growth and positivity are checked well past n0.
template <class Sc>
Certificate<Sc> certify(const WorkedExample<Sc>& ex, const std::vector<C0Line<Sc>>& probe,
                        long n_limit = 15) {
  require(!probe.empty(), Errc::precondition_failed, "empty probe");
  require(n_limit >= ex.n0, Errc::parameter_out_of_range,
          "n_limit must reach at least n0");
  for (const auto& f : probe) require_membership(f, ex.envelope);

  const Sc omr = Sc(1) - ex.r;
  const long I = ex.levels;
  const long nu_last = ex.nu.back();
  const Sc budget0 = detail::identity_budget<Sc>(ex.tau);
  const StepPyramid<Sc>& pyr = ex.build.pyramid;

  // x_n f for every probe member and 1 <= n <= n_limit, via the closed form.
  std::vector<std::vector<C0Line<Sc>>> images;
  bool bands_ok = true, vanishing_ok = true;
  for (long n = 1; n <= n_limit; ++n) {
    std::vector<C0Line<Sc>> row;
    row.reserve(probe.size());
    for (const auto& f : probe) {
      auto xp = explicit_x_n(pyr, f, n, ex.envelope, ex.decay);
      if (!xp.bounds_ok) bands_ok = false;
      if (!xp.vanishing_certified) vanishing_ok = false;
      row.push_back(std::move(xp.x));
    }
    images.push_back(std::move(row));
  }

  Certificate<Sc> cert;
  cert.environment.mode = Sc::exact ? "exact" : "approx";
  cert.environment.instance = "line-worked";
  cert.environment.tolerance = ex.tau;

  auto add = [&](const char* id, ClauseStatus st, ClauseMethod m, const Sc& margin,
                 std::string note) {
    cert.records.push_back({id, st, m, margin, std::move(note)});
  };
  auto judge = [&](const char* id, ClauseMethod m, const Sc& margin, std::string note,
                   bool extra_ok = true) {
    add(id, (extra_ok && le_tol(Sc(0), margin)) ? ClauseStatus::pass : ClauseStatus::fail,
        m, margin, std::move(note));
  };

  // (1) f = a^n x_n(f), evaluated against the stored a.
  {
    Sc obs(0);
    auto apow = EventuallyConstantLine<Sc>::unit();
    for (long n = 1; n <= n_limit; ++n) {
      apow = apow * ex.a_super;
      for (std::size_t si = 0; si < probe.size(); ++si)
        obs = max_val(obs, sup_dist(apow * images[static_cast<std::size_t>(n - 1)][si],
                                    probe[si]));
    }
    judge("1", detail::identity_method<Sc>(), budget0 - obs,
          "f recovered from a^n x_n(f) for n = 1.." + std::to_string(n_limit));
  }

  // (2) ||a|| <= 1: the pyramid peaks at its unit plateau.
  judge("2", detail::identity_method<Sc>(), Sc(1) - ex.a_super.norm(),
        "pyramid sup norm " + ex.a_super.norm().encode());

  // (3) homeomorphism data in closed form: band-wise modulus of continuity,
  // injectivity, and the inverse relation; the modulus rows are re-verified
  // on every qualifying probe pair.
  {
    bool injective = true;
    Sc margin(0);
    bool first = true;
    auto fold = [&](const Sc& s) {
      if (first || s < margin) margin = s, first = false;
    };
    for (const auto& row : ex.modulus) {
      const auto& img = images[static_cast<std::size_t>(row.n - 1)];
      for (std::size_t si = 0; si < probe.size(); ++si)
        for (std::size_t sj = si + 1; sj < probe.size(); ++sj) {
          Sc d = sup_dist(probe[si], probe[sj]);
          Sc dimg = sup_dist(img[si], img[sj]);
          if (!d.is_zero() && dimg.is_zero()) injective = false;
          if (le_tol(d, row.zeta)) fold(row.eta - dimg);
        }
    }
    judge("3", ClauseMethod::closed_form, margin,
          "zeta(eta) = (1-r)^{(i0-1) n} eta across " + std::to_string(ex.modulus.size()) +
              " modulus rows; multiplication by a^n inverts",
          injective && bands_ok);
  }

  // (4a) ||f - x_n(f)|| <= epsilon for n <= n0.
  {
    Sc obs(0);
    for (long n = 1; n <= ex.n0; ++n)
      for (std::size_t si = 0; si < probe.size(); ++si)
        obs = max_val(obs, sup_dist(probe[si], images[static_cast<std::size_t>(n - 1)][si]));
    judge("4a", ClauseMethod::closed_form, ex.epsilon_effective - obs,
          "working epsilon " + ex.epsilon_effective.encode());
  }

  // (4b) ||x_n(f)|| <= alpha_n^n max(||f||, delta) out to n_limit.
  {
    Sc margin(0);
    bool first = true;
    for (long n = 1; n <= n_limit; ++n) {
      Sc growth = ex.alpha.at(n).pow(n);
      for (std::size_t si = 0; si < probe.size(); ++si) {
        Sc slack = growth * max_val(probe[si].norm(), ex.delta) -
                   images[static_cast<std::size_t>(n - 1)][si].norm();
        if (first || slack < margin) margin = slack, first = false;
      }
    }
    judge("4b", ClauseMethod::closed_form, margin,
          "growth law checked for n = 1.." + std::to_string(n_limit));
  }

  // (5) additivity whenever the sum stays in the family; homogeneity with
  // 1/2 (solidity keeps it inside) and with 2 when membership holds.
  {
    Sc obs(0);
    for (long n = 1; n <= n_limit; ++n) {
      const auto& img = images[static_cast<std::size_t>(n - 1)];
      for (std::size_t si = 0; si < probe.size(); ++si) {
        for (std::size_t sj = si + 1; sj < probe.size(); ++sj) {
          auto sum = probe[si] + probe[sj];
          if (!check_membership(sum, ex.envelope).ok) continue;
          auto xs = explicit_x_n(pyr, sum, n, ex.envelope, ex.decay).x;
          obs = max_val(obs, sup_dist(xs, img[si] + img[sj]));
        }
        auto half = probe[si].scaled(Sc(1, 2));
        auto xh = explicit_x_n(pyr, half, n, ex.envelope, ex.decay).x;
        obs = max_val(obs, sup_dist(xh, img[si].scaled(Sc(1, 2))));
        auto twice = probe[si].scaled(Sc(2));
        if (check_membership(twice, ex.envelope).ok) {
          auto xt = explicit_x_n(pyr, twice, n, ex.envelope, ex.decay).x;
          obs = max_val(obs, sup_dist(xt, img[si].scaled(Sc(2))));
        }
      }
    }
    judge("5", detail::identity_method<Sc>(), budget0 - obs,
          "additivity on in-family sums, homogeneity at 1/2 and 2");
  }

  // (6) the chain behind a: product identity, affine expansion, factor
  // inverses with their series certificates and polynomial witnesses,
  // strictly increasing sites, and monotone approach of b_k^{-n0} to x_{n0}.
  {
    Sc margin(0);
    bool first = true;
    auto fold = [&](const Sc& s) {
      if (first || s < margin) margin = s, first = false;
    };
    const auto unit = EventuallyConstantLine<Sc>::unit();
    auto net = make_identity_net<Sc>(NetKind::plateau, LineInstance{});

    fold(ex.build.product_identity_ok ? Sc(0) : Sc(-1));
    for (const auto& fc : ex.build.factor_certificates) fold(fc.ok ? Sc(0) : Sc(-1));

    // Affine expansion b_k = (1-r)^k 1 + sum_{i<=k} r (1-r)^{i-1} e_{nu_i}.
    {
      auto acc = unit.scaled(Sc(0));
      Sc coef = ex.r;
      for (long k = 1; k <= I; ++k) {
        acc = acc +
              EventuallyConstantLine<Sc>::embed(net.at(ex.nu[static_cast<std::size_t>(k - 1)]))
                  .scaled(coef);
        coef *= omr;
        auto affine = unit.scaled(omr.pow(k)) + acc;
        fold(budget0 - sup_dist(affine, ex.build.b[static_cast<std::size_t>(k - 1)]));
      }
    }

    long prev = 0;
    bool increasing = true;
    for (long site : ex.nu) {
      if (site <= prev) increasing = false;
      prev = site;
    }
    fold(increasing ? Sc(0) : Sc(-1));

    // Inverse witnesses and the chain limit: b_k^{-n0} applied to the probe
    // approaches x_{n0} monotonically and lands exactly at k = I.
    Sc prev_res;
    bool have_prev = false;
    for (long k = 1; k <= I; ++k) {
      const auto& bk = ex.build.b[static_cast<std::size_t>(k - 1)];
      auto bk_inv = bk.reciprocal();
      fold(budget0 - sup_dist(bk * bk_inv, unit));
      auto w = inverse_witness(bk, bk_inv, ex.tau);
      fold(w.ok ? ex.tau - w.discrepancy : Sc(-1));

      Sc res(0);
      auto ipow = bk_inv.pow(ex.n0);
      for (std::size_t si = 0; si < probe.size(); ++si)
        res = max_val(res,
                      sup_dist(ipow * probe[si],
                               images[static_cast<std::size_t>(ex.n0 - 1)][si]));
      if (have_prev) fold(prev_res - res);
      prev_res = res;
      have_prev = true;
      if (k == I) fold(budget0 - res);
    }
    judge("6", detail::bound_method<Sc>(), margin,
          "product and affine forms agree, factor inverses certified, approach "
          "monotone with exact landing");
  }

  // (7a) the family is bounded by the envelope's sup; images obey the growth
  // law against that bound.
  {
    Sc B(0);
    for (const auto& [t, v] : ex.envelope.table()) B = max_val(B, v);
    B = max_val(B, ex.envelope.at_abs(ex.envelope.table_radius() + 1));
    Sc floorb = max_val(B, ex.delta);
    Sc margin(0);
    bool first = true;
    for (long n = 1; n <= n_limit; ++n) {
      Sc budget = ex.alpha.at(n).pow(n) * floorb;
      for (const auto& x : images[static_cast<std::size_t>(n - 1)]) {
        Sc slack = budget - x.norm();
        if (first || slack < margin) margin = slack, first = false;
      }
    }
    judge("7a", ClauseMethod::closed_form, margin,
          "envelope sup " + B.encode() + " bounds the family");
  }

  // (7b) total boundedness via window truncation: outside the tabulated site
  // T(n, eta) every image is below eta, so the finitely many coordinates in
  // the window carry an eta-net.
  {
    Sc margin(0);
    bool first = true;
    for (const auto& row : ex.truncation) {
      const auto& img = images[static_cast<std::size_t>(row.n - 1)];
      for (const auto& x : img) {
        Sc outside(0);
        for (const auto& [t, v] : x.support())
          if (t > row.site || t < -row.site) outside = max_val(outside, abs_val(v));
        Sc slack = row.eta - outside;
        if (first || slack < margin) margin = slack, first = false;
      }
    }
    judge("7b", ClauseMethod::closed_form, margin,
          "window truncation at T(n, eta) = vanishing site of eta (1-r)^{I n}; "
          "the truncated window is finite-dimensional",
          vanishing_ok);
  }

  // (7c) plateau convergence on images: beyond the deepest plateau the image
  // is dominated by (1-r)^{-I n} envelope, which vanishes along the tail.
  {
    Sc margin(0);
    bool first = true;
    for (long n = 1; n <= n_limit; ++n) {
      Sc bound = omr.pow(-I * n) * ex.envelope.at_abs(nu_last + 1);
      for (const auto& x : images[static_cast<std::size_t>(n - 1)]) {
        Sc outside(0);
        for (const auto& [t, v] : x.support())
          if (t > nu_last || t < -nu_last) outside = max_val(outside, abs_val(v));
        Sc slack = bound - outside;
        if (first || slack < margin) margin = slack, first = false;
      }
    }
    judge("7c", ClauseMethod::closed_form, margin,
          "residual past the deepest plateau is dominated by the envelope tail, "
          "which decays geometrically");
  }

  // (8)-(10): everything here lives in the positive cone of a sup-normed
  // function instance with a contractive net.
  judge("8", ClauseMethod::exact, ex.a_super.nonneg() ? Sc(0) : Sc(-1),
        "the pyramid takes values in [0, 1]");
  {
    bool pos = true;
    for (const auto& row : images)
      for (const auto& x : row)
        if (!x.nonneg()) pos = false;
    judge("9", ClauseMethod::exact, pos ? Sc(0) : Sc(-1),
          "positive multipliers keep the probe in the cone");
  }
  judge("10", ClauseMethod::exact, Sc(1) - ex.a_super.norm(),
        "the net bound is 1, so a itself satisfies ||a|| <= 1");

  seal_records(cert);
  return cert;
}

// The canonical probe: the envelope itself restricted to a window, a few of
// its fractions, single spikes at plateau edges, and the zero function.
template <class Sc>
std::vector<C0Line<Sc>> default_probe(const WorkedExample<Sc>& ex) {
  std::vector<C0Line<Sc>> probe;
  long window = ex.nu.size() >= 2 ? ex.nu[1] : ex.nu.front();

  C0Line<Sc> top;
  for (long t = -window; t <= window; ++t) top.set(t, ex.envelope.at(t));
  probe.push_back(top);
  probe.push_back(top.scaled(Sc(1, 2)));
  probe.push_back(top.scaled(Sc(1, 4)));

  for (std::size_t i = 0; i + 1 < ex.nu.size() && i < 3; ++i) {
    long site = ex.nu[i] + 1;
    probe.push_back(C0Line<Sc>::spike(site, ex.envelope.at(site)));
    probe.push_back(C0Line<Sc>::spike(-site, ex.envelope.at(site)));
  }
  probe.push_back(C0Line<Sc>{});
  return probe;
}

}  // namespace powerfact
