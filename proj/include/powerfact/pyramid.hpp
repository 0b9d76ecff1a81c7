#pragma once

// The step pyramid on the discrete line: level (1-r)^i on the band
// nu_i < |t| <= nu_{i+1}. Its chain elements, the product identity, the
// per-factor series certificates, and the closed-form power factors.

#include <algorithm>
#include <string>
#include <vector>

#include "powerfact/envelope.hpp"
#include "powerfact/eventually_constant_line.hpp"
#include "powerfact/identity_net.hpp"
#include "powerfact/series.hpp"

namespace powerfact {

template <class Sc>
class StepPyramid {
 public:
  StepPyramid(std::vector<long> nu, Sc r) : nu_(std::move(nu)), r_(std::move(r)) {
    require(!nu_.empty(), Errc::parameter_out_of_range, "pyramid needs at least one level");
    require(nu_.front() >= 1, Errc::parameter_out_of_range, "sites start at 1");
    for (std::size_t i = 1; i < nu_.size(); ++i)
      require(nu_[i] > nu_[i - 1], Errc::parameter_out_of_range,
              "pyramid sites must be strictly increasing");
    require(r_.sign() > 0 && r_ < Sc(1, 2), Errc::parameter_out_of_range,
            "pyramid needs 0 < r < 1/2");
  }

  long levels() const { return static_cast<long>(nu_.size()); }
  const std::vector<long>& sites() const { return nu_; }
  const Sc& ratio() const { return r_; }

  // Band index of a site: 0 on [-nu_1, nu_1], i on nu_i < |t| <= nu_{i+1},
  // levels() beyond the last site.
  long band(long t) const {
    long a = t < 0 ? -t : t;
    auto it = std::lower_bound(nu_.begin(), nu_.end(), a);
    return static_cast<long>(it - nu_.begin());
  }

  Sc level(long i) const { return (Sc(1) - r_).pow(i); }
  Sc at(long t) const { return level(band(t)); }

  // The pyramid as an eventually constant function; its tail value is the
  // lowest level.
  EventuallyConstantLine<Sc> as_super() const { return chain_element(levels()); }

  // b_k: the pyramid truncated at level k, i.e. bands k and beyond merged.
  EventuallyConstantLine<Sc> chain_element(long k) const {
    require(k >= 0 && k <= levels(), Errc::parameter_out_of_range,
            "chain index must lie in [0, levels]");
    EventuallyConstantLine<Sc> b(level(k));
    if (k == 0) return b;
    long edge = nu_[static_cast<std::size_t>(k) - 1];
    for (long t = -edge; t <= edge; ++t) b.set(t, level(std::min(band(t), k)));
    return b;
  }

 private:
  std::vector<long> nu_;
  Sc r_;
};

template <class Sc>
struct FactorCertificate {
  long index = 0;     // which factor 1 - r + r e_{nu_i}
  long terms = 0;     // series terms used
  Sc tail_bound;      // certified truncation tail
  Sc discrepancy;     // distance between the series value and the exact inverse
  bool ok = false;
};

template <class Sc>
struct PyramidBuild {
  StepPyramid<Sc> pyramid;
  std::vector<EventuallyConstantLine<Sc>> b;  // b_1 .. b_I
  std::vector<FactorCertificate<Sc>> factor_certificates;
  bool product_identity_ok = false;
};

// Materializes the chain over the plateau net at the given sites and verifies
// the product identity b_k = prod_{i<=k} (1 - r + r e_{nu_i}) exactly, plus a
// series inverse certificate for every factor.
template <class Sc>
PyramidBuild<Sc> build_pyramid(const std::vector<long>& nu, const Sc& r, const Sc& tau) {
  StepPyramid<Sc> pyr(nu, r);
  auto net = make_identity_net<Sc>(NetKind::plateau, LineInstance{});
  const auto unit = EventuallyConstantLine<Sc>::unit();

  PyramidBuild<Sc> out{pyr, {}, {}, true};
  EventuallyConstantLine<Sc> prod = unit;
  for (long k = 1; k <= pyr.levels(); ++k) {
    auto e = EventuallyConstantLine<Sc>::embed(net.at(nu[static_cast<std::size_t>(k) - 1]));
    auto factor = unit.scaled(Sc(1) - r) + e.scaled(r);
    prod = prod * factor;
    auto bk = pyr.chain_element(k);
    if (!le_tol(sup_dist(prod, bk), Sc(0))) out.product_identity_ok = false;
    out.b.push_back(bk);

    auto exact_inv = factor.reciprocal();
    auto [series, trunc] = geometric_inverse(unit, e, r, net.bound, tau);
    FactorCertificate<Sc> cert;
    cert.index = k;
    cert.terms = trunc.terms;
    cert.tail_bound = trunc.tail_bound;
    cert.discrepancy = sup_dist(series, exact_inv);
    cert.ok = le_tol(cert.discrepancy, trunc.tail_bound + tau);
    out.factor_certificates.push_back(cert);
  }
  return out;
}

template <class Sc>
struct BandBound {
  long band = 0;
  Sc bound;        // (1-r)^{-band n} d(band)
  bool sites_ok = false;
};

template <class Sc>
struct ExplicitPower {
  C0Line<Sc> x;                          // x_n(f), pointwise a^{-n} f
  std::vector<BandBound<Sc>> bounds;     // per band, starting at band 1
  bool bounds_ok = false;
  bool vanishing_certified = false;      // the band bounds tend to zero
  std::string note;
};

// x_n(f) in closed form, with the membership gate and the vanishing band
// bounds that witness x_n(f) staying in the module.
template <class Sc>
ExplicitPower<Sc> explicit_x_n(const StepPyramid<Sc>& pyr, const C0Line<Sc>& f, long n,
                               const Envelope<Sc>& env, const DecaySchedule<Sc>& d) {
  require(n >= 1, Errc::parameter_out_of_range, "power index must be >= 1");
  require_membership(f, env);

  ExplicitPower<Sc> out;
  const Sc omr = Sc(1) - pyr.ratio();
  for (const auto& [t, v] : f.support()) out.x.set(t, v * omr.pow(-pyr.band(t) * n));

  out.bounds_ok = true;
  for (long i = 1; i <= pyr.levels(); ++i) {
    BandBound<Sc> bb;
    bb.band = i;
    bb.bound = omr.pow(-i * n) * d.at(i);
    bb.sites_ok = true;
    for (const auto& [t, v] : out.x.support())
      if (pyr.band(t) == i && !le_tol(abs_val(v), bb.bound)) bb.sites_ok = false;
    if (!bb.sites_ok) out.bounds_ok = false;
    out.bounds.push_back(bb);
  }

  if (d.step_ratio_vanishes()) {
    out.vanishing_certified = true;
  } else {
    // Constant step ratio: the bounds contract iff one step does.
    Sc rho = omr.pow(-n) * d.step_ratio(1);
    out.vanishing_certified = lt_tol(rho, Sc(1));
    if (!out.vanishing_certified)
      out.note = "band bounds do not contract at n = " + std::to_string(n);
  }
  return out;
}

}  // namespace powerfact
