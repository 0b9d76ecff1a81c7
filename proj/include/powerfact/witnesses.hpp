#pragma once

// Sharpness witnesses: concrete elements showing which hypotheses cannot be
// dropped. The pair cone of the unitization is not inverse closed (so the
// positivity refinements really live in the function instance), pointwise
// function cones are (the square identity), and the evaluators are unbounded
// as plain operators (so the max(||s||, delta) floor is not decorative).

#include <random>
#include <string>
#include <vector>

#include "powerfact/eventually_constant_line.hpp"
#include "powerfact/unitization.hpp"
#include "powerfact/worked_example.hpp"

namespace powerfact {

template <class Sc>
struct PairInverseSample {
  UnitizationPair<Sc> u;
  UnitizationPair<Sc> inverse;
  bool product_ok = false;      // u * inverse == 1
  bool inverse_in_cone = true;  // expected false whenever the part is nonzero
};

template <class Sc>
struct FunctionInverseSample {
  EventuallyConstantLine<Sc> b;
  EventuallyConstantLine<Sc> b_inv;
  bool square_identity_ok = false;  // b^{-1} = (b^{-1})^2 b
  bool inverse_nonneg = false;
};

template <class Sc>
struct ConeWitnesses {
  // The canonical escape: (1, spike at 0) is positive and invertible, its
  // inverse is (1, -1/2 spike) and leaves the pair cone.
  UnitizationPair<Sc> spike;
  UnitizationPair<Sc> spike_inverse;
  bool spike_inverse_expected = false;  // inverse equals (1, -1/2 delta_0)
  bool spike_escapes = false;           // inverse not in the pair cone

  std::vector<PairInverseSample<Sc>> pair_samples;
  bool pair_cone_escapes = false;  // every sampled inverse leaves the cone

  std::vector<FunctionInverseSample<Sc>> function_samples;
  bool function_cone_closed = false;  // every sampled inverse stays nonneg
};

template <class Sc>
ConeWitnesses<Sc> cone_witnesses(long samples = 20, unsigned seed = 2024) {
  require(samples >= 1, Errc::parameter_out_of_range, "need at least one sample");
  ConeWitnesses<Sc> out;

  {
    C0Line<Sc> d0 = C0Line<Sc>::spike(0, Sc(1));
    out.spike = UnitizationPair<Sc>(Sc(1), d0);
    out.spike_inverse = unitization_inverse(out.spike);
    UnitizationPair<Sc> expected(Sc(1), d0.scaled(Sc(-1, 2)));
    out.spike_inverse_expected = out.spike_inverse == expected;
    out.spike_escapes = !out.spike_inverse.in_cone();
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> site(-6, 6);
  std::uniform_int_distribution<long> num(1, 9);
  std::uniform_int_distribution<long> den(1, 5);
  std::uniform_int_distribution<long> width(1, 4);

  out.pair_cone_escapes = true;
  for (long s = 0; s < samples; ++s) {
    C0Line<Sc> a;
    long w = width(rng);
    for (long j = 0; j < w; ++j) a.set(site(rng), Sc(num(rng), den(rng)));
    if (a.empty()) a.set(0, Sc(1));
    UnitizationPair<Sc> u(Sc(num(rng), den(rng)), a);

    PairInverseSample<Sc> sample;
    sample.u = u;
    sample.inverse = unitization_inverse(u);
    sample.product_ok =
        le_tol((u * sample.inverse - UnitizationPair<Sc>::unit()).norm(), Sc(0));
    sample.inverse_in_cone = sample.inverse.in_cone();
    if (!sample.product_ok || sample.inverse_in_cone) out.pair_cone_escapes = false;
    out.pair_samples.push_back(std::move(sample));
  }

  out.function_cone_closed = true;
  for (long s = 0; s < samples; ++s) {
    EventuallyConstantLine<Sc> b(Sc(num(rng), den(rng)));
    long w = width(rng);
    for (long j = 0; j < w; ++j) b.set(site(rng), Sc(num(rng), den(rng)));

    FunctionInverseSample<Sc> sample;
    sample.b = b;
    sample.b_inv = b.reciprocal();
    auto sq = sample.b_inv * sample.b_inv;
    sample.square_identity_ok = le_tol(sup_dist(sq * b, sample.b_inv), Sc(0));
    sample.inverse_nonneg = sample.b_inv.nonneg();
    if (!sample.square_identity_ok || !sample.inverse_nonneg)
      out.function_cone_closed = false;
    out.function_samples.push_back(std::move(sample));
  }
  return out;
}

// One spike per band edge: x_1 rescales the spike at nu_i + 1 by (1-r)^{-i},
// so the image-to-input norm ratios climb without bound and x_n admits no
// uniform operator bound on the family.
template <class Sc>
struct UnboundedRow {
  long band = 0;
  long site = 0;
  Sc input_norm;
  Sc image_norm;
  Sc ratio;
};

template <class Sc>
struct UnboundedWitness {
  std::vector<UnboundedRow<Sc>> rows;
  bool ratios_increase = false;  // strictly, band over band
};

template <class Sc>
UnboundedWitness<Sc> unbounded_xn_witness(const WorkedExample<Sc>& ex) {
  require(ex.envelope.strictly_positive(), Errc::precondition_failed,
          "the witness needs spikes of positive height past every plateau");
  UnboundedWitness<Sc> out;
  out.ratios_increase = true;
  for (std::size_t i = 0; i + 1 < ex.nu.size(); ++i) {
    long t = ex.nu[i] + 1;
    auto f = C0Line<Sc>::spike(t, ex.envelope.at(t));
    auto x = explicit_x_n(ex.build.pyramid, f, 1, ex.envelope, ex.decay).x;

    UnboundedRow<Sc> row;
    row.band = static_cast<long>(i) + 1;
    row.site = t;
    row.input_norm = f.norm();
    row.image_norm = x.norm();
    row.ratio = row.image_norm / row.input_norm;
    if (!out.rows.empty() && !lt_tol(out.rows.back().ratio, row.ratio))
      out.ratios_increase = false;
    out.rows.push_back(std::move(row));
  }
  require(!out.rows.empty(), Errc::precondition_failed,
          "need at least two plateau levels for the ratio ladder");
  return out;
}

}  // namespace powerfact
