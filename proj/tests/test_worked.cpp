#include <catch_amalgamated.hpp>

#include "test_support.hpp"

using powerfact::ApproxReal;
using powerfact::C0Line;
using powerfact::ClauseMethod;
using powerfact::ClauseStatus;
using powerfact::DecaySchedule;
using powerfact::Errc;
using powerfact::explicit_x_n;
using powerfact::k_constant;
using powerfact::Rational;
using powerfact::StepPyramid;
using testsupport::thrown_code;

namespace {

const Rational kTau(1, 1000000000L);

powerfact::WorkedExample<Rational> default_example() {
  return powerfact::run_worked_example(powerfact::default_envelope<Rational>(),
                                       DecaySchedule<Rational>::gaussian_rational(Rational(4)),
                                       Rational(1, 4), Rational(1, 10), Rational(1), 2,
                                       powerfact::AlphaLaw<Rational>{}, 6, kTau);
}

}  // namespace

TEST_CASE("the K constant for the default schedule", "[worked]") {
  auto K = k_constant(DecaySchedule<Rational>::gaussian_rational(Rational(4)), Rational(1, 4), 2);
  CHECK(K.value == Rational(7, 36));
  CHECK(K.argmax_n == 2);
  CHECK(K.argmax_i == 1);
}

TEST_CASE("the K constant for geometric decay, against brute force", "[worked]") {
  auto d = DecaySchedule<Rational>::geometric(Rational(1, 2));
  auto K = k_constant(d, Rational(1, 4), 2);
  CHECK(K.value == Rational(3367, 5832));
  CHECK(K.argmax_n == 2);
  CHECK(K.argmax_i == 3);

  Rational best(0);
  for (long n = 1; n <= 2; ++n)
    for (long i = 1; i <= 40; ++i)
      best = powerfact::max_val(best,
                                (Rational(3, 4).pow(-i * n) - Rational(1)) * d.at(i));
  CHECK(K.value == best);

  // (1-r)^{-3} = 64/27 beats the ratio 1/2, so n0 = 3 cannot be certified.
  CHECK(thrown_code([&] { k_constant(d, Rational(1, 4), 3); }) == Errc::decay_too_slow);
}

TEST_CASE("closed-form site thresholds for the default run", "[worked]") {
  auto sched = powerfact::build_thresholds(
      powerfact::default_envelope<Rational>(),
      DecaySchedule<Rational>::gaussian_rational(Rational(4)), Rational(1, 4), Rational(1, 10),
      Rational(1), 2, powerfact::AlphaLaw<Rational>{}, 6);
  CHECK(sched.N1 == std::vector<long>{3, 8, 18, 32, 50, 72});
  CHECK(sched.N2 == std::vector<long>{3, 9, 19, 33, 51, 73});
  CHECK(sched.N3 == std::vector<long>{1, 2, 3, 4, 5, 6});
  CHECK(sched.Nprime == std::vector<long>{1, 1, 2, 3, 4, 5});
  CHECK(sched.K.value == Rational(7, 36));

  auto nu = powerfact::choose_nu(sched, powerfact::default_envelope<Rational>(), Rational(1));
  CHECK(nu == sched.N2);
}

TEST_CASE("the e^{-i^2} schedule shifts the early thresholds", "[worked]") {
  auto sched = powerfact::build_thresholds(
      powerfact::default_envelope<ApproxReal>(), DecaySchedule<ApproxReal>::gaussian_exp(),
      ApproxReal(1, 4), ApproxReal(1, 10), ApproxReal(1), 2, powerfact::AlphaLaw<ApproxReal>{},
      6);
  CHECK(sched.N1 == std::vector<long>{3, 6, 13, 24, 30, 31});
  CHECK(sched.N2 == std::vector<long>{3, 8, 15, 25, 30, 31});
  CHECK(thrown_code([] { DecaySchedule<Rational>::gaussian_exp(); }) ==
        Errc::parameter_out_of_range);
}

TEST_CASE("step pyramid bands, levels, and guards", "[worked]") {
  StepPyramid<Rational> pyr({3, 6}, Rational(1, 4));
  CHECK(pyr.levels() == 2);
  CHECK(pyr.band(0) == 0);
  CHECK(pyr.band(-3) == 0);
  CHECK(pyr.band(4) == 1);
  CHECK(pyr.band(6) == 1);
  CHECK(pyr.band(-7) == 2);
  CHECK(pyr.at(5) == Rational(3, 4));
  CHECK(pyr.level(2) == Rational(9, 16));
  CHECK(pyr.as_super().tail() == Rational(9, 16));
  CHECK(pyr.chain_element(0) == powerfact::EventuallyConstantLine<Rational>::unit());

  CHECK(thrown_code([] { StepPyramid<Rational>({}, Rational(1, 4)); }) ==
        Errc::parameter_out_of_range);
  CHECK(thrown_code([] { StepPyramid<Rational>({0, 2}, Rational(1, 4)); }) ==
        Errc::parameter_out_of_range);
  CHECK(thrown_code([] { StepPyramid<Rational>({3, 3}, Rational(1, 4)); }) ==
        Errc::parameter_out_of_range);
  CHECK(thrown_code([] { StepPyramid<Rational>({3, 6}, Rational(1, 2)); }) ==
        Errc::parameter_out_of_range);
}

TEST_CASE("explicit powers rescale band by band", "[worked]") {
  auto env = powerfact::default_envelope<Rational>();
  auto d = DecaySchedule<Rational>::gaussian_rational(Rational(4));
  StepPyramid<Rational> pyr({3, 6}, Rational(1, 4));
  // Radius 6 keeps the support inside the two declared bands; one site
  // further out the envelope (2^-7) would already exceed the band-2 decay
  // budget 4^-4 and the band bounds would honestly fail.
  auto f = testsupport::envelope_window(env, 6);

  auto xp = explicit_x_n(pyr, f, 2, env, d);
  CHECK(xp.x.at(5) == Rational(1, 18));
  CHECK(xp.x.at(0) == Rational(2));  // band 0 sites are untouched
  CHECK(xp.bounds_ok);
  CHECK(xp.vanishing_certified);

  CHECK(thrown_code([&] {
          explicit_x_n(pyr, C0Line<Rational>::spike(5, Rational(1)), 1, env, d);
        }) == Errc::not_in_s);
  CHECK(thrown_code([&] { explicit_x_n(pyr, f, 0, env, d); }) == Errc::parameter_out_of_range);
}

TEST_CASE("geometric decay cannot certify vanishing at high powers", "[worked]") {
  auto env = powerfact::default_envelope<Rational>();
  auto d = DecaySchedule<Rational>::geometric(Rational(1, 2));
  StepPyramid<Rational> pyr({3, 6}, Rational(1, 4));
  auto f = C0Line<Rational>::spike(4, env.at(4));

  CHECK(explicit_x_n(pyr, f, 1, env, d).vanishing_certified);
  auto xp = explicit_x_n(pyr, f, 3, env, d);
  CHECK_FALSE(xp.vanishing_certified);
  CHECK(xp.note == "band bounds do not contract at n = 3");
}

TEST_CASE("pyramid build verifies the product identity", "[worked]") {
  std::vector<long> nu{3, 9, 19, 33, 51, 73};
  auto build = powerfact::build_pyramid(nu, Rational(1, 4), kTau);
  CHECK(build.product_identity_ok);
  REQUIRE(build.b.size() == 6);
  REQUIRE(build.factor_certificates.size() == 6);
  for (const auto& fc : build.factor_certificates) CHECK(fc.ok);

  // Affine recomputation from scratch.
  auto net = powerfact::make_identity_net<Rational>(powerfact::NetKind::plateau,
                                                    powerfact::LineInstance{});
  const auto unit = powerfact::EventuallyConstantLine<Rational>::unit();
  auto acc = unit.scaled(Rational(0));
  Rational coef(1, 4);
  for (std::size_t k = 0; k < nu.size(); ++k) {
    acc = acc + powerfact::EventuallyConstantLine<Rational>::embed(net.at(nu[k])).scaled(coef);
    coef *= Rational(3, 4);
    auto affine = unit.scaled(Rational(3, 4).pow(static_cast<long>(k) + 1)) + acc;
    CHECK(affine == build.b[k]);
  }
}

TEST_CASE("three expressions for x_n agree exactly", "[worked]") {
  auto ex = default_example();
  const auto& pyr = ex.build.pyramid;
  auto net = powerfact::make_identity_net<Rational>(powerfact::NetKind::plateau,
                                                    powerfact::LineInstance{});
  const auto unit = powerfact::EventuallyConstantLine<Rational>::unit();

  auto prod_inv = unit;
  for (long site : ex.nu) {
    auto factor = unit.scaled(Rational(3, 4)) +
                  powerfact::EventuallyConstantLine<Rational>::embed(net.at(site))
                      .scaled(Rational(1, 4));
    prod_inv = prod_inv * factor.reciprocal();
  }

  for (const auto& f : powerfact::default_probe(ex)) {
    for (long n = 1; n <= 3; ++n) {
      auto closed = explicit_x_n(pyr, f, n, ex.envelope, ex.decay).x;
      CHECK(closed == ex.a_super.pow(-n) * f);
      CHECK(closed == prod_inv.pow(n) * f);
    }
  }
}

TEST_CASE("the default worked example run", "[worked]") {
  auto ex = default_example();
  CHECK(ex.epsilon_effective == Rational(1, 10));
  CHECK(ex.nu == std::vector<long>{3, 9, 19, 33, 51, 73});
  CHECK(ex.a_super.norm() == Rational(1));
  CHECK(ex.a_super.tail() == Rational(729, 4096));

  REQUIRE(ex.modulus.size() == 8);
  const std::vector<std::tuple<long, Rational, long, Rational>> expected_modulus{
      {1, Rational(1), 1, Rational(1)},
      {1, Rational(1, 2), 2, Rational(3, 8)},
      {1, Rational(1, 4), 2, Rational(3, 16)},
      {1, Rational(1, 8), 2, Rational(3, 32)},
      {2, Rational(1), 1, Rational(1)},
      {2, Rational(1, 2), 2, Rational(9, 32)},
      {2, Rational(1, 4), 2, Rational(9, 64)},
      {2, Rational(1, 8), 2, Rational(9, 128)},
  };
  for (std::size_t i = 0; i < expected_modulus.size(); ++i) {
    const auto& [n, eta, band, zeta] = expected_modulus[i];
    CHECK(ex.modulus[i].n == n);
    CHECK(ex.modulus[i].eta == eta);
    CHECK(ex.modulus[i].band == band);
    CHECK(ex.modulus[i].zeta == zeta);
  }

  REQUIRE(ex.truncation.size() == 8);
  const std::vector<std::tuple<long, Rational, long>> expected_truncation{
      {1, Rational(1), 3},      {1, Rational(1, 2), 4}, {1, Rational(1, 4), 5},
      {1, Rational(1, 8), 6},   {2, Rational(1), 5},    {2, Rational(1, 2), 6},
      {2, Rational(1, 4), 7},   {2, Rational(1, 8), 8},
  };
  for (std::size_t i = 0; i < expected_truncation.size(); ++i) {
    const auto& [n, eta, site] = expected_truncation[i];
    CHECK(ex.truncation[i].n == n);
    CHECK(ex.truncation[i].eta == eta);
    CHECK(ex.truncation[i].site == site);
  }
}

TEST_CASE("a loose epsilon is tightened against delta", "[worked]") {
  auto ex = powerfact::run_worked_example(
      powerfact::default_envelope<Rational>(),
      DecaySchedule<Rational>::gaussian_rational(Rational(4)), Rational(1, 4), Rational(1, 2),
      Rational(1, 5), 2, powerfact::AlphaLaw<Rational>{}, 6, kTau);
  CHECK(ex.epsilon == Rational(1, 2));
  CHECK(ex.epsilon_effective == Rational(1, 5));
}

TEST_CASE("geometric decay moves the modulus band", "[worked]") {
  auto ex = powerfact::run_worked_example(
      powerfact::default_envelope<Rational>(), DecaySchedule<Rational>::geometric(Rational(1, 2)),
      Rational(1, 4), Rational(1, 10), Rational(1), 1, powerfact::AlphaLaw<Rational>{}, 6, kTau);
  REQUIRE(!ex.modulus.empty());
  CHECK(ex.modulus[0].n == 1);
  CHECK(ex.modulus[0].eta == Rational(1));
  CHECK(ex.modulus[0].band == 2);
  CHECK(ex.modulus[0].zeta == Rational(3, 4));
}

TEST_CASE("the worked certificate passes every clause with pinned margins", "[worked]") {
  auto ex = default_example();
  auto probe = powerfact::default_probe(ex);
  CHECK(probe.size() == 10);
  auto cert = certify(ex, probe, 15);

  REQUIRE(cert.records.size() == 13);
  for (std::size_t i = 0; i < cert.records.size(); ++i)
    CHECK(cert.records[i].id == powerfact::clause_ids()[i]);
  CHECK(cert.all_pass());
  CHECK(cert.environment.instance == "line-worked");

  const std::vector<std::pair<const char*, Rational>> margins{
      {"1", Rational(0)},
      {"2", Rational(0)},
      {"3", Rational(0)},
      {"4a", Rational(37, 720)},
      {"4b", Rational(1)},
      {"5", Rational(0)},
      {"6", Rational(0)},
      {"7a", Rational(2)},
      {"7b", Rational(11, 96)},
      {"7c", Rational::parse("1/3361919107433565782016")},
      {"8", Rational(0)},
      {"9", Rational(0)},
      {"10", Rational(0)},
  };
  for (const auto& [id, margin] : margins) CHECK(cert.record(id).margin == margin);

  const std::vector<std::pair<const char*, ClauseMethod>> methods{
      {"1", ClauseMethod::exact},        {"2", ClauseMethod::exact},
      {"3", ClauseMethod::closed_form},  {"4a", ClauseMethod::closed_form},
      {"4b", ClauseMethod::closed_form}, {"5", ClauseMethod::exact},
      {"6", ClauseMethod::closed_form},  {"7a", ClauseMethod::closed_form},
      {"7b", ClauseMethod::closed_form}, {"7c", ClauseMethod::closed_form},
      {"8", ClauseMethod::exact},        {"9", ClauseMethod::exact},
      {"10", ClauseMethod::exact},
  };
  for (const auto& [id, method] : methods) CHECK(cert.record(id).method == method);

  CHECK(thrown_code([&] { certify(ex, probe, 1); }) == Errc::parameter_out_of_range);
  CHECK(thrown_code([&] {
          certify(ex, std::vector<C0Line<Rational>>{C0Line<Rational>::spike(5, Rational(1))});
        }) == Errc::not_in_s);
}

TEST_CASE("a corrupted factor breaks exactly the recovery clause", "[worked]") {
  auto ex = default_example();
  ex.a_super.set(4, Rational(7, 8));  // honest value is 3/4
  auto cert = certify(ex, powerfact::default_probe(ex), 15);
  CHECK(cert.failures() == 1);
  CHECK(cert.record("1").status == ClauseStatus::fail);
  CHECK(powerfact::lt_tol(cert.record("1").margin, Rational(0)));
  CHECK(cert.record("2").status == ClauseStatus::pass);
  CHECK(cert.record("8").status == ClauseStatus::pass);
  CHECK(cert.record("10").status == ClauseStatus::pass);
}

TEST_CASE("tightening tau does not move exact-mode verdicts", "[worked]") {
  auto base = certify(default_example(), powerfact::default_probe(default_example()), 15);
  auto tight_ex = powerfact::run_worked_example(
      powerfact::default_envelope<Rational>(),
      DecaySchedule<Rational>::gaussian_rational(Rational(4)), Rational(1, 4), Rational(1, 10),
      Rational(1), 2, powerfact::AlphaLaw<Rational>{}, 6, Rational(1, 10000000000L));
  auto tight = certify(tight_ex, powerfact::default_probe(tight_ex), 15);
  REQUIRE(tight.records.size() == base.records.size());
  for (std::size_t i = 0; i < base.records.size(); ++i) {
    CHECK(tight.records[i].status == base.records[i].status);
    CHECK(tight.records[i].margin == base.records[i].margin);
  }
}

TEST_CASE("cone witnesses separate the pair cone from the function cone", "[worked]") {
  auto w = powerfact::cone_witnesses<Rational>();
  CHECK(w.spike_inverse_expected);
  CHECK(w.spike_escapes);
  CHECK(w.spike_inverse.part() == C0Line<Rational>::spike(0, Rational(-1, 2)));
  CHECK(w.pair_samples.size() == 20);
  CHECK(w.pair_cone_escapes);
  CHECK(w.function_samples.size() == 20);
  CHECK(w.function_cone_closed);
  CHECK(thrown_code([] { powerfact::cone_witnesses<Rational>(0); }) ==
        Errc::parameter_out_of_range);
}

TEST_CASE("band-edge spikes witness unbounded evaluators", "[worked]") {
  auto ex = default_example();
  auto w = powerfact::unbounded_xn_witness(ex);
  REQUIRE(w.rows.size() == 5);
  CHECK(w.ratios_increase);
  const std::vector<long> sites{4, 10, 20, 34, 52};
  for (std::size_t i = 0; i < w.rows.size(); ++i) {
    CHECK(w.rows[i].band == static_cast<long>(i) + 1);
    CHECK(w.rows[i].site == sites[i]);
    CHECK(w.rows[i].ratio == Rational(4, 3).pow(static_cast<long>(i) + 1));
    CHECK(w.rows[i].input_norm == ex.envelope.at(sites[i]));
  }
}
