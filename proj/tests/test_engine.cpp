#include <catch_amalgamated.hpp>

#include "test_support.hpp"

using powerfact::build_j_schedule;
using powerfact::C0Line;
using powerfact::candidates;
using powerfact::certify;
using powerfact::ChainState;
using powerfact::ClauseMethod;
using powerfact::ClauseStatus;
using powerfact::Errc;
using powerfact::FactorizationConfig;
using powerfact::LineLeftRegular;
using powerfact::NetKind;
using powerfact::Path;
using powerfact::ProbeClaims;
using powerfact::ProbeSet;
using powerfact::Rational;
using powerfact::run_factorization;
using testsupport::thrown_code;

namespace {

const LineLeftRegular<Rational> kLine;

std::vector<C0Line<Rational>> standard_probe() {
  auto f0 = testsupport::envelope_window(powerfact::default_envelope<Rational>(), 12);
  return {f0, f0.scaled(Rational(1, 2)), C0Line<Rational>::spike(0, Rational(1))};
}

}  // namespace

TEST_CASE("growth schedules cross their targets minimally", "[engine]") {
  powerfact::AlphaLaw<Rational> linear;  // 1 + n
  const Rational pi(1), delta_bound(3);
  auto j = build_j_schedule(linear, pi, delta_bound, 3, 2, 1000000);
  CHECK(j == std::vector<long>{3, 9, 27});

  powerfact::AlphaLaw<Rational> quadratic{Rational(1), 2};  // 1 + n^2
  auto jq = build_j_schedule(quadratic, pi, delta_bound, 3, 2, 1000000);
  CHECK(jq == std::vector<long>{2, 3, 6});

  for (auto [law, sched] : {std::pair{linear, j}, std::pair{quadratic, jq}}) {
    for (std::size_t k = 0; k < sched.size(); ++k) {
      Rational target = Rational(1) + pi * delta_bound.pow(static_cast<long>(k) + 1);
      CHECK(powerfact::le_tol(target, law.at(sched[k])));
      long floor = k == 0 ? 2 : sched[k - 1] + 1;
      if (sched[k] > floor) CHECK(law.at(sched[k] - 1) < target);
    }
  }

  powerfact::AlphaLaw<Rational> sluggish{Rational(1, 1000), 1};
  CHECK(thrown_code([&] { build_j_schedule(sluggish, pi, delta_bound, 1, 2, 10); }) ==
        Errc::schedule_overflow);
}

TEST_CASE("the first chain candidate is the affine step itself", "[engine]") {
  FactorizationConfig<Rational> cfg;
  auto net = kLine.net(NetKind::plateau);
  ChainState<LineLeftRegular<Rational>> chain;
  auto cand = candidates(kLine, chain, net.at(3), cfg, net.bound);

  CHECK(cand.g == kLine.unit());
  CHECK(cand.b_next == cand.f_factor);
  auto expected = kLine.unit().scaled(Rational(3, 4)) + kLine.embed(net.at(3)).scaled(Rational(1, 4));
  CHECK(cand.b_next == expected);
  REQUIRE(cand.b_next_inv.has_value());
  CHECK(*cand.b_next_inv * cand.b_next == kLine.unit());

  CHECK(thrown_code([&] {
          candidates(kLine, chain, C0Line<Rational>::spike(0, Rational(3)), cfg, net.bound);
        }) == Errc::norm_bound_violated);
}

TEST_CASE("a default run obeys its own bookkeeping", "[engine]") {
  FactorizationConfig<Rational> cfg;
  auto net = kLine.net(NetKind::plateau);
  ProbeSet<LineLeftRegular<Rational>> probe(kLine, standard_probe(), {});
  auto result = run_factorization(kLine, net, probe, cfg);

  CHECK(result.j_schedule == std::vector<long>{3, 9, 27});
  CHECK(result.max_n() == 27);
  CHECK(result.epsilon_effective == Rational(1, 10));
  CHECK_FALSE(result.epsilon_tightened);
  CHECK(result.delta_bound == Rational(3));
  REQUIRE(result.pre_scan.threshold.has_value());

  REQUIRE(result.chain.size() == 3);
  long prev = 0;
  for (long k = 0; k < 3; ++k) {
    const auto& step = result.chain.steps[static_cast<std::size_t>(k)];
    CHECK(step.threshold == Rational(1, 10) / Rational(2).pow(k + 1));
    CHECK(powerfact::lt_tol(step.margin, step.threshold));
    CHECK(step.index > prev);
    prev = step.index;
    CHECK(powerfact::le_tol(kLine.super_norm(step.b_inv), Rational(3).pow(k + 1)));
    CHECK(step.b * step.b_inv == kLine.unit());
    if (step.neumann.performed) CHECK(step.neumann.ok);
    CHECK_FALSE(step.forced);
  }

  // Distinct plateau indices: the series cannot collapse, so the tail is
  // budgeted and the total still fits under the net bound exactly.
  CHECK_FALSE(result.a_closed_form);
  CHECK(result.a_norm == Rational(37, 64));
  CHECK(result.a_tail_bound == Rational(27, 64));

  // Telescoping: through j_1 the deep stage stays within the summed margins.
  Rational budget(0);
  for (const auto& step : result.chain.steps) budget += step.margin;
  for (const auto& s : probe.elements())
    for (long n = 1; n <= result.j_schedule.front(); ++n)
      CHECK(powerfact::le_tol(kLine.module_norm(result.x(kLine, n, s) - s), budget));

  CHECK(result.x_error_bound(1) == Rational(1, 80));
  auto s0 = probe.elements().front();
  CHECK(thrown_code([&] { result.x(kLine, 0, s0); }) == Errc::parameter_out_of_range);
  CHECK(thrown_code([&] { result.x(kLine, 28, s0); }) == Errc::parameter_out_of_range);

  // Runs are replayable: same inputs, same accepted chain, same element.
  auto again = run_factorization(kLine, net, probe, cfg);
  REQUIRE(again.chain.size() == result.chain.size());
  for (long k = 0; k < result.chain.size(); ++k) {
    CHECK(again.chain.steps[k].index == result.chain.steps[k].index);
    CHECK(again.chain.steps[k].margin == result.chain.steps[k].margin);
  }
  CHECK(again.a == result.a);

  // The unclaimed certificate: every applicable clause holds, the rest are
  // marked rather than silently passed.
  auto cert = certify(kLine, net, probe, result);
  REQUIRE(cert.records.size() == 13);
  for (std::size_t i = 0; i < cert.records.size(); ++i)
    CHECK(cert.records[i].id == powerfact::clause_ids()[i]);
  CHECK(cert.failures() == 0);
  for (const char* id : {"1", "2", "3", "4a", "4b", "5", "6", "7b", "7c"})
    CHECK(cert.record(id).status == ClauseStatus::pass);
  for (const char* id : {"7a", "8", "9", "10"})
    CHECK(cert.record(id).status == ClauseStatus::not_applicable);
  CHECK(cert.record("2").margin == Rational(0));
  CHECK(cert.record("7b").method == ClauseMethod::exact);
  CHECK(cert.record("7b").margin == Rational(0));
  CHECK(cert.record("3").method == ClauseMethod::sampled);
  CHECK(cert.environment.mode == "exact");
  CHECK(cert.environment.instance == "line-left-regular");
}

TEST_CASE("claimed probes activate every clause", "[engine]") {
  FactorizationConfig<Rational> cfg;
  auto net = kLine.net(NetKind::plateau);
  ProbeClaims<Rational> claims;
  claims.bound = Rational(2);
  claims.cone = true;
  claims.envelope = powerfact::default_envelope<Rational>();
  ProbeSet<LineLeftRegular<Rational>> probe(kLine, standard_probe(), claims);
  auto result = run_factorization(kLine, net, probe, cfg);
  auto cert = certify(kLine, net, probe, result);

  CHECK(cert.all_pass());
  for (const auto& rec : cert.records) CHECK(rec.status == ClauseStatus::pass);
  CHECK(cert.record("7a").method == ClauseMethod::closed_form);
  CHECK(cert.record("8").method == ClauseMethod::exact);
  CHECK(cert.record("10").note == "the net bound is 1");
}

TEST_CASE("forced chains reproduce the explicit pyramid", "[engine]") {
  FactorizationConfig<Rational> cfg;
  cfg.forced_indices = std::vector<long>{3, 9, 19};
  auto net = kLine.net(NetKind::plateau);
  ProbeSet<LineLeftRegular<Rational>> probe(kLine, standard_probe(), {});
  auto result = run_factorization(kLine, net, probe, cfg);

  powerfact::StepPyramid<Rational> pyr({3, 9, 19}, Rational(1, 4));
  REQUIRE(result.chain.size() == 3);
  for (long k = 0; k < 3; ++k) {
    const auto& step = result.chain.steps[static_cast<std::size_t>(k)];
    CHECK(step.forced);
    CHECK(step.index == pyr.sites()[static_cast<std::size_t>(k)]);
    CHECK(step.b == pyr.chain_element(k + 1));
  }

  FactorizationConfig<Rational> bad = cfg;
  bad.forced_indices = std::vector<long>{3, 3, 9};
  CHECK(thrown_code([&] { run_factorization(kLine, net, probe, bad); }) ==
        Errc::parameter_out_of_range);
  bad.forced_indices = std::vector<long>{3, 9};
  CHECK(thrown_code([&] { run_factorization(kLine, net, probe, bad); }) ==
        Errc::parameter_out_of_range);
}

TEST_CASE("path declarations are enforced", "[engine]") {
  FactorizationConfig<Rational> cfg;
  auto net = kLine.net(NetKind::plateau);
  ProbeSet<LineLeftRegular<Rational>> bare(kLine, standard_probe(), {});

  cfg.path = Path::bounded_probe;
  CHECK(thrown_code([&] { run_factorization(kLine, net, bare, cfg); }) == Errc::illegal_path);

  cfg.path = Path::commutative;
  auto stubborn = net;
  stubborn.commutative = false;
  CHECK(thrown_code([&] { run_factorization(kLine, stubborn, bare, cfg); }) ==
        Errc::illegal_path);
}

TEST_CASE("an exhausted pre-check names its stage", "[engine]") {
  FactorizationConfig<Rational> cfg;
  cfg.index_cap = 1;
  auto net = kLine.net(NetKind::plateau);
  ProbeSet<LineLeftRegular<Rational>> probe(kLine, standard_probe(), {});
  try {
    run_factorization(kLine, net, probe, cfg);
    FAIL("expected the scan to exhaust");
  } catch (const powerfact::ExhaustedScan& ex) {
    CHECK(ex.stage == "uniformity pre-check");
    CHECK(ex.cap == 1);
    CHECK(ex.best_index == 1);
    CHECK(ex.best_margin == 2.0);
  }
}

TEST_CASE("non-commuting nets get the scanned image residual", "[engine]") {
  auto plateau = kLine.net(NetKind::plateau);
  auto net = plateau;
  net.commutative = false;

  FactorizationConfig<Rational> cfg;
  cfg.path = Path::bounded_probe;
  ProbeClaims<Rational> claims;
  claims.bound = Rational(2);
  ProbeSet<LineLeftRegular<Rational>> probe(kLine, standard_probe(), claims);

  auto result = run_factorization(kLine, net, probe, cfg);
  auto cert = certify(kLine, net, probe, result);
  CHECK(cert.record("7c").method == ClauseMethod::sampled);
  CHECK(cert.record("7c").status == ClauseStatus::pass);
  CHECK(cert.record("7a").status == ClauseStatus::pass);
  CHECK(cert.failures() == 0);
}

TEST_CASE("constant-identity nets collapse the whole construction", "[engine]") {
  powerfact::MatrixLeftRegular<Rational> rep;
  rep.dim = 3;
  auto net = rep.net(NetKind::constant_identity);

  powerfact::MatrixAlgebra<Rational> s(3);
  s.at(0, 0) = Rational(1);
  s.at(0, 1) = Rational(2);
  s.at(1, 1) = Rational(1);
  s.at(1, 2) = Rational(1);
  s.at(2, 0) = Rational(3);
  s.at(2, 2) = Rational(1);

  ProbeClaims<Rational> claims;
  claims.bound = Rational(4);
  claims.cone = true;
  ProbeSet<powerfact::MatrixLeftRegular<Rational>> probe(
      rep, {powerfact::MatrixAlgebra<Rational>::identity(3), s}, claims);

  FactorizationConfig<Rational> cfg;
  auto result = run_factorization(rep, net, probe, cfg);

  auto id = powerfact::MatrixAlgebra<Rational>::identity(3);
  CHECK(result.a == id);
  CHECK(result.a_closed_form);
  CHECK(result.a_norm == Rational(1));
  CHECK(result.a_tail_bound == Rational(0));
  CHECK(result.chain.current_b(rep) == id);
  CHECK(result.x(rep, 5, s) == s);

  auto cert = certify(rep, net, probe, result);
  CHECK(cert.all_pass());
  CHECK(cert.record("1").method == ClauseMethod::exact);
  CHECK(cert.record("2").method == ClauseMethod::exact);
  CHECK(cert.environment.instance == "matrix-left-regular");
}

TEST_CASE("lifted families ride the base factorization unchanged", "[engine]") {
  auto env = powerfact::default_envelope<Rational>();
  auto g1 = testsupport::envelope_window(env, 12);
  auto g2 = g1.scaled(Rational(1, 2));
  auto g3 = C0Line<Rational>::spike(0, Rational(1));

  using LV = powerfact::LiftedValue<C0Line<Rational>>;
  auto fam = LV::family({g1, g2, g3});
  auto seq = LV::sequence({g1, g1.scaled(Rational(1, 2)), g1.scaled(Rational(1, 4))},
                          C0Line<Rational>{});

  auto lrep = powerfact::lift(kLine);
  CHECK(powerfact::rep_tag(lrep) == "lifted:line-left-regular");
  CHECK(lrep.module_norm(fam) == Rational(2));

  FactorizationConfig<Rational> cfg;
  auto net = kLine.net(NetKind::plateau);
  auto lnet = lrep.net(NetKind::plateau);

  // The base probe is the union of every lifted term, so both scans see the
  // same maxima and must accept the same chain.
  std::vector<C0Line<Rational>> union_probe{g1, g2, g3, g1.scaled(Rational(1, 4)),
                                            C0Line<Rational>{}};
  ProbeSet<LineLeftRegular<Rational>> base_probe(kLine, union_probe, {});
  ProbeSet<powerfact::LiftedRep<LineLeftRegular<Rational>>> lifted_probe(lrep, {fam, seq}, {});

  auto base_run = run_factorization(kLine, net, base_probe, cfg);
  auto lifted_run = run_factorization(lrep, lnet, lifted_probe, cfg);

  REQUIRE(lifted_run.chain.size() == base_run.chain.size());
  for (long k = 0; k < base_run.chain.size(); ++k)
    CHECK(lifted_run.chain.steps[k].index == base_run.chain.steps[k].index);
  CHECK(lifted_run.a == base_run.a);

  for (long n : {1L, 4L, base_run.max_n()}) {
    auto xfam = lifted_run.x(lrep, n, fam);
    REQUIRE(xfam.terms().size() == 3);
    CHECK(xfam.terms()[0] == base_run.x(kLine, n, g1));
    CHECK(xfam.terms()[1] == base_run.x(kLine, n, g2));
    CHECK(xfam.terms()[2] == base_run.x(kLine, n, g3));
    CHECK_FALSE(xfam.is_sequence());

    auto xseq = lifted_run.x(lrep, n, seq);
    CHECK(powerfact::has_zero_limit(lrep, xseq));
  }
  CHECK_FALSE(powerfact::has_zero_limit(lrep, fam));

  CHECK(thrown_code([&] { LV::family({g1}) + fam; }) == Errc::instance_mismatch);
  CHECK(thrown_code([&] { fam + seq; }) == Errc::instance_mismatch);
  CHECK(thrown_code([&] { LV::family({}); }) == Errc::parameter_out_of_range);
}
