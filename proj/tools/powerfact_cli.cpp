// Batch driver: load a config, run one of the pipelines, and write the JSON
// and CSV artifacts. Exit 0 when every certificate clause passes, 2 when a
// run completes with failing clauses or an exhausted scan, 1 on bad configs
// or runtime errors.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <powerfact/powerfact.hpp>

namespace pf = powerfact;
namespace fs = std::filesystem;

namespace {

struct Emitted {
  std::string name;
  std::string bytes;
};

struct RunOutcome {
  int exit_code = 0;
  std::vector<Emitted> files;
};

struct Options {
  std::string config_path;
  std::string mode;
  std::string out_dir = ".";
  std::optional<std::string> r, epsilon, delta;
  std::optional<long> n0, steps, cap;
  bool default_envelope = false;
  std::string artifact;  // verify target
};

void write_all(const std::string& out_dir, const std::vector<Emitted>& files) {
  fs::create_directories(out_dir);
  for (const auto& f : files) {
    fs::path p = fs::path(out_dir) / f.name;
    std::ofstream os(p, std::ios::binary);
    if (!os.good()) throw std::runtime_error("cannot open " + p.string() + " for writing");
    os << f.bytes;
    if (!os.good()) throw std::runtime_error("short write to " + p.string());
  }
}

pf::Json load_json(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is.good()) throw std::runtime_error("cannot read " + path);
  pf::Json j;
  try {
    is >> j;
  } catch (const std::exception& e) {
    pf::fail(pf::Errc::bad_config, std::string("malformed JSON in ") + path + ": " + e.what());
  }
  return j;
}

template <class Sc>
pf::Json environment_json(const pf::EnvironmentDigest<Sc>& env) {
  return pf::Json{{"mode", env.mode},
                  {"instance", env.instance},
                  {"version", env.version},
                  {"config_digest", env.config_digest},
                  {"probe_digest", env.probe_digest},
                  {"tolerance", env.tolerance.encode()}};
}

// ---- factorize ----

template <class Rep, class Sc>
RunOutcome run_engine(const Rep& rep, const std::vector<typename Rep::ModuleElem>& elems,
                      const pf::Experiment<Sc>& ex, const std::string& kind,
                      const std::string& suffix, const pf::Json& probe_echo) {
  const pf::Json canonical = pf::canonical_experiment_json(ex);
  const std::string config_digest = pf::fnv1a_digest(pf::dump_artifact(canonical));
  const std::string probe_digest = pf::fnv1a_digest(pf::dump_artifact(probe_echo));

  pf::ProbeClaims<Sc> claims;
  claims.bound = ex.probe_bound;
  claims.cone = ex.probe_cone;
  if (ex.probe_envelope) claims.envelope = ex.envelope;

  auto net = rep.net(ex.net);
  pf::ProbeSet<Rep> probe(rep, elems, claims);

  RunOutcome out;
  try {
    auto result = pf::run_factorization(rep, net, probe, ex.fac);
    auto cert = pf::certify(rep, net, probe, result);
    cert.environment.config_digest = config_digest;
    cert.environment.probe_digest = probe_digest;

    pf::Json artifact{{"schema", 1},
                      {"kind", kind},
                      {"experiment", canonical},
                      {"probe", probe_echo},
                      {"output", pf::result_json(rep, result)},
                      {"certificate", pf::certificate_json(cert)}};
    if constexpr (requires(const typename Rep::ModuleElem& m) { pf::has_zero_limit(rep, m); }) {
      bool any_seq = false, preserved = true;
      for (const auto& s : elems) {
        if (!s.is_sequence() || !rep.base.module_norm(s.limit()).is_zero()) continue;
        any_seq = true;
        for (long n = 1; n <= result.max_n(); ++n)
          if (!pf::has_zero_limit(rep, result.x(rep, n, s))) preserved = false;
      }
      artifact["output"]["zero_limit"] =
          pf::Json{{"checked", any_seq}, {"preserved", preserved}};
      if (any_seq && !preserved) out.exit_code = 2;
    }

    out.files.push_back({"result" + suffix + ".json", pf::dump_artifact(artifact)});
    out.files.push_back(
        {"certificate" + suffix + ".json", pf::dump_artifact(pf::certificate_json(cert))});
    out.files.push_back({"certificate" + suffix + ".csv", pf::certificate_csv(cert)});
    if (!cert.all_pass()) out.exit_code = 2;
  } catch (const pf::ExhaustedScan& e) {
    pf::EnvironmentDigest<Sc> env;
    env.mode = Sc::exact ? "exact" : "approx";
    env.instance = pf::rep_tag(rep);
    env.config_digest = config_digest;
    env.probe_digest = probe_digest;
    env.tolerance = ex.fac.tau;
    pf::Json cert{{"schema", 1},
                  {"environment", environment_json(env)},
                  {"exhausted", pf::Json{{"stage", e.stage},
                                         {"cap", e.cap},
                                         {"best_index", e.best_index},
                                         {"best_margin", e.best_margin},
                                         {"threshold", e.threshold}}},
                  {"records", pf::Json::array()}};
    std::cerr << "scan exhausted: " << e.what() << "\n";
    out.files.push_back({"certificate" + suffix + ".json", pf::dump_artifact(cert)});
    out.exit_code = 2;
  }
  return out;
}

template <class Sc>
RunOutcome run_factorize(const pf::Experiment<Sc>& ex) {
  if (ex.instance == "line") {
    pf::require(!ex.line_probe.empty(), pf::Errc::bad_config,
                "factorize needs probe.elements");
    return run_engine(pf::LineLeftRegular<Sc>{}, ex.line_probe, ex, "engine", "",
                      pf::probe_json(ex));
  }
  pf::require(!ex.matrix_probe.empty(), pf::Errc::bad_config,
              "factorize needs probe.elements");
  pf::MatrixLeftRegular<Sc> rep;
  rep.dim = static_cast<std::size_t>(ex.dim);
  return run_engine(rep, ex.matrix_probe, ex, "engine", "", pf::probe_json(ex));
}

// ---- worked example ----

template <class Sc>
RunOutcome run_worked(const pf::Experiment<Sc>& ex) {
  auto we = pf::run_worked_example(ex.envelope, ex.decay, ex.fac.r, ex.fac.epsilon,
                                   ex.fac.delta, ex.fac.n0, ex.fac.alpha, ex.levels,
                                   ex.fac.tau);
  std::vector<pf::C0Line<Sc>> probe =
      ex.line_probe.empty() ? pf::default_probe(we) : ex.line_probe;

  pf::Json probe_echo = pf::Json::array();
  for (const auto& f : probe) probe_echo.push_back(pf::value_json(f));

  auto cert = pf::certify(we, probe, ex.n_limit);
  const pf::Json canonical = pf::canonical_experiment_json(ex);
  cert.environment.config_digest = pf::fnv1a_digest(pf::dump_artifact(canonical));
  cert.environment.probe_digest = pf::fnv1a_digest(pf::dump_artifact(probe_echo));

  pf::Json artifact{{"schema", 1},
                    {"kind", "worked-example"},
                    {"experiment", canonical},
                    {"probe", probe_echo},
                    {"output", pf::worked_json(we)},
                    {"certificate", pf::certificate_json(cert)}};
  RunOutcome out;
  out.files.push_back({"worked.json", pf::dump_artifact(artifact)});
  out.files.push_back({"certificate.json", pf::dump_artifact(pf::certificate_json(cert))});
  out.files.push_back({"certificate.csv", pf::certificate_csv(cert)});
  out.exit_code = cert.all_pass() ? 0 : 2;
  return out;
}

// ---- witnesses ----

template <class Sc>
RunOutcome run_witnesses(const pf::Experiment<Sc>& ex) {
  auto cw = pf::cone_witnesses<Sc>(ex.samples, static_cast<unsigned>(ex.seed));
  auto we = pf::run_worked_example(ex.envelope, ex.decay, ex.fac.r, ex.fac.epsilon,
                                   ex.fac.delta, ex.fac.n0, ex.fac.alpha, ex.levels,
                                   ex.fac.tau);
  auto uw = pf::unbounded_xn_witness(we);

  const pf::Json canonical = pf::canonical_experiment_json(ex);
  pf::Json artifact{{"schema", 1},
                    {"kind", "witnesses"},
                    {"experiment", canonical},
                    {"mode", ex.mode},
                    {"config_digest", pf::fnv1a_digest(pf::dump_artifact(canonical))},
                    {"output", pf::witnesses_json(cw, uw)}};
  bool ok = cw.spike_inverse_expected && cw.spike_escapes && cw.pair_cone_escapes &&
            cw.function_cone_closed && uw.ratios_increase;
  RunOutcome out;
  out.files.push_back({"witnesses.json", pf::dump_artifact(artifact)});
  out.exit_code = ok ? 0 : 2;
  return out;
}

// ---- lift ----

template <class Sc>
RunOutcome run_lift(const pf::Experiment<Sc>& ex) {
  pf::require(ex.instance == "line", pf::Errc::bad_config,
              "the lift pipeline runs over the line instance");
  pf::LineLeftRegular<Sc> base;
  auto rep = pf::lift(base);
  using Lifted = pf::LiftedValue<pf::C0Line<Sc>>;

  pf::C0Line<Sc> top;
  for (long t = -3; t <= 3; ++t) top.set(t, ex.envelope.at(t));

  auto scaled_run = [&](long count) {
    std::vector<pf::C0Line<Sc>> v;
    Sc c(1);
    for (long j = 0; j < count; ++j) {
      v.push_back(top.scaled(c));
      c = c * Sc(1, 2);
    }
    return v;
  };
  auto spike_run = [&](long count) {
    std::vector<pf::C0Line<Sc>> v;
    for (long j = 0; j < count; ++j)
      v.push_back(pf::C0Line<Sc>::spike(j + 1, ex.envelope.at(j + 1)));
    return v;
  };

  pf::Experiment<Sc> sub = ex;
  sub.probe_bound = Sc(2);
  sub.probe_cone = true;
  sub.probe_envelope = false;

  RunOutcome out;
  {
    std::vector<Lifted> fam{Lifted::family(scaled_run(ex.lift_size)),
                            Lifted::family(spike_run(ex.lift_size)),
                            Lifted::family(std::vector<pf::C0Line<Sc>>(
                                static_cast<std::size_t>(ex.lift_size), pf::C0Line<Sc>{}))};
    pf::Json echo = pf::Json::array();
    for (const auto& x : fam) echo.push_back(pf::value_json(x));
    auto part = run_engine(rep, fam, sub, "lift-family", "_family", echo);
    out.exit_code = std::max(out.exit_code, part.exit_code);
    for (auto& f : part.files) out.files.push_back(std::move(f));
  }
  {
    std::vector<Lifted> seq{
        Lifted::sequence(scaled_run(ex.lift_prefix), pf::C0Line<Sc>{}),
        Lifted::sequence(spike_run(ex.lift_prefix), pf::C0Line<Sc>{}),
        Lifted::sequence(std::vector<pf::C0Line<Sc>>(
                             static_cast<std::size_t>(ex.lift_prefix), pf::C0Line<Sc>{}),
                         pf::C0Line<Sc>{})};
    pf::Json echo = pf::Json::array();
    for (const auto& x : seq) echo.push_back(pf::value_json(x));
    auto part = run_engine(rep, seq, sub, "lift-sequence", "_sequence", echo);
    out.exit_code = std::max(out.exit_code, part.exit_code);
    for (auto& f : part.files) out.files.push_back(std::move(f));
  }
  return out;
}

// ---- dispatch ----

template <class Sc>
RunOutcome run_pipeline(const pf::Json& raw) {
  auto ex = pf::parse_experiment<Sc>(raw);
  if (ex.pipeline == "factorize") return run_factorize(ex);
  if (ex.pipeline == "worked-example") return run_worked(ex);
  if (ex.pipeline == "witnesses") return run_witnesses(ex);
  if (ex.pipeline == "lift") return run_lift(ex);
  pf::fail(pf::Errc::bad_config, "unknown pipeline '" + ex.pipeline + "'");
}

RunOutcome run_any_mode(const pf::Json& raw) {
  std::string mode = raw.contains("mode")
                         ? pf::string_from(raw["mode"], "config.mode")
                         : std::string("exact");
  if (mode == "exact") return run_pipeline<pf::Rational>(raw);
  if (mode == "approx") return run_pipeline<pf::ApproxReal>(raw);
  pf::fail(pf::Errc::bad_config, "config.mode must be 'exact' or 'approx'");
}

int run_verify(const Options& opt) {
  pf::Json stored = load_json(opt.artifact);
  pf::require(stored.is_object() && stored.contains("kind") && stored.contains("experiment"),
              pf::Errc::bad_config, "artifact lacks kind/experiment fields");
  std::string kind = pf::string_from(stored["kind"], "artifact.kind");

  RunOutcome rerun = run_any_mode(stored["experiment"]);

  // The rerun is deterministic, so the matching artifact must reproduce the
  // stored one exactly.
  for (const auto& f : rerun.files) {
    if (f.name.substr(0, 6) != "result" && f.name != "worked.json" &&
        f.name != "witnesses.json")
      continue;
    pf::Json fresh = pf::Json::parse(f.bytes);
    if (!fresh.contains("kind") || fresh["kind"] != kind) continue;
    if (fresh == stored) {
      std::cout << "verified: " << opt.artifact << " reproduces under kind '" << kind
                << "'\n";
      return rerun.exit_code;
    }
    std::cout << "MISMATCH: stored artifact differs from the deterministic rerun\n";
    return 2;
  }
  std::cout << "MISMATCH: rerun produced no artifact of kind '" << kind << "'\n";
  return 2;
}

pf::Json assemble_config(const Options& opt, const std::string& pipeline) {
  pf::Json raw;
  if (!opt.config_path.empty()) {
    raw = load_json(opt.config_path);
    pf::require(raw.is_object(), pf::Errc::bad_config, "config root must be an object");
    if (raw.contains("pipeline"))
      pf::require(raw["pipeline"] == pipeline, pf::Errc::bad_config,
                  "config.pipeline does not match the subcommand");
  } else {
    raw = pf::Json{{"schema", 1}};
  }
  raw["pipeline"] = pipeline;
  if (!opt.mode.empty()) raw["mode"] = opt.mode;
  if (opt.r) raw["factorization"]["r"] = *opt.r;
  if (opt.epsilon) raw["factorization"]["epsilon"] = *opt.epsilon;
  if (opt.delta) raw["factorization"]["delta"] = *opt.delta;
  if (opt.n0) raw["factorization"]["n0"] = *opt.n0;
  if (opt.steps) raw["factorization"]["steps"] = *opt.steps;
  if (opt.cap) raw["factorization"]["cap"] = *opt.cap;
  if (opt.default_envelope && raw.contains("worked") && raw["worked"].contains("envelope"))
    raw["worked"].erase("envelope");
  return raw;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simultaneous power factorization pipelines"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "config JSON path");
    sub->add_option("--mode", opt.mode, "exact | approx")
        ->check(CLI::IsMember({"exact", "approx"}));
    sub->add_option("--out", opt.out_dir, "output directory (default .)");
    sub->add_option("--r", opt.r, "override factorization.r");
    sub->add_option("--epsilon", opt.epsilon, "override factorization.epsilon");
    sub->add_option("--delta", opt.delta, "override factorization.delta");
    sub->add_option("--n0", opt.n0, "override factorization.n0");
    sub->add_option("--steps", opt.steps, "override factorization.steps");
    sub->add_option("--cap", opt.cap, "override factorization.cap");
  };

  auto* factorize = app.add_subcommand("factorize", "generic engine pipeline");
  add_common(factorize);
  auto* worked = app.add_subcommand("worked-example", "closed-form line pipeline");
  add_common(worked);
  worked->add_flag("--default-envelope", opt.default_envelope,
                   "ignore any configured envelope and use the built-in one");
  auto* witnesses = app.add_subcommand("witnesses", "cone and unboundedness witnesses");
  add_common(witnesses);
  auto* liftcmd = app.add_subcommand("lift", "family and sequence factorization");
  add_common(liftcmd);
  auto* verify = app.add_subcommand("verify", "re-certify a stored artifact");
  verify->add_option("artifact", opt.artifact, "stored result JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (verify->parsed()) return run_verify(opt);
    std::string pipeline = factorize->parsed()    ? "factorize"
                           : worked->parsed()     ? "worked-example"
                           : witnesses->parsed()  ? "witnesses"
                                                  : "lift";
    RunOutcome outcome = run_any_mode(assemble_config(opt, pipeline));
    write_all(opt.out_dir, outcome.files);
    return outcome.exit_code;
  } catch (const pf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
