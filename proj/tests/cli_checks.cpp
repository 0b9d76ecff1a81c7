// End-to-end checks for the batch driver. Usage:
//   cli_checks <path-to-cli> <scratch-dir>
// Each check spawns the driver, inspects exit codes and artifacts, and
// prints one pass/FAIL line. Exit code = number of failing checks.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <powerfact/powerfact.hpp>

namespace fs = std::filesystem;
namespace pf = powerfact;

namespace {

std::string g_cli;
fs::path g_scratch;
int g_failures = 0;
int g_counter = 0;

struct Spawn {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

Spawn run(const std::string& args) {
  fs::path out = g_scratch / "stdout.txt";
  fs::path err = g_scratch / "stderr.txt";
  std::string cmd = g_cli + " " + args + " > " + out.string() + " 2> " + err.string();
  int status = std::system(cmd.c_str());
  Spawn s;
  if (status != -1 && WIFEXITED(status)) s.exit_code = WEXITSTATUS(status);
  s.out = slurp(out);
  s.err = slurp(err);
  return s;
}

void check(bool ok, const std::string& label, const std::string& detail = "") {
  ++g_counter;
  if (ok) {
    std::cout << "cli check " << g_counter << " pass  " << label << "\n";
  } else {
    ++g_failures;
    std::cout << "cli check " << g_counter << " FAIL  " << label;
    if (!detail.empty()) std::cout << "  [" << detail << "]";
    std::cout << "\n";
  }
}

fs::path fresh_dir(const std::string& name) {
  fs::path d = g_scratch / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void write_config(const fs::path& p, const pf::Json& j) {
  std::ofstream os(p, std::ios::binary);
  os << pf::dump_artifact(j);
}

pf::Json window_probe_element() {
  auto env = pf::default_envelope<pf::Rational>();
  pf::C0Line<pf::Rational> f;
  for (long t = -12; t <= 12; ++t) f.set(t, env.at(t));
  return pf::value_json(f);
}

bool all_records_pass(const pf::Json& cert) {
  if (!cert.contains("records") || cert["records"].size() != 13) return false;
  for (const auto& r : cert["records"])
    if (r["status"] != "pass") return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: cli_checks <cli-path> <scratch-dir>\n";
    return 1;
  }
  g_cli = argv[1];
  g_scratch = argv[2];
  fs::create_directories(g_scratch);

  // A default worked-example run certifies cleanly and writes all artifacts.
  fs::path d1 = fresh_dir("worked1");
  auto r1 = run("worked-example --default-envelope --out " + d1.string());
  check(r1.exit_code == 0, "worked-example exits 0",
        "exit " + std::to_string(r1.exit_code) + " stderr: " + r1.err);
  {
    bool parsed = false, pass = false, csv_ok = false, kind_ok = false;
    try {
      auto cert = pf::Json::parse(slurp(d1 / "certificate.json"));
      parsed = true;
      pass = all_records_pass(cert);
      auto artifact = pf::Json::parse(slurp(d1 / "worked.json"));
      kind_ok = artifact["kind"] == "worked-example";
    } catch (...) {
    }
    csv_ok = slurp(d1 / "certificate.csv").rfind("clause-id,status,margin,method\n", 0) == 0;
    check(parsed && pass, "certificate has 13 passing records");
    check(csv_ok, "csv starts with the header row");
    check(kind_ok, "worked.json is tagged with its kind");
  }

  // Reruns are byte-identical.
  fs::path d2 = fresh_dir("worked2");
  auto r2 = run("worked-example --default-envelope --out " + d2.string());
  check(r2.exit_code == 0 && slurp(d1 / "worked.json") == slurp(d2 / "worked.json") &&
            slurp(d1 / "certificate.json") == slurp(d2 / "certificate.json"),
        "a rerun reproduces the artifacts byte for byte");

  // Unknown config keys are refused with a one-line error.
  {
    fs::path cfg = g_scratch / "bad.json";
    write_config(cfg, pf::Json{{"schema", 1}, {"pipeline", "worked-example"}, {"zzz", 1}});
    auto r = run("worked-example --config " + cfg.string());
    bool one_line = !r.err.empty() &&
                    r.err.find('\n') == r.err.size() - 1 &&
                    r.err.rfind("error:", 0) == 0;
    check(r.exit_code == 1 && one_line, "unknown keys exit 1 with a single error line",
          "exit " + std::to_string(r.exit_code) + " stderr: " + r.err);
  }

  // An index cap of 1 exhausts the scan: exit 2 plus a certificate that
  // names the stage instead of records.
  {
    fs::path cfg = g_scratch / "capped.json";
    write_config(cfg, pf::Json{{"schema", 1},
                               {"pipeline", "factorize"},
                               {"factorization", pf::Json{{"cap", 1}}},
                               {"probe", pf::Json{{"elements",
                                                   pf::Json::array({window_probe_element()})}}}});
    fs::path d = fresh_dir("capped");
    auto r = run("factorize --config " + cfg.string() + " --out " + d.string());
    bool artifact_ok = false;
    try {
      auto cert = pf::Json::parse(slurp(d / "certificate.json"));
      artifact_ok = cert.contains("exhausted") &&
                    cert["exhausted"]["stage"] == "uniformity pre-check" &&
                    cert["records"].empty();
    } catch (...) {
    }
    check(r.exit_code == 2 && artifact_ok &&
              r.err.find("scan exhausted") != std::string::npos,
          "a capped scan exits 2 and reports its stage",
          "exit " + std::to_string(r.exit_code) + " stderr: " + r.err);
  }

  // A clean factorize run verifies; a tampered artifact does not.
  fs::path d3 = fresh_dir("engine");
  {
    fs::path cfg = g_scratch / "engine.json";
    write_config(cfg, pf::Json{{"schema", 1},
                               {"pipeline", "factorize"},
                               {"probe", pf::Json{{"elements",
                                                   pf::Json::array({window_probe_element()})}}}});
    auto r = run("factorize --config " + cfg.string() + " --out " + d3.string());
    check(r.exit_code == 0, "a default factorize run exits 0",
          "exit " + std::to_string(r.exit_code) + " stderr: " + r.err);

    auto v = run("verify " + (d3 / "result.json").string());
    check(v.exit_code == 0 && v.out.find("verified") != std::string::npos,
          "verify confirms a stored result",
          "exit " + std::to_string(v.exit_code) + " stdout: " + v.out);

    auto artifact = pf::Json::parse(slurp(d3 / "result.json"));
    artifact["output"]["a_norm"] = "1/2";
    fs::path tampered = g_scratch / "tampered.json";
    write_config(tampered, artifact);
    auto t = run("verify " + tampered.string());
    check(t.exit_code == 2 && t.out.find("MISMATCH") != std::string::npos,
          "verify flags a tampered result",
          "exit " + std::to_string(t.exit_code) + " stdout: " + t.out);
  }

  // Witnesses: the stored inverse carries the -1/2 spike.
  {
    fs::path d = fresh_dir("witnesses");
    auto r = run("witnesses --out " + d.string());
    std::string bytes = slurp(d / "witnesses.json");
    check(r.exit_code == 0 && bytes.find("-1/2") != std::string::npos,
          "witnesses exits 0 and stores the escaping inverse",
          "exit " + std::to_string(r.exit_code));
  }

  // Lift: both runs certify and the zero limit survives.
  {
    fs::path d = fresh_dir("lift");
    auto r = run("lift --out " + d.string());
    bool seq_ok = false, fam_ok = false;
    try {
      auto fam = pf::Json::parse(slurp(d / "result_family.json"));
      fam_ok = fam["kind"] == "lift-family";
      auto seq = pf::Json::parse(slurp(d / "result_sequence.json"));
      seq_ok = seq["output"]["zero_limit"]["checked"] == true &&
               seq["output"]["zero_limit"]["preserved"] == true;
    } catch (...) {
    }
    check(r.exit_code == 0 && fam_ok && seq_ok,
          "lift factorizes families and preserves zero limits",
          "exit " + std::to_string(r.exit_code) + " stderr: " + r.err);
  }

  // Approx mode drives the same pipelines through floating point.
  {
    fs::path cfg = g_scratch / "approx.json";
    write_config(cfg,
                 pf::Json{{"schema", 1},
                          {"pipeline", "worked-example"},
                          {"mode", "approx"},
                          {"worked", pf::Json{{"decay", pf::Json{{"kind", "gaussian-exp"}}}}}});
    fs::path d = fresh_dir("approx");
    auto r = run("worked-example --config " + cfg.string() + " --out " + d.string());
    bool pass = false;
    try {
      pass = all_records_pass(pf::Json::parse(slurp(d / "certificate.json")));
    } catch (...) {
    }
    check(r.exit_code == 0 && pass, "approx mode certifies the worked example",
          "exit " + std::to_string(r.exit_code) + " stderr: " + r.err);
  }

  // Verify on a missing path is a plain error, not a crash.
  {
    auto r = run("verify " + (g_scratch / "no_such.json").string());
    check(r.exit_code == 1 && r.err.rfind("error:", 0) == 0,
          "verify on a missing file exits 1",
          "exit " + std::to_string(r.exit_code) + " stderr: " + r.err);
  }

  // Flag overrides land in the stored experiment.
  {
    fs::path d = fresh_dir("override");
    auto r = run("worked-example --epsilon 1/20 --out " + d.string());
    bool eps_ok = false;
    try {
      auto artifact = pf::Json::parse(slurp(d / "worked.json"));
      eps_ok = artifact["output"]["epsilon_effective"] == "1/20" &&
               artifact["experiment"]["factorization"]["epsilon"] == "1/20";
    } catch (...) {
    }
    check(r.exit_code == 0 && eps_ok, "--epsilon shows up in the artifact",
          "exit " + std::to_string(r.exit_code));
  }

  if (g_failures == 0) {
    std::cout << "cli checks: all " << g_counter << " pass\n";
  } else {
    std::cout << "cli checks: " << g_failures << " of " << g_counter << " failed\n";
  }
  return g_failures;
}
