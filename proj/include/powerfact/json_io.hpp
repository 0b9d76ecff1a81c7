#pragma once

// JSON artifacts and configs. Everything round-trips through ordered JSON
// with scalars encoded as strings, so identical inputs give byte-identical
// files; digests are FNV-1a over the canonical dumps.

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "powerfact/certificate.hpp"
#include "powerfact/config.hpp"
#include "powerfact/envelope.hpp"
#include "powerfact/lifted_module.hpp"
#include "powerfact/representation.hpp"
#include "powerfact/unitization.hpp"
#include "powerfact/witnesses.hpp"
#include "powerfact/worked_example.hpp"

namespace powerfact {

using Json = nlohmann::ordered_json;

inline std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[h & 0xF];
    h >>= 4;
  }
  return out;
}

inline std::string dump_artifact(const Json& j) { return j.dump(2) + "\n"; }

// ---- scalars and values ----

template <class Sc>
Sc scalar_from(const Json& j, const std::string& where) {
  if (j.is_string()) return Sc::parse(j.get<std::string>());
  if (j.is_number_integer()) return Sc(j.get<long>());
  fail(Errc::bad_config, where + ": expected a scalar string or integer");
}

inline long integer_from(const Json& j, const std::string& where) {
  require(j.is_number_integer(), Errc::bad_config, where + ": expected an integer");
  return j.get<long>();
}

inline bool boolean_from(const Json& j, const std::string& where) {
  require(j.is_boolean(), Errc::bad_config, where + ": expected a boolean");
  return j.get<bool>();
}

inline std::string string_from(const Json& j, const std::string& where) {
  require(j.is_string(), Errc::bad_config, where + ": expected a string");
  return j.get<std::string>();
}

inline void check_keys(const Json& j, const std::string& where,
                       std::initializer_list<const char*> allowed) {
  require(j.is_object(), Errc::bad_config, where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) known = true;
    require(known, Errc::bad_config, where + ": unknown key '" + it.key() + "'");
  }
}

template <class Sc>
Json value_json(const C0Line<Sc>& f) {
  Json sites = Json::object();
  for (const auto& [t, v] : f.support()) sites[std::to_string(t)] = v.encode();
  return sites;
}

template <class Sc>
C0Line<Sc> line_from(const Json& j, const std::string& where) {
  require(j.is_object(), Errc::bad_config, where + " must be a site-to-value object");
  C0Line<Sc> f;
  for (auto it = j.begin(); it != j.end(); ++it) {
    long site = 0;
    try {
      std::size_t used = 0;
      site = std::stol(it.key(), &used);
      require(used == it.key().size(), Errc::bad_config, "");
    } catch (...) {
      fail(Errc::bad_config, where + ": site '" + it.key() + "' is not an integer");
    }
    f.set(site, scalar_from<Sc>(it.value(), where));
  }
  return f;
}

template <class Sc>
Json value_json(const EventuallyConstantLine<Sc>& b) {
  Json sites = Json::object();
  for (const auto& [t, v] : b.exceptional()) sites[std::to_string(t)] = v.encode();
  return Json{{"tail", b.tail().encode()}, {"sites", sites}};
}

template <class Sc>
Json value_json(const MatrixAlgebra<Sc>& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(m.at(i, j).encode());
    rows.push_back(std::move(row));
  }
  return rows;
}

template <class Sc>
MatrixAlgebra<Sc> matrix_from(const Json& j, const std::string& where) {
  require(j.is_array() && !j.empty(), Errc::bad_config, where + " must be a row array");
  MatrixAlgebra<Sc> m(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    require(j[i].is_array() && j[i].size() == j.size(), Errc::bad_config,
            where + " must be square");
    for (std::size_t k = 0; k < j.size(); ++k)
      m.at(i, k) = scalar_from<Sc>(j[i][k], where);
  }
  return m;
}

template <class Sc>
Json value_json(const UnitizationPair<Sc>& u) {
  return Json{{"beta", u.beta().encode()}, {"part", value_json(u.part())}};
}

template <class M>
Json value_json(const LiftedValue<M>& x) {
  Json terms = Json::array();
  for (const auto& t : x.terms()) terms.push_back(value_json(t));
  Json out{{"terms", terms}};
  if (x.is_sequence()) out["limit"] = value_json(x.limit());
  return out;
}

// ---- parameter blocks ----

template <class Sc>
Json envelope_json(const Envelope<Sc>& env) {
  Json table = Json::array();
  for (long k = 0; k <= env.table_radius(); ++k) table.push_back(env.table().at(k).encode());
  return Json{{"table", table},
              {"tail", Json{{"coeff", env.tail().coeff.encode()},
                            {"ratio", env.tail().ratio.encode()}}}};
}

template <class Sc>
Envelope<Sc> envelope_from(const Json& j) {
  check_keys(j, "envelope", {"table", "tail"});
  require(j.contains("table") && j["table"].is_array() && !j["table"].empty(),
          Errc::bad_config, "envelope.table must be a nonempty array");
  require(j.contains("tail"), Errc::bad_config, "envelope.tail is required");
  check_keys(j["tail"], "envelope.tail", {"coeff", "ratio"});
  require(j["tail"].contains("coeff") && j["tail"].contains("ratio"), Errc::bad_config,
          "envelope.tail needs coeff and ratio");
  std::map<long, Sc> table;
  for (std::size_t k = 0; k < j["table"].size(); ++k)
    table[static_cast<long>(k)] = scalar_from<Sc>(j["table"][k], "envelope.table");
  GeometricTail<Sc> tail{scalar_from<Sc>(j["tail"]["coeff"], "envelope.tail.coeff"),
                         scalar_from<Sc>(j["tail"]["ratio"], "envelope.tail.ratio")};
  return Envelope<Sc>(std::move(table), tail);
}

template <class Sc>
Json decay_json(const DecaySchedule<Sc>& d) {
  Json out{{"kind", d.name()}};
  if (d.kind == DecaySchedule<Sc>::Kind::gaussian_rational) out["base"] = d.base.encode();
  if (d.kind == DecaySchedule<Sc>::Kind::geometric) out["ratio"] = d.ratio.encode();
  return out;
}

template <class Sc>
DecaySchedule<Sc> decay_from(const Json& j) {
  check_keys(j, "decay", {"kind", "base", "ratio"});
  require(j.contains("kind"), Errc::bad_config, "decay.kind is required");
  std::string kind = string_from(j["kind"], "decay.kind");
  if (kind == "gaussian-rational") {
    Sc base = j.contains("base") ? scalar_from<Sc>(j["base"], "decay.base") : Sc(4);
    return DecaySchedule<Sc>::gaussian_rational(base);
  }
  if (kind == "gaussian-exp") {
    require(!j.contains("base") && !j.contains("ratio"), Errc::bad_config,
            "gaussian-exp takes no parameters");
    return DecaySchedule<Sc>::gaussian_exp();
  }
  if (kind == "geometric") {
    require(j.contains("ratio"), Errc::bad_config, "geometric decay needs a ratio");
    return DecaySchedule<Sc>::geometric(scalar_from<Sc>(j["ratio"], "decay.ratio"));
  }
  fail(Errc::bad_config, "unknown decay kind '" + kind + "'");
}

template <class Sc>
Json factorization_json(const FactorizationConfig<Sc>& cfg) {
  Json out{{"r", cfg.r.encode()},
           {"epsilon", cfg.epsilon.encode()},
           {"delta", cfg.delta.encode()},
           {"n0", cfg.n0},
           {"steps", cfg.steps},
           {"cap", cfg.index_cap},
           {"tau", cfg.tau.encode()},
           {"path", path_name(cfg.path)},
           {"alpha", Json{{"coeff", cfg.alpha.coeff.encode()}, {"power", cfg.alpha.power}}}};
  if (cfg.forced_indices) {
    Json idx = Json::array();
    for (long nu : *cfg.forced_indices) idx.push_back(nu);
    out["forced_indices"] = idx;
  }
  return out;
}

template <class Sc>
FactorizationConfig<Sc> factorization_from(const Json& j) {
  check_keys(j, "factorization",
             {"r", "epsilon", "delta", "n0", "steps", "cap", "tau", "path", "alpha",
              "forced_indices"});
  FactorizationConfig<Sc> cfg;
  if (j.contains("r")) cfg.r = scalar_from<Sc>(j["r"], "factorization.r");
  if (j.contains("epsilon"))
    cfg.epsilon = scalar_from<Sc>(j["epsilon"], "factorization.epsilon");
  if (j.contains("delta")) cfg.delta = scalar_from<Sc>(j["delta"], "factorization.delta");
  if (j.contains("n0")) cfg.n0 = integer_from(j["n0"], "factorization.n0");
  if (j.contains("steps")) cfg.steps = integer_from(j["steps"], "factorization.steps");
  if (j.contains("cap")) cfg.index_cap = integer_from(j["cap"], "factorization.cap");
  if (j.contains("tau")) cfg.tau = scalar_from<Sc>(j["tau"], "factorization.tau");
  if (j.contains("path"))
    cfg.path = parse_path(string_from(j["path"], "factorization.path"));
  if (j.contains("alpha")) {
    check_keys(j["alpha"], "factorization.alpha", {"coeff", "power"});
    if (j["alpha"].contains("coeff"))
      cfg.alpha.coeff = scalar_from<Sc>(j["alpha"]["coeff"], "factorization.alpha.coeff");
    if (j["alpha"].contains("power"))
      cfg.alpha.power =
          static_cast<int>(integer_from(j["alpha"]["power"], "factorization.alpha.power"));
  }
  if (j.contains("forced_indices")) {
    require(j["forced_indices"].is_array(), Errc::bad_config,
            "factorization.forced_indices must be an array");
    std::vector<long> idx;
    for (const auto& v : j["forced_indices"])
      idx.push_back(integer_from(v, "factorization.forced_indices"));
    cfg.forced_indices = std::move(idx);
  }
  return cfg;
}

// ---- experiment configs ----

template <class Sc>
struct Experiment {
  std::string pipeline;  // factorize | worked-example | witnesses | lift
  std::string mode;      // exact | approx
  FactorizationConfig<Sc> fac;

  std::string instance = "line";  // line | matrix
  NetKind net = NetKind::plateau;
  long dim = 2;

  std::vector<C0Line<Sc>> line_probe;
  std::vector<MatrixAlgebra<Sc>> matrix_probe;
  std::optional<Sc> probe_bound;
  bool probe_cone = false;
  bool probe_envelope = false;

  long levels = 6;
  long n_limit = 15;
  Envelope<Sc> envelope = default_envelope<Sc>();
  DecaySchedule<Sc> decay = DecaySchedule<Sc>::gaussian_rational(Sc(4));

  long lift_size = 3;
  long lift_prefix = 5;

  long samples = 20;
  long seed = 2024;
};

template <class Sc>
Experiment<Sc> parse_experiment(const Json& j) {
  check_keys(j, "config",
             {"schema", "pipeline", "mode", "factorization", "instance", "probe", "worked",
              "lift", "witnesses"});
  require(j.contains("schema") && j["schema"].is_number_integer() &&
              j["schema"].get<long>() == 1,
          Errc::bad_config, "config.schema must be the integer 1");
  require(j.contains("pipeline"), Errc::bad_config, "config.pipeline is required");

  Experiment<Sc> ex;
  ex.pipeline = string_from(j["pipeline"], "config.pipeline");
  require(ex.pipeline == "factorize" || ex.pipeline == "worked-example" ||
              ex.pipeline == "witnesses" || ex.pipeline == "lift",
          Errc::bad_config, "unknown pipeline '" + ex.pipeline + "'");
  ex.mode = Sc::exact ? "exact" : "approx";
  if (j.contains("mode"))
    require(string_from(j["mode"], "config.mode") == ex.mode, Errc::bad_config,
            "config.mode does not match the arithmetic in use");

  if (j.contains("factorization")) ex.fac = factorization_from<Sc>(j["factorization"]);

  if (j.contains("instance")) {
    check_keys(j["instance"], "instance", {"kind", "net", "dim"});
    if (j["instance"].contains("kind"))
      ex.instance = string_from(j["instance"]["kind"], "instance.kind");
    require(ex.instance == "line" || ex.instance == "matrix", Errc::bad_config,
            "instance.kind must be 'line' or 'matrix'");
    if (j["instance"].contains("net"))
      ex.net = parse_net_kind(string_from(j["instance"]["net"], "instance.net"));
    else if (ex.instance == "matrix")
      ex.net = NetKind::constant_identity;
    if (j["instance"].contains("dim"))
      ex.dim = integer_from(j["instance"]["dim"], "instance.dim");
    require(ex.dim >= 1, Errc::bad_config, "instance.dim must be >= 1");
  }

  if (j.contains("worked")) {
    check_keys(j["worked"], "worked", {"levels", "n_limit", "decay", "envelope"});
    if (j["worked"].contains("levels"))
      ex.levels = integer_from(j["worked"]["levels"], "worked.levels");
    if (j["worked"].contains("n_limit"))
      ex.n_limit = integer_from(j["worked"]["n_limit"], "worked.n_limit");
    if (j["worked"].contains("decay")) ex.decay = decay_from<Sc>(j["worked"]["decay"]);
    if (j["worked"].contains("envelope"))
      ex.envelope = envelope_from<Sc>(j["worked"]["envelope"]);
  }

  if (j.contains("probe")) {
    check_keys(j["probe"], "probe", {"elements", "bound", "cone", "envelope"});
    if (j["probe"].contains("elements")) {
      require(j["probe"]["elements"].is_array(), Errc::bad_config,
              "probe.elements must be an array");
      for (const auto& el : j["probe"]["elements"]) {
        if (ex.instance == "line")
          ex.line_probe.push_back(line_from<Sc>(el, "probe element"));
        else
          ex.matrix_probe.push_back(matrix_from<Sc>(el, "probe element"));
      }
    }
    // Canonical forms spell the absent bound as null, so null means unset.
    if (j["probe"].contains("bound") && !j["probe"]["bound"].is_null())
      ex.probe_bound = scalar_from<Sc>(j["probe"]["bound"], "probe.bound");
    if (j["probe"].contains("cone"))
      ex.probe_cone = boolean_from(j["probe"]["cone"], "probe.cone");
    if (j["probe"].contains("envelope"))
      ex.probe_envelope = boolean_from(j["probe"]["envelope"], "probe.envelope");
  }

  if (j.contains("lift")) {
    check_keys(j["lift"], "lift", {"size", "prefix"});
    if (j["lift"].contains("size")) ex.lift_size = integer_from(j["lift"]["size"], "lift.size");
    if (j["lift"].contains("prefix"))
      ex.lift_prefix = integer_from(j["lift"]["prefix"], "lift.prefix");
    require(ex.lift_size >= 1 && ex.lift_prefix >= 1, Errc::bad_config,
            "lift.size and lift.prefix must be >= 1");
  }

  if (j.contains("witnesses")) {
    check_keys(j["witnesses"], "witnesses", {"samples", "seed"});
    if (j["witnesses"].contains("samples"))
      ex.samples = integer_from(j["witnesses"]["samples"], "witnesses.samples");
    if (j["witnesses"].contains("seed"))
      ex.seed = integer_from(j["witnesses"]["seed"], "witnesses.seed");
  }
  return ex;
}

template <class Sc>
Json probe_json(const Experiment<Sc>& ex) {
  Json elements = Json::array();
  if (ex.instance == "line")
    for (const auto& f : ex.line_probe) elements.push_back(value_json(f));
  else
    for (const auto& m : ex.matrix_probe) elements.push_back(value_json(m));
  Json out{{"elements", elements}};
  out["bound"] = ex.probe_bound ? Json(ex.probe_bound->encode()) : Json(nullptr);
  out["cone"] = ex.probe_cone;
  out["envelope"] = ex.probe_envelope;
  return out;
}

// Canonical echo: every field explicit, defaults included, so equal setups
// dump to equal bytes regardless of which keys the input spelled out.
template <class Sc>
Json canonical_experiment_json(const Experiment<Sc>& ex) {
  return Json{{"schema", 1},
              {"pipeline", ex.pipeline},
              {"mode", ex.mode},
              {"factorization", factorization_json(ex.fac)},
              {"instance",
               Json{{"kind", ex.instance}, {"net", net_kind_name(ex.net)}, {"dim", ex.dim}}},
              {"probe", probe_json(ex)},
              {"worked", Json{{"levels", ex.levels},
                              {"n_limit", ex.n_limit},
                              {"decay", decay_json(ex.decay)},
                              {"envelope", envelope_json(ex.envelope)}}},
              {"lift", Json{{"size", ex.lift_size}, {"prefix", ex.lift_prefix}}},
              {"witnesses", Json{{"samples", ex.samples}, {"seed", ex.seed}}}};
}

// ---- certificates ----

template <class Sc>
Json certificate_json(const Certificate<Sc>& cert) {
  Json records = Json::array();
  for (const auto& r : cert.records)
    records.push_back(Json{{"clause-id", r.id},
                           {"status", clause_status_name(r.status)},
                           {"margin", r.margin.encode()},
                           {"method", clause_method_name(r.method)},
                           {"note", r.note}});
  return Json{{"schema", 1},
              {"environment", Json{{"mode", cert.environment.mode},
                                   {"instance", cert.environment.instance},
                                   {"version", cert.environment.version},
                                   {"config_digest", cert.environment.config_digest},
                                   {"probe_digest", cert.environment.probe_digest},
                                   {"tolerance", cert.environment.tolerance.encode()}}},
              {"records", records}};
}

template <class Sc>
std::string certificate_csv(const Certificate<Sc>& cert) {
  std::string out = "clause-id,status,margin,method\n";
  for (const auto& r : cert.records) {
    out += r.id;
    out += ',';
    out += clause_status_name(r.status);
    out += ',';
    out += r.margin.encode();
    out += ',';
    out += clause_method_name(r.method);
    out += '\n';
  }
  return out;
}

// ---- run artifacts ----

template <class Sc>
Json neumann_json(const NeumannCheck<Sc>& n) {
  return Json{{"performed", n.performed}, {"ok", n.ok},           {"terms", n.terms},
              {"q", n.q.encode()},        {"tail", n.tail_bound.encode()},
              {"discrepancy", n.discrepancy.encode()}};
}

template <class Rep>
Json result_json(const Rep& rep, const FactorizationResult<Rep>& result) {
  Json schedule = Json::array();
  for (long n : result.j_schedule) schedule.push_back(n);

  Json chain = Json::array();
  for (const auto& step : result.chain.steps)
    chain.push_back(Json{{"index", step.index},
                         {"u", value_json(step.u)},
                         {"margin", step.margin.encode()},
                         {"threshold", step.threshold.encode()},
                         {"forced", step.forced},
                         {"neumann", neumann_json(step.neumann)}});

  Json pre{{"threshold",
            result.pre_scan.threshold ? Json(*result.pre_scan.threshold) : Json(nullptr)},
           {"best_residual", result.pre_scan.best_residual.encode()},
           {"best_index", result.pre_scan.best_index}};

  return Json{{"bound", result.bound_M.encode()},
              {"delta_bound", result.delta_bound.encode()},
              {"epsilon_effective", result.epsilon_effective.encode()},
              {"epsilon_tightened", result.epsilon_tightened},
              {"j_schedule", schedule},
              {"pre_scan", pre},
              {"chain", chain},
              {"a", value_json(result.a)},
              {"a_norm", result.a_norm.encode()},
              {"a_tail_bound", result.a_tail_bound.encode()},
              {"a_closed_form", result.a_closed_form},
              {"b", value_json(result.chain.current_b(rep))}};
}

template <class Sc>
Json thresholds_json(const ThresholdSchedules<Sc>& t) {
  auto arr = [](const std::vector<long>& v) {
    Json a = Json::array();
    for (long x : v) a.push_back(x);
    return a;
  };
  return Json{{"N1", arr(t.N1)},
              {"N2", arr(t.N2)},
              {"N3", arr(t.N3)},
              {"Nprime", arr(t.Nprime)},
              {"K", Json{{"value", t.K.value.encode()},
                         {"argmax_n", t.K.argmax_n},
                         {"argmax_i", t.K.argmax_i}}}};
}

template <class Sc>
Json worked_json(const WorkedExample<Sc>& ex) {
  Json nu = Json::array();
  for (long v : ex.nu) nu.push_back(v);

  Json factors = Json::array();
  for (const auto& fc : ex.build.factor_certificates)
    factors.push_back(Json{{"index", fc.index},
                           {"terms", fc.terms},
                           {"tail", fc.tail_bound.encode()},
                           {"discrepancy", fc.discrepancy.encode()},
                           {"ok", fc.ok}});

  Json modulus = Json::array();
  for (const auto& row : ex.modulus)
    modulus.push_back(Json{{"n", row.n},
                           {"eta", row.eta.encode()},
                           {"band", row.band},
                           {"zeta", row.zeta.encode()}});

  Json truncation = Json::array();
  for (const auto& row : ex.truncation)
    truncation.push_back(
        Json{{"n", row.n}, {"eta", row.eta.encode()}, {"site", row.site}});

  return Json{{"epsilon_effective", ex.epsilon_effective.encode()},
              {"thresholds", thresholds_json(ex.thresholds)},
              {"nu", nu},
              {"a", value_json(ex.a_super)},
              {"product_identity", ex.build.product_identity_ok},
              {"factor_certificates", factors},
              {"modulus", modulus},
              {"truncation", truncation}};
}

template <class Sc>
Json witnesses_json(const ConeWitnesses<Sc>& cw, const UnboundedWitness<Sc>& uw) {
  Json pairs = Json::array();
  for (const auto& s : cw.pair_samples)
    pairs.push_back(Json{{"u", value_json(s.u)},
                         {"inverse", value_json(s.inverse)},
                         {"product_ok", s.product_ok},
                         {"inverse_in_cone", s.inverse_in_cone}});
  Json funcs = Json::array();
  for (const auto& s : cw.function_samples)
    funcs.push_back(Json{{"b", value_json(s.b)},
                         {"inverse", value_json(s.b_inv)},
                         {"square_identity_ok", s.square_identity_ok},
                         {"inverse_nonneg", s.inverse_nonneg}});
  Json rows = Json::array();
  for (const auto& r : uw.rows)
    rows.push_back(Json{{"band", r.band},
                        {"site", r.site},
                        {"input_norm", r.input_norm.encode()},
                        {"image_norm", r.image_norm.encode()},
                        {"ratio", r.ratio.encode()}});
  return Json{
      {"pair_cone",
       Json{{"spike", value_json(cw.spike)},
            {"spike_inverse", value_json(cw.spike_inverse)},
            {"spike_inverse_expected", cw.spike_inverse_expected},
            {"spike_escapes", cw.spike_escapes},
            {"samples", pairs},
            {"all_escape", cw.pair_cone_escapes}}},
      {"function_cone", Json{{"samples", funcs}, {"closed", cw.function_cone_closed}}},
      {"unbounded_ratios", Json{{"rows", rows}, {"strictly_increasing", uw.ratios_increase}}}};
}

}  // namespace powerfact
