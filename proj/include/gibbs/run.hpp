#pragma once

// Experiment runner behind the gibbs-run CLI: one JSON config in, tidy CSV and
// JSON tables plus a manifest out.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "gibbs/gibbs.hpp"
#include "gibbs/io.hpp"

namespace gibbs::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

inline const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds = {"preimages", "fixpoints", "pressure",     "mu-n",       "periodic-measure",
                                                 "l1-stat",   "pointwise", "lemma1-check", "gibbs-ratio"};
  return kinds;
}

enum ExitCode : int { kOk = 0, kFailure = 1, kBadConfig = 2, kCapExceeded = 3, kCertification = 4 };

/// Command-line overrides; unset fields leave the config untouched.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool force = false;
};

/// A validated run configuration. `resolved` echoes every field including
/// defaults, so re-running from it reproduces the run.
struct RunConfig {
  std::string kind;
  json resolved;
};

namespace detail {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

inline const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing required field '") + key + "'");
  return j.at(key);
}

inline bool needs_seed(const std::string& kind) { return kind == "l1-stat"; }

inline json resolve_system(const json& s) {
  const auto type = get_or<std::string>(s, "type", "");
  json out;
  if (type == "torus") {
    out["type"] = "torus";
    out["matrix"] = require(s, "matrix");
    json pert = s.contains("perturbation") ? s.at("perturbation") : json::object();
    json p;
    p["epsilon"] = get_or<double>(pert, "epsilon", 0.0);
    p["terms"] = pert.contains("terms") ? pert.at("terms") : json::array();
    out["perturbation"] = p;
  } else if (type == "shift") {
    out["type"] = "shift";
    out["alphabet"] = require(s, "alphabet");
    out["adjacency"] = require(s, "adjacency");
  } else {
    throw ConfigError("system.type must be 'torus' or 'shift'");
  }
  return out;
}

inline json resolve_potential(const json& sys, const json& p) {
  json out;
  if (sys.at("type") == "torus") {
    out["constant"] = get_or<double>(p, "constant", 0.0);
    out["terms"] = p.contains("terms") ? p.at("terms") : json::array();
  } else {
    out["range"] = get_or<int>(p, "range", 1);
    if (p.contains("table")) {
      out["table"] = p.at("table");
    } else {
      json t = json::object();
      const int s = sys.at("alphabet").get<int>();
      for (int a = 0; a < s; ++a) t[std::string(1, symbol_to_char(static_cast<unsigned char>(a)))] = 0.0;
      if (out["range"] != 1) throw ConfigError("potential.table is required for range > 1");
      out["table"] = t;
    }
  }
  return out;
}

}  // namespace detail

/// Validates a config object (or a manifest holding one under "config") and
/// fills in every default.
inline RunConfig resolve_config(const json& input, const std::string& kind_hint, const Overrides& ov = {}) {
  const json& raw = input.contains("config") && input.at("config").is_object() ? input.at("config") : input;
  if (!raw.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig cfg;
  cfg.kind = detail::get_or<std::string>(raw, "kind", kind_hint);
  if (!kind_hint.empty() && cfg.kind != kind_hint)
    throw ConfigError("config kind '" + cfg.kind + "' does not match subcommand '" + kind_hint + "'");
  bool known = false;
  for (const auto& k : experiment_kinds()) known = known || k == cfg.kind;
  if (!known) throw ConfigError("unknown experiment kind '" + cfg.kind + "'");

  static const std::set<std::string> allowed = {"kind",   "system",  "potential", "depths",  "point",   "dictionary",
                                                "test_functions", "sampler", "samples", "seed", "threads",
                                                "force", "tolerance", "lemma1", "reference_depth", "leaf_cap"};
  for (const auto& [key, _] : raw.items())
    if (!allowed.count(key)) throw ConfigError("unknown config field '" + key + "'");

  json r;
  r["kind"] = cfg.kind;
  r["system"] = detail::resolve_system(detail::require(raw, "system"));
  const bool torus = r["system"]["type"] == "torus";
  r["potential"] = detail::resolve_potential(r["system"], raw.contains("potential") ? raw.at("potential") : json::object());
  r["depths"] = detail::get_or<std::vector<unsigned>>(raw, "depths", {1});
  if (r["depths"].empty()) throw ConfigError("depths must be nonempty");

  if (raw.contains("point")) {
    r["point"] = raw.at("point");
  } else if (torus) {
    r["point"] = std::vector<std::string>(r["system"]["matrix"].size(), "0");
  } else {
    r["point"] = json{{"head", ""}, {"tail", "0"}};
  }

  if (raw.contains("dictionary")) {
    r["dictionary"] = raw.at("dictionary");
  } else if (torus) {
    r["dictionary"] = json{{"type", "characters"}, {"max_frequency", 1}, {"weights", "inverse-square"}};
  } else {
    r["dictionary"] = json{{"type", "cylinders"}, {"max_length", 4}};
  }
  r["test_functions"] = raw.contains("test_functions") ? raw.at("test_functions") : json::array();

  json sampler = raw.contains("sampler") ? raw.at("sampler") : json::object();
  json rs;
  rs["kind"] = detail::get_or<std::string>(sampler, "kind", torus ? "uniform-rational" : "periodic-measure");
  rs["denominator"] = detail::get_or<std::int64_t>(sampler, "denominator", 9973);
  rs["depth"] = detail::get_or<unsigned>(sampler, "depth", torus ? 12U : 14U);
  r["sampler"] = rs;
  r["samples"] = detail::get_or<std::size_t>(raw, "samples", 50);

  std::optional<std::uint64_t> seed = ov.seed;
  if (!seed && raw.contains("seed") && !raw.at("seed").is_null()) seed = detail::get_or<std::uint64_t>(raw, "seed", 0);
  if (detail::needs_seed(cfg.kind) && !seed) throw ConfigError("experiment '" + cfg.kind + "' samples points: a seed is mandatory");
  r["seed"] = seed ? json(*seed) : json(nullptr);

  r["threads"] = ov.threads ? *ov.threads : detail::get_or<unsigned>(raw, "threads", 1);
  r["force"] = ov.force || detail::get_or<bool>(raw, "force", false);
  r["leaf_cap"] = detail::get_or<std::size_t>(raw, "leaf_cap", kDefaultEnumerationCap);
  r["tolerance"] = detail::get_or<double>(raw, "tolerance", 0.02);
  json l1 = raw.contains("lemma1") ? raw.at("lemma1") : json::object();
  r["lemma1"] = json{{"max_past", detail::get_or<int>(l1, "max_past", 3)},
                     {"max_future", detail::get_or<int>(l1, "max_future", 3)}};
  r["reference_depth"] = detail::get_or<unsigned>(raw, "reference_depth", 10);
  cfg.resolved = std::move(r);
  return cfg;
}

// --- building library objects from the resolved config ----------------------

inline LatticeMap build_lattice_map(const json& sys) {
  std::vector<std::vector<std::int64_t>> rows;
  try {
    rows = sys.at("matrix").get<std::vector<std::vector<std::int64_t>>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("system.matrix: ") + e.what());
  }
  const IntMatrix a = IntMatrix::from_rows(rows);
  if (!a.square() || a.rows() == 0) throw ConfigError("system.matrix must be square");
  const json& pert = sys.at("perturbation");
  std::vector<TrigTerm> terms;
  for (const auto& t : pert.at("terms")) {
    TrigTerm term;
    term.component = detail::get_or<std::size_t>(t, "component", 0);
    term.frequency = detail::require(t, "frequency").get<std::vector<std::int64_t>>();
    const auto amp = detail::require(t, "amplitude").get<std::vector<double>>();
    if (amp.size() != 2) throw ConfigError("perturbation amplitude must be a [cos, sin] pair");
    term.cos_amplitude = amp[0];
    term.sin_amplitude = amp[1];
    terms.push_back(std::move(term));
  }
  try {
    LatticeMap f(a, TrigPolynomial(a.rows(), std::move(terms)), pert.at("epsilon").get<double>());
    if (f.hyperbolicity().cls == HyperbolicClass::NotHyperbolic)
      throw ConfigError("system.matrix has an eigenvalue on the unit circle");
    return f;
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  } catch (const SingularMatrix& e) {
    throw ConfigError(e.what());
  }
}

inline TorusPotential build_torus_potential(const json& p) {
  std::vector<TorusPotential::Term> terms;
  for (const auto& t : p.at("terms")) {
    const auto amp = detail::require(t, "amplitude").get<std::vector<double>>();
    if (amp.size() != 2) throw ConfigError("potential amplitude must be a [cos, sin] pair");
    terms.push_back({detail::require(t, "frequency").get<std::vector<std::int64_t>>(), amp[0], amp[1]});
  }
  return TorusPotential(p.at("constant").get<double>(), std::move(terms));
}

inline ShiftSystem build_shift(const json& sys) {
  try {
    return ShiftSystem(sys.at("alphabet").get<int>(), sys.at("adjacency").get<std::vector<std::vector<int>>>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("system: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

inline LocallyConstantPotential build_shift_potential(const ShiftSystem& s, const json& p) {
  std::map<Word, double> table;
  try {
    for (const auto& [k, v] : p.at("table").items()) table[parse_word(k)] = v.get<double>();
    return LocallyConstantPotential(s, p.at("range").get<int>(), table);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("potential: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

inline TestFunction build_test_function(const json& t) {
  if (t.contains("character")) {
    const auto part = detail::get_or<std::string>(t, "part", "re");
    if (part != "re" && part != "im") throw ConfigError("character part must be 're' or 'im'");
    return Character{t.at("character").get<std::vector<std::int64_t>>(), part == "re" ? Part::Real : Part::Imag};
  }
  if (t.contains("cylinder")) return Cylinder{parse_word(t.at("cylinder").get<std::string>())};
  if (t.contains("constant")) return constant_function(t.at("constant").get<double>());
  throw ConfigError("test function needs one of 'character', 'cylinder', 'constant'");
}

inline TestDictionary build_dictionary(const json& d, std::size_t torus_dim, const ShiftSystem* shift) {
  const auto type = detail::get_or<std::string>(d, "type", "");
  if (type == "characters") {
    if (shift) throw ConfigError("character dictionary on a shift system");
    const auto w = detail::get_or<std::string>(d, "weights", "inverse-square");
    if (w != "uniform" && w != "inverse-square") throw ConfigError("dictionary.weights must be 'uniform' or 'inverse-square'");
    return torus_characters(torus_dim, detail::get_or<int>(d, "max_frequency", 1),
                            w == "uniform" ? CharacterWeights::Uniform : CharacterWeights::InverseSquare);
  }
  if (type == "cylinders") {
    if (!shift) throw ConfigError("cylinder dictionary on a torus system");
    return cylinder_indicators(*shift, detail::get_or<int>(d, "max_length", 4));
  }
  if (type == "constant") return constant_dictionary();
  if (type == "functions") {
    std::vector<DictionaryEntry> entries;
    for (const auto& t : detail::require(d, "functions")) entries.push_back({build_test_function(t), detail::get_or<double>(t, "weight", 1.0)});
    return TestDictionary(std::move(entries));
  }
  throw ConfigError("dictionary.type must be characters, cylinders, constant or functions");
}

// --- experiment execution ----------------------------------------------------

struct Output {
  std::string csv;
  json results;
  std::map<std::string, std::string> extra_files;
};

namespace detail {

inline std::string join_csv(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
  return s;
}

inline std::string point_csv(const TorusPoint& p) { return join_csv(io::coord_strings(p)); }
inline std::string point_csv(const ShiftPoint& p) { return word_to_string(p.head()) + "," + word_to_string(p.tail()); }

inline json point_json(const TorusPoint& p) { return io::coord_strings(p); }
inline json point_json(const ShiftPoint& p) {
  return json{{"head", word_to_string(p.head())}, {"tail", word_to_string(p.tail())}};
}

/// A legal continuation of `w`: w followed by a periodic tail.
inline ShiftPoint legal_extension(const ShiftSystem& s, const Word& w) {
  const unsigned limit = static_cast<unsigned>(s.alphabet() * s.alphabet() + 1);
  for (unsigned k = 1; k <= limit; ++k)
    for (const auto& p : s.fixed_points(k))
      if (w.empty() || s.allowed(static_cast<unsigned char>(w.back()), p.symbol(0))) return ShiftPoint(w, p.tail());
  throw Error("no legal continuation found");
}

template <class System, class Phi, class Ref>
Output run_generic(const std::string& kind, const json& cfg, const System& system, const Phi& phi,
                   const typename System::point_type& x, const Ref& reference, const TestDictionary* dict,
                   const ExecutionPolicy& policy, const std::string& system_id) {
  using P = typename System::point_type;
  constexpr bool kTorus = std::is_same_v<P, TorusPoint>;
  const auto depths = cfg.at("depths").get<std::vector<unsigned>>();
  Output out;
  std::ostringstream csv;

  if (kind == "preimages") {
    csv << (kTorus ? "n,index,point,maps_back\n" : "n,index,head,tail,maps_back\n");
    json levels = json::array();
    for (unsigned n : depths) {
      PreimageTree<System> tree(system, [](const P&) { return 0.0; }, x, n, policy);
      const auto leaves = tree.leaves();
      json pts = json::array();
      for (std::size_t i = 0; i < leaves.size(); ++i) {
        P z = leaves[i].point;
        for (unsigned k = 0; k < n; ++k) z = system.forward(z);
        bool back;
        if constexpr (kTorus)
          back = z.is_exact() && x.is_exact() ? z == x : torus_distance(z, x) <= kPreimageResidual;
        else
          back = z == x;
        if constexpr (kTorus)
          csv << n << ',' << i << ",\"" << point_csv(leaves[i].point) << "\"," << (back ? 1 : 0) << '\n';
        else
          csv << n << ',' << i << ',' << point_csv(leaves[i].point) << ',' << (back ? 1 : 0) << '\n';
        pts.push_back(point_json(leaves[i].point));
      }
      levels.push_back(json{{"n", n}, {"count", leaves.size()}, {"points", std::move(pts)}});
    }
    out.results["levels"] = std::move(levels);
  } else if (kind == "fixpoints") {
    csv << "n,count,expected\n";
    json rows = json::array();
    for (unsigned n : depths) {
      const auto pts = system.fixed_points(n, policy.force ? SIZE_MAX : policy.leaf_cap);
      double expected;
      if constexpr (kTorus)
        expected = static_cast<double>(system.fixed_point_count(n));
      else
        expected = system.periodic_point_count(n);
      csv << n << ',' << pts.size() << ',' << io::format_double(expected) << '\n';
      rows.push_back(json{{"n", n}, {"count", pts.size()}, {"expected", expected}});
    }
    out.results["rows"] = std::move(rows);
  } else if (kind == "pressure") {
    double target;
    if constexpr (kTorus)
      target = phi.is_constant() ? system.hyperbolicity().entropy + phi.constant() : std::nan("");
    else
      target = std::get<GibbsOracle>(reference).as_markov().pressure();
    csv << "n,estimate,target\n";
    json rows = json::array();
    for (unsigned n : depths) {
      double est;
      if constexpr (kTorus)
        est = pressure_estimate(system, phi, n, policy.force ? SIZE_MAX : policy.leaf_cap);
      else
        est = pressure_estimate(system, phi, n);
      csv << n << ',' << io::format_double(est) << ',' << io::format_double(target) << '\n';
      rows.push_back(json{{"n", n}, {"estimate", est}});
    }
    out.results["target"] = std::isnan(target) ? json(nullptr) : json(target);
    out.results["rows"] = std::move(rows);
  } else if (kind == "mu-n") {
    csv << "n,g_id,weight,empirical,reference,abs_diff,distance\n";
    json rows = json::array();
    for (unsigned n : depths) {
      const auto mu = weighted_preimage_measure(system, phi, x, n, policy);
      const double dist = weak_star_distance(mu, reference, *dict);
      for (const auto& e : dict->entries()) {
        const double emp = integrate(mu, e.g);
        const double ref = reference_integral(reference, e.g);
        csv << n << ',' << test_function_id(e.g) << ',' << io::format_double(e.weight) << ',' << io::format_double(emp)
            << ',' << io::format_double(ref) << ',' << io::format_double(std::fabs(emp - ref)) << ','
            << io::format_double(dist) << '\n';
      }
      rows.push_back(json{{"n", n}, {"atoms", mu.size()}, {"distance", dist}});
      out.extra_files["measure_n" + std::to_string(n) + ".csv"] = io::to_csv(mu);
    }
    out.results["rows"] = std::move(rows);
  } else if (kind == "periodic-measure") {
    csv << "n,atoms,total_mass\n";
    json rows = json::array();
    for (unsigned n : depths) {
      const auto mu = periodic_point_measure(system, phi, n, policy.force ? SIZE_MAX : policy.leaf_cap);
      csv << n << ',' << mu.size() << ',' << io::format_double(mu.total_mass()) << '\n';
      rows.push_back(json{{"n", n}, {"atoms", mu.size()}});
      out.extra_files["periodic_n" + std::to_string(n) + ".csv"] = io::to_csv(mu);
      out.extra_files["periodic_n" + std::to_string(n) + ".json"] = io::to_json(mu).dump(1);
    }
    out.results["rows"] = std::move(rows);
  } else if (kind == "l1-stat") {
    const json& sc = cfg.at("sampler");
    SamplerSpec spec;
    const auto sk = sc.at("kind").get<std::string>();
    if (sk == "uniform-rational")
      spec.kind = SamplerSpec::Kind::UniformRational;
    else if (sk == "periodic-measure")
      spec.kind = SamplerSpec::Kind::PeriodicMeasure;
    else
      throw ConfigError("sampler.kind must be uniform-rational or periodic-measure");
    spec.seed = cfg.at("seed").get<std::uint64_t>();
    spec.denominator = sc.at("denominator").get<std::int64_t>();
    spec.depth = sc.at("depth").get<unsigned>();
    if (cfg.at("test_functions").empty()) throw ConfigError("l1-stat needs test_functions");
    const auto count = cfg.at("samples").get<std::size_t>();
    if (count == 0) throw ConfigError("samples must be >= 1");
    csv << "n,statistic,g_id,samples\n";
    json reports = json::array();
    for (const auto& t : cfg.at("test_functions")) {
      const TestFunction g = build_test_function(t);
      const auto rep = l1_convergence_report(system, phi, g, depths, spec, count, reference, policy, system_id);
      const std::string body = io::to_csv(rep);
      csv << body.substr(body.find('\n') + 1);
      reports.push_back(io::to_json(rep));
    }
    out.results["seed"] = spec.seed;
    out.results["reports"] = std::move(reports);
  } else if (kind == "pointwise") {
    const auto rep = pointwise_sequence(system, phi, x, *dict, depths, reference, cfg.at("tolerance").get<double>(),
                                        policy, system_id);
    csv << io::to_csv(rep);
    out.results["report"] = io::to_json(rep);
  } else {
    throw ConfigError("experiment '" + kind + "' is not available for this system type");
  }
  out.csv = csv.str();
  return out;
}

inline Output run_shift_only(const std::string& kind, const json& cfg, const ShiftSystem& s,
                             const LocallyConstantPotential& phi) {
  const MarkovOracle oracle(s, phi);
  Output out;
  std::ostringstream csv;
  if (kind == "lemma1-check") {
    const int max_past = cfg.at("lemma1").at("max_past").get<int>();
    const int max_future = cfg.at("lemma1").at("max_future").get<int>();
    csv << "past,future,direct,limit,difference\n";
    double worst = 0.0;
    std::size_t count = 0;
    const GibbsOracle go(oracle);
    for (int j = 0; j <= max_past; ++j)
      for (int k = 0; k <= max_future; ++k)
        for (const auto& w : s.legal_words(static_cast<std::size_t>(j + k))) {
          const Word past = w.substr(0, static_cast<std::size_t>(j));
          const Word future = w.substr(static_cast<std::size_t>(j));
          const auto lc = lifted_cylinder_measure(go, past, future);
          double d = 0.0;
          for (std::size_t n = lc.anchor_depth; n < lc.limit_by_depth.size(); ++n)
            d = std::max(d, std::fabs(lc.limit_by_depth[n] - lc.direct));
          worst = std::max(worst, d);
          ++count;
          csv << word_to_string(past) << ',' << word_to_string(future) << ',' << io::format_double(lc.direct) << ','
              << io::format_double(lc.limit) << ',' << io::format_double(d) << '\n';
        }
    out.results = json{{"cylinders", count}, {"max_difference", worst}};
  } else if (kind == "gibbs-ratio") {
    csv << "n,min_ratio,max_ratio,words\n";
    json rows = json::array();
    for (unsigned n : cfg.at("depths").get<std::vector<unsigned>>()) {
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      const auto words = s.legal_words(n);
      for (const auto& w : words) {
        const double r = gibbs_ratio(oracle, phi, legal_extension(s, w), n);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
      csv << n << ',' << io::format_double(lo) << ',' << io::format_double(hi) << ',' << words.size() << '\n';
      rows.push_back(json{{"n", n}, {"min_ratio", lo}, {"max_ratio", hi}, {"words", words.size()}});
    }
    out.results["rows"] = std::move(rows);
    out.results["pressure"] = oracle.pressure();
  } else {
    throw ConfigError("unsupported experiment '" + kind + "'");
  }
  out.csv = csv.str();
  return out;
}

}  // namespace detail

/// Runs a resolved config and returns its tables (no file I/O).
inline Output execute(const RunConfig& cfg) {
  const json& r = cfg.resolved;
  ExecutionPolicy policy;
  policy.threads = std::max(1U, r.at("threads").get<unsigned>());
  policy.force = r.at("force").get<bool>();
  policy.leaf_cap = r.at("leaf_cap").get<std::size_t>();
  for (unsigned n : r.at("depths").get<std::vector<unsigned>>())
    if (n == 0) throw ConfigError("depths must be positive");

  if (r.at("system").at("type") == "torus") {
    if (cfg.kind == "lemma1-check" || cfg.kind == "gibbs-ratio")
      throw ConfigError("experiment '" + cfg.kind + "' needs a shift system");
    const LatticeMap f = build_lattice_map(r.at("system"));
    const TorusPotential phi = build_torus_potential(r.at("potential"));
    TorusPoint x;
    try {
      x = io::parse_torus_point(r.at("point").get<std::vector<std::string>>());
    } catch (const std::exception& e) {
      throw ConfigError(std::string("point: ") + e.what());
    }
    if (x.dimension() != f.dimension()) throw ConfigError("point dimension differs from matrix");
    const TestDictionary dict = build_dictionary(r.at("dictionary"), f.dimension(), nullptr);
    // Haar is exact for constant potentials; otherwise a periodic-point measure stands in.
    Reference<TorusPoint> ref = phi.is_constant()
                                    ? Reference<TorusPoint>(GibbsOracle::haar(f.dimension()))
                                    : Reference<TorusPoint>(periodic_point_measure(f, phi, r.at("reference_depth").get<unsigned>()));
    std::ostringstream id;
    id << "torus" << f.matrix();
    return detail::run_generic(cfg.kind, r, f, phi, x, ref, &dict, policy, id.str());
  }
  const ShiftSystem s = build_shift(r.at("system"));
  const LocallyConstantPotential phi = build_shift_potential(s, r.at("potential"));
  if (cfg.kind == "lemma1-check" || cfg.kind == "gibbs-ratio") return detail::run_shift_only(cfg.kind, r, s, phi);
  ShiftPoint x;
  try {
    x = ShiftPoint(parse_word(r.at("point").at("head").get<std::string>()),
                   parse_word(r.at("point").at("tail").get<std::string>()));
  } catch (const std::exception& e) {
    throw ConfigError(std::string("point: ") + e.what());
  }
  if (!s.is_legal(x)) throw ConfigError("point is not a legal sequence of the shift");
  const TestDictionary dict = build_dictionary(r.at("dictionary"), 0, &s);
  const Reference<ShiftPoint> ref(GibbsOracle::markov(s, phi));
  return detail::run_generic(cfg.kind, r, s, phi, x, ref, &dict, policy,
                             "shift(s=" + std::to_string(s.alphabet()) + ")");
}

inline json manifest(const RunConfig& cfg, double seconds, const std::vector<std::string>& files) {
  json m;
  m["tool"] = "gibbs-run";
  m["version"] = kVersion;
  m["kind"] = cfg.kind;
  m["config"] = cfg.resolved;
  m["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                       std::to_string(EIGEN_MINOR_VERSION);
  m["json_version"] = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                      "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH);
#if defined(__clang__)
  m["compiler"] = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
  m["compiler"] = std::string("gcc ") + __VERSION__;
#endif
  m["wall_time_seconds"] = seconds;
  m["outputs"] = files;
  return m;
}

/// Full CLI behaviour: parse, run, write results.csv, results.json,
/// manifest.json and any per-depth files into out_dir. Returns an exit code.
inline int run(const json& input, const std::string& kind_hint, const std::filesystem::path& out_dir,
               const Overrides& ov = {}, std::ostream& err = std::cerr) {
  const auto start = std::chrono::steady_clock::now();
  try {
    const RunConfig cfg = resolve_config(input, kind_hint, ov);
    Output out = execute(cfg);
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> files;
    auto write = [&](const std::string& name, const std::string& body) {
      std::ofstream f(out_dir / name, std::ios::binary);
      if (!f) throw Error("cannot write " + (out_dir / name).string());
      f << body;
      files.push_back(name);
    };
    write("results.csv", out.csv);
    json results = out.results;
    results["kind"] = cfg.kind;
    results["seed"] = cfg.resolved.at("seed");
    write("results.json", results.dump(2) + "\n");
    for (const auto& [name, body] : out.extra_files) write(name, body);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write("manifest.json", manifest(cfg, secs, files).dump(2) + "\n");
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kBadConfig;
  } catch (const ResourceCapExceeded& e) {
    err << "resource cap exceeded: " << e.what() << " (use --force to override)\n";
    return kCapExceeded;
  } catch (const CertificationFailure& e) {
    err << "certification failure: " << e.what() << '\n';
    return kCertification;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kBadConfig;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << '\n';
    return kBadConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace gibbs::cli
