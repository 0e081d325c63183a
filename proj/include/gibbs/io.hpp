#pragma once

#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gibbs/errors.hpp"
#include "gibbs/estimators.hpp"
#include "gibbs/measure.hpp"

namespace gibbs::io {

using json = nlohmann::ordered_json;

/// Shortest round-tripping decimal form of a double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Parses "p/q", "p" or a decimal into a (num, den) pair; decimals return den == 0.
inline std::pair<std::int64_t, std::int64_t> parse_fraction(std::string_view s, double* real_out = nullptr) {
  const std::string text(s);
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      std::size_t used = 0;
      const std::int64_t p = std::stoll(text.substr(0, slash), &used);
      if (used != slash) throw InvalidArgument("bad numerator");
      const std::string den = text.substr(slash + 1);
      const std::int64_t q = std::stoll(den, &used);
      if (used != den.size() || q <= 0) throw InvalidArgument("bad denominator");
      return {p, q};
    }
    if (text.find_first_of(".eE") == std::string::npos) {
      std::size_t used = 0;
      const std::int64_t p = std::stoll(text, &used);
      if (used != text.size()) throw InvalidArgument("bad integer");
      return {p, 1};
    }
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw InvalidArgument("bad decimal");
    if (real_out) *real_out = v;
    return {0, 0};
  } catch (const std::logic_error&) {
    throw InvalidArgument("cannot parse coordinate '" + text + "'");
  }
}

/// Torus point from coordinate strings; all exact gives an exact point.
inline TorusPoint parse_torus_point(const std::vector<std::string>& coords) {
  if (coords.empty()) throw InvalidArgument("torus point needs coordinates");
  std::vector<std::pair<std::int64_t, std::int64_t>> fr;
  std::vector<double> real;
  bool exact = true;
  for (const auto& c : coords) {
    double v = 0.0;
    auto f = parse_fraction(c, &v);
    if (f.second == 0) {
      exact = false;
      real.push_back(v);
    } else {
      real.push_back(static_cast<double>(f.first) / static_cast<double>(f.second));
    }
    fr.push_back(f);
  }
  return exact ? TorusPoint::from_fractions(fr) : TorusPoint::real(real);
}

/// "1/2,0" style comma-separated coordinates.
inline TorusPoint parse_torus_point(std::string_view text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parse_torus_point(parts);
}

inline std::vector<std::string> coord_strings(const TorusPoint& p) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < p.dimension(); ++i) out.push_back(p.coord_string(i));
  return out;
}

// --- measures --------------------------------------------------------------

inline std::string to_csv(const TorusMeasure& mu) {
  std::ostringstream os;
  const std::size_t m = mu.atoms().front().point.dimension();
  for (std::size_t i = 0; i < m; ++i) os << 'x' << i << ',';
  os << "weight\n";
  for (const auto& a : mu.atoms()) {
    for (std::size_t i = 0; i < m; ++i) os << a.point.coord_string(i) << ',';
    os << format_double(a.weight) << '\n';
  }
  return os.str();
}

inline std::string to_csv(const ShiftMeasure& mu) {
  std::ostringstream os;
  os << "head,tail,weight\n";
  for (const auto& a : mu.atoms())
    os << word_to_string(a.point.head()) << ',' << word_to_string(a.point.tail()) << ',' << format_double(a.weight)
       << '\n';
  return os.str();
}

inline std::string to_csv(const AnyMeasure& mu) {
  return std::visit([](const auto& m) { return to_csv(m); }, mu);
}

inline json to_json(const TorusMeasure& mu) {
  json atoms = json::array();
  for (const auto& a : mu.atoms()) atoms.push_back({{"point", coord_strings(a.point)}, {"weight", a.weight}});
  return {{"space", "torus"}, {"dimension", mu.atoms().front().point.dimension()}, {"atoms", std::move(atoms)}};
}

inline json to_json(const ShiftMeasure& mu) {
  json atoms = json::array();
  for (const auto& a : mu.atoms())
    atoms.push_back({{"head", word_to_string(a.point.head())}, {"tail", word_to_string(a.point.tail())}, {"weight", a.weight}});
  return {{"space", "shift"}, {"atoms", std::move(atoms)}};
}

inline json to_json(const AnyMeasure& mu) {
  return std::visit([](const auto& m) { return to_json(m); }, mu);
}

inline AnyMeasure measure_from_json(const json& j) {
  try {
    const std::string space = j.at("space").get<std::string>();
    if (space == "torus") {
      std::vector<Atom<TorusPoint>> atoms;
      for (const auto& a : j.at("atoms"))
        atoms.push_back({parse_torus_point(a.at("point").get<std::vector<std::string>>()), a.at("weight").get<double>()});
      return TorusMeasure(std::move(atoms));
    }
    if (space == "shift") {
      std::vector<Atom<ShiftPoint>> atoms;
      for (const auto& a : j.at("atoms"))
        atoms.push_back({ShiftPoint(parse_word(a.at("head").get<std::string>()), parse_word(a.at("tail").get<std::string>())),
                         a.at("weight").get<double>()});
      return ShiftMeasure(std::move(atoms));
    }
    throw InvalidArgument("unknown measure space '" + space + "'");
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed measure JSON: ") + e.what());
  }
}

// --- convergence reports ---------------------------------------------------

inline std::string to_csv(const ConvergenceReport& r) {
  std::ostringstream os;
  os << "n,statistic,g_id,samples\n";
  for (const auto& row : r.rows) os << row.n << ',' << format_double(row.statistic) << ',' << r.g_id << ',' << r.samples << '\n';
  return os.str();
}

inline json to_json(const ConvergenceReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) rows.push_back({{"n", row.n}, {"statistic", row.statistic}});
  return {{"g_id", r.g_id},         {"system_id", r.system_id},     {"sampling", r.sampling},
          {"samples", r.samples},   {"tolerance", r.tolerance},     {"minimum", r.minimum()},
          {"reaches_tolerance", r.reaches_tolerance()}, {"rows", std::move(rows)}};
}

}  // namespace gibbs::io
