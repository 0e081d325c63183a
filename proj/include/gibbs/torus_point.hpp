#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "gibbs/errors.hpp"
#include "gibbs/integer_matrix.hpp"

namespace gibbs {

/// A point of the m-torus [0,1)^m.
///
/// Exact points share one positive denominator q across coordinates and keep
/// numerators in [0, q) with gcd(q, numerators) == 1, so equal points have
/// equal representations. Real points (produced only by perturbed maps)
/// keep binary64 coordinates reduced into [0, 1).
class TorusPoint {
 public:
  TorusPoint() = default;

  static TorusPoint exact(std::int64_t den, std::vector<std::int64_t> num) {
    if (den <= 0) throw InvalidArgument("torus denominator must be positive");
    TorusPoint p;
    p.exact_ = true;
    p.den_ = den;
    p.num_ = std::move(num);
    p.normalize();
    return p;
  }

  /// Coordinates given as separate fractions p_i / q_i.
  static TorusPoint from_fractions(const std::vector<std::pair<std::int64_t, std::int64_t>>& coords) {
    std::int64_t den = 1;
    for (const auto& [p, q] : coords) {
      if (q <= 0) throw InvalidArgument("torus denominator must be positive");
      den = checked::mul(den / std::gcd(den, q), q);
    }
    std::vector<std::int64_t> num;
    num.reserve(coords.size());
    for (const auto& [p, q] : coords) num.push_back(floor_mod(static_cast<__int128>(p) * (den / q), den));
    return exact(den, std::move(num));
  }

  static TorusPoint real(std::vector<double> coords) {
    TorusPoint p;
    p.exact_ = false;
    for (double& c : coords) c = wrap(c);
    p.real_ = std::move(coords);
    return p;
  }

  static TorusPoint origin(std::size_t m) { return exact(1, std::vector<std::int64_t>(m, 0)); }

  [[nodiscard]] bool is_exact() const { return exact_; }
  [[nodiscard]] std::size_t dimension() const { return exact_ ? num_.size() : real_.size(); }
  [[nodiscard]] std::int64_t denominator() const { return den_; }
  [[nodiscard]] std::span<const std::int64_t> numerators() const { return num_; }

  [[nodiscard]] double coord(std::size_t i) const {
    return exact_ ? static_cast<double>(num_[i]) / static_cast<double>(den_) : real_[i];
  }

  [[nodiscard]] std::vector<double> coords() const {
    std::vector<double> out(dimension());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = coord(i);
    return out;
  }

  /// k . x mod 1, in [0, 1). Exact points reduce the pairing in integers first.
  [[nodiscard]] double phase(std::span<const std::int64_t> k) const {
    if (k.size() != dimension()) throw InvalidArgument("frequency vector has wrong dimension");
    if (exact_) {
      __int128 acc = 0;
      for (std::size_t i = 0; i < k.size(); ++i) acc += static_cast<__int128>(k[i]) * num_[i];
      return static_cast<double>(floor_mod(acc, den_)) / static_cast<double>(den_);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) acc += static_cast<double>(k[i]) * real_[i];
    return wrap(acc);
  }

  /// "p/q" (reduced per coordinate) for exact points, %.17g decimals otherwise.
  [[nodiscard]] std::string coord_string(std::size_t i) const {
    if (exact_) {
      std::int64_t g = std::gcd(num_[i], den_);
      std::int64_t p = num_[i] / g, q = den_ / g;
      return q == 1 ? std::to_string(p) : std::to_string(p) + "/" + std::to_string(q);
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", real_[i]);
    return buf;
  }

  friend bool operator==(const TorusPoint& a, const TorusPoint& b) {
    if (a.exact_ != b.exact_) return false;
    return a.exact_ ? (a.den_ == b.den_ && a.num_ == b.num_) : a.real_ == b.real_;
  }

  /// Lexicographic by coordinate value; exact points order before real ones.
  friend bool operator<(const TorusPoint& a, const TorusPoint& b) {
    if (a.exact_ != b.exact_) return a.exact_;
    if (a.dimension() != b.dimension()) return a.dimension() < b.dimension();
    if (!a.exact_) return a.real_ < b.real_;
    for (std::size_t i = 0; i < a.num_.size(); ++i) {
      __int128 l = static_cast<__int128>(a.num_[i]) * b.den_;
      __int128 r = static_cast<__int128>(b.num_[i]) * a.den_;
      if (l != r) return l < r;
    }
    return false;
  }

  [[nodiscard]] std::size_t hash() const {
    std::size_t h = exact_ ? std::hash<std::int64_t>{}(den_) : 0x9e3779b97f4a7c15ULL;
    auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    if (exact_)
      for (auto v : num_) mix(std::hash<std::int64_t>{}(v));
    else
      for (auto v : real_) mix(std::hash<double>{}(v));
    return h;
  }

  static double wrap(double v) {
    double r = v - std::floor(v);
    return r >= 1.0 ? 0.0 : r;
  }

 private:
  void normalize() {
    std::int64_t g = den_;
    for (auto& v : num_) {
      v = floor_mod(v, den_);
      g = std::gcd(g, v);
    }
    if (g > 1) {
      den_ /= g;
      for (auto& v : num_) v /= g;
    }
  }

  bool exact_ = true;
  std::int64_t den_ = 1;
  std::vector<std::int64_t> num_;
  std::vector<double> real_;
};

/// Sup-norm distance on the torus.
inline double torus_distance(const TorusPoint& a, const TorusPoint& b) {
  if (a.dimension() != b.dimension()) throw InvalidArgument("torus dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    double diff = std::fabs(a.coord(i) - b.coord(i));
    d = std::max(d, std::min(diff, 1.0 - diff));
  }
  return d;
}

}  // namespace gibbs

template <>
struct std::hash<gibbs::TorusPoint> {
  std::size_t operator()(const gibbs::TorusPoint& p) const noexcept { return p.hash(); }
};
