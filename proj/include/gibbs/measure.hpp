#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <variant>
#include <vector>

#include "gibbs/errors.hpp"
#include "gibbs/shift_point.hpp"
#include "gibbs/torus_point.hpp"

namespace gibbs {

using Point = std::variant<TorusPoint, ShiftPoint>;

template <class P>
struct Atom {
  P point;
  double weight = 0.0;
};

inline constexpr double kMassTolerance = 1e-12;

/// Finitely supported probability measure.
///
/// Construction validates: finite nonnegative weights summing to one within
/// kMassTolerance, and (for torus points) a common dimension.
template <class P>
class AtomicMeasure {
 public:
  using point_type = P;

  AtomicMeasure() = default;
  explicit AtomicMeasure(std::vector<Atom<P>> atoms) : atoms_(std::move(atoms)) { validate(); }

  static AtomicMeasure dirac(P p) { return AtomicMeasure({Atom<P>{std::move(p), 1.0}}); }

  static AtomicMeasure uniform(std::vector<P> points) {
    if (points.empty()) throw InvalidMeasure("uniform measure on an empty set");
    const double w = 1.0 / static_cast<double>(points.size());
    std::vector<Atom<P>> atoms;
    atoms.reserve(points.size());
    for (auto& p : points) atoms.push_back({std::move(p), w});
    return AtomicMeasure(std::move(atoms));
  }

  /// Merges repeated points by adding weights (in input order) and sorts atoms
  /// by point; the input order fixes the floating-point summation order.
  static AtomicMeasure merged(const std::vector<Atom<P>>& contributions) {
    std::unordered_map<P, std::size_t> index;
    index.reserve(contributions.size());
    std::vector<Atom<P>> atoms;
    for (const auto& c : contributions) {
      auto [it, inserted] = index.try_emplace(c.point, atoms.size());
      if (inserted)
        atoms.push_back(c);
      else
        atoms[it->second].weight += c.weight;
    }
    std::sort(atoms.begin(), atoms.end(), [](const Atom<P>& a, const Atom<P>& b) { return a.point < b.point; });
    return AtomicMeasure(std::move(atoms));
  }

  [[nodiscard]] const std::vector<Atom<P>>& atoms() const { return atoms_; }
  [[nodiscard]] std::size_t size() const { return atoms_.size(); }
  [[nodiscard]] bool empty() const { return atoms_.empty(); }

  [[nodiscard]] double total_mass() const {
    double s = 0.0, c = 0.0;  // Neumaier
    for (const auto& a : atoms_) {
      double t = s + a.weight;
      c += std::fabs(s) >= std::fabs(a.weight) ? (s - t) + a.weight : (a.weight - t) + s;
      s = t;
    }
    return s + c;
  }

  /// Convex combination t*this + (1-t)*other, duplicates merged.
  [[nodiscard]] AtomicMeasure mix(const AtomicMeasure& other, double t) const {
    std::vector<Atom<P>> all;
    all.reserve(atoms_.size() + other.atoms_.size());
    for (const auto& a : atoms_) all.push_back({a.point, t * a.weight});
    for (const auto& a : other.atoms_) all.push_back({a.point, (1.0 - t) * a.weight});
    return merged(all);
  }

 private:
  void validate() const {
    if (atoms_.empty()) throw InvalidMeasure("measure has no atoms");
    for (const auto& a : atoms_) {
      if (!std::isfinite(a.weight) || a.weight < 0.0) throw InvalidMeasure("negative or non-finite weight");
      if constexpr (std::is_same_v<P, TorusPoint>) {
        if (a.point.dimension() != atoms_.front().point.dimension())
          throw InvalidMeasure("atoms on tori of different dimension");
      }
    }
    const double m = total_mass();
    if (std::fabs(m - 1.0) > kMassTolerance)
      throw InvalidMeasure("weights sum to " + std::to_string(m) + ", not 1");
  }

  std::vector<Atom<P>> atoms_;
};

using TorusMeasure = AtomicMeasure<TorusPoint>;
using ShiftMeasure = AtomicMeasure<ShiftPoint>;

/// Measure whose phase space is known only at run time (CLI, file input).
using AnyMeasure = std::variant<TorusMeasure, ShiftMeasure>;

}  // namespace gibbs
