#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <variant>

#include "gibbs/errors.hpp"
#include "gibbs/measure.hpp"
#include "gibbs/oracle.hpp"
#include "gibbs/test_function.hpp"

namespace gibbs {

namespace detail {

/// Neumaier compensated summation.
class Accumulator {
 public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += std::fabs(sum_) >= std::fabs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace detail

/// sum over atoms of weight * g(point).
template <class P>
double integrate(const AtomicMeasure<P>& mu, const TestFunction& g) {
  check_test_function(g);
  detail::Accumulator acc;
  for (const auto& a : mu.atoms()) {
    const double v = evaluate(g, a.point);
    if (v != 0.0) acc.add(a.weight * v);
  }
  return acc.value();
}

inline double integrate(const AnyMeasure& mu, const TestFunction& g) {
  return std::visit([&](const auto& m) { return integrate(m, g); }, mu);
}

inline double integrate(const GibbsOracle& oracle, const TestFunction& g) { return oracle.integrate(g); }

/// sum weight * exp(-2 pi i k.x).
inline std::complex<double> fourier_coefficient(const TorusMeasure& mu, std::span<const std::int64_t> k) {
  detail::Accumulator re, im;
  for (const auto& a : mu.atoms()) {
    const double th = -2.0 * std::numbers::pi * a.point.phase(k);
    re.add(a.weight * std::cos(th));
    im.add(a.weight * std::sin(th));
  }
  return {re.value(), im.value()};
}

inline std::complex<double> fourier_coefficient(const AnyMeasure& mu, std::span<const std::int64_t> k) {
  if (!std::holds_alternative<TorusMeasure>(mu)) throw PhaseSpaceMismatch("Fourier coefficient of a shift measure");
  return fourier_coefficient(std::get<TorusMeasure>(mu), k);
}

/// Reference side of a weak-* comparison: another atomic measure or an oracle.
template <class P>
using Reference = std::variant<AtomicMeasure<P>, GibbsOracle>;

template <class P>
double reference_integral(const Reference<P>& ref, const TestFunction& g) {
  return std::visit([&](const auto& r) { return integrate(r, g); }, ref);
}

/// max over the dictionary of w(g) |<mu, g> - <nu, g>|.
template <class P>
double weak_star_distance(const AtomicMeasure<P>& mu, const Reference<P>& nu, const TestDictionary& dict) {
  if (dict.empty()) throw EmptyDictionary("weak-* distance needs a nonempty dictionary");
  double d = 0.0;
  for (const auto& e : dict.entries())
    d = std::max(d, e.weight * std::fabs(integrate(mu, e.g) - reference_integral(nu, e.g)));
  return d;
}

template <class P>
double weak_star_distance(const AtomicMeasure<P>& mu, const AtomicMeasure<P>& nu, const TestDictionary& dict) {
  return weak_star_distance(mu, Reference<P>(nu), dict);
}

template <class P>
double weak_star_distance(const AtomicMeasure<P>& mu, const GibbsOracle& nu, const TestDictionary& dict) {
  return weak_star_distance(mu, Reference<P>(nu), dict);
}

/// Sum of w(g) |<mu,g> - <nu,g>| / sum w(g): a single smoothed summary number.
template <class P>
double weak_star_summary(const AtomicMeasure<P>& mu, const Reference<P>& nu, const TestDictionary& dict) {
  if (dict.empty()) throw EmptyDictionary("weak-* summary needs a nonempty dictionary");
  double num = 0.0, den = 0.0;
  for (const auto& e : dict.entries()) {
    num += e.weight * std::fabs(integrate(mu, e.g) - reference_integral(nu, e.g));
    den += e.weight;
  }
  return num / den;
}

}  // namespace gibbs
