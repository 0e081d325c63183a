#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "gibbs/errors.hpp"
#include "gibbs/integrate.hpp"
#include "gibbs/measure.hpp"
#include "gibbs/oracle.hpp"
#include "gibbs/preimage_tree.hpp"
#include "gibbs/shift.hpp"
#include "gibbs/toral.hpp"

namespace gibbs {

// ---------------------------------------------------------------------------
// The weighted preimage measure
//
//   mu_n^x = (1/n) sum_{y in f^{-n} x} [e^{S_n phi(y)} / sum_z e^{S_n phi(z)}]
//                  * sum_{i<n} delta_{f^i y}
//
// f^i y sits at tree level n - i, so every node at levels 1..n is an atom
// whose mass is the total leaf weight below it, divided by n.
// ---------------------------------------------------------------------------

template <PreimageSystem System>
AtomicMeasure<typename System::point_type> measure_from_tree(const PreimageTree<System>& tree) {
  using P = typename System::point_type;
  const unsigned n = tree.depth();
  if (n == 0) throw InvalidArgument("depth must be >= 1");
  const auto mass = tree.subtree_masses();
  std::vector<Atom<P>> contributions;
  for (unsigned l = 1; l <= n; ++l) {
    const auto nodes = tree.level(l);
    for (std::size_t i = 0; i < nodes.size(); ++i)
      contributions.push_back({nodes[i].point, mass[l][i] / static_cast<double>(n)});
  }
  return AtomicMeasure<P>::merged(contributions);
}

template <PreimageSystem System, PotentialOn<typename System::point_type> Phi>
AtomicMeasure<typename System::point_type> weighted_preimage_measure(const System& system, const Phi& phi,
                                                                     const typename System::point_type& x,
                                                                     unsigned n, const ExecutionPolicy& policy = {}) {
  if (n == 0) throw InvalidArgument("depth must be >= 1");
  PreimageTree<System> tree(system, phi, x, n, policy);
  return measure_from_tree(tree);
}

// ---------------------------------------------------------------------------
// Periodic points
// ---------------------------------------------------------------------------

template <class System, class Phi>
double birkhoff_sum(const System& system, const Phi& phi, typename System::point_type y, unsigned n) {
  double s = 0.0;
  for (unsigned i = 0; i < n; ++i) {
    s += phi(y);
    if (i + 1 < n) y = system.forward(y);
  }
  return s;
}

/// (1 / sum e^{S_n phi}) sum_{x in Fix(f^n)} e^{S_n phi(x)} delta_x.
template <class System, class Phi>
AtomicMeasure<typename System::point_type> periodic_point_measure(const System& system, const Phi& phi, unsigned n,
                                                                  std::size_t cap = kDefaultEnumerationCap) {
  using P = typename System::point_type;
  auto points = system.fixed_points(n, cap);
  std::vector<double> s(points.size());
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    s[i] = birkhoff_sum(system, phi, points[i], n);
    mx = std::max(mx, s[i]);
  }
  double z = 0.0;
  for (auto& v : s) {
    v = std::exp(v - mx);
    z += v;
  }
  std::vector<Atom<P>> atoms;
  atoms.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) atoms.push_back({std::move(points[i]), s[i] / z});
  return AtomicMeasure<P>::merged(atoms);
}

/// (1/n) log sum_{Fix(f^n)} e^{S_n phi}, by explicit enumeration.
template <class System, class Phi>
double pressure_by_enumeration(const System& system, const Phi& phi, unsigned n,
                               std::size_t cap = kDefaultEnumerationCap) {
  const auto points = system.fixed_points(n, cap);
  std::vector<double> s;
  s.reserve(points.size());
  double mx = -std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    s.push_back(birkhoff_sum(system, phi, p, n));
    mx = std::max(mx, s.back());
  }
  double z = 0.0;
  for (double v : s) z += std::exp(v - mx);
  return (mx + std::log(z)) / static_cast<double>(n);
}

/// Unperturbed maps with constant potential use the exact count |det(A^n - I)|;
/// everything else enumerates Fix(f^n).
inline double pressure_estimate(const LatticeMap& f, const TorusPotential& phi, unsigned n,
                                std::size_t cap = kDefaultEnumerationCap) {
  if (n == 0) throw InvalidArgument("n must be positive");
  if (phi.is_constant() && !f.perturbed())
    return std::log(static_cast<double>(f.fixed_point_count(n))) / static_cast<double>(n) + phi.constant();
  return pressure_by_enumeration(f, phi, n, cap);
}

/// Shifts: sum over Fix(sigma^n) of e^{S_n phi} equals tr(M^n) for the transfer matrix.
inline double pressure_estimate(const ShiftSystem& s, const LocallyConstantPotential& phi, unsigned n) {
  return MarkovOracle(s, phi).log_trace_power(n);
}

// ---------------------------------------------------------------------------
// Convergence statistics
// ---------------------------------------------------------------------------

/// (1/n) sum_{i<n} g(f^i y) - I.
template <class System>
double birkhoff_deviation(const System& system, double oracle_value, const TestFunction& g,
                          typename System::point_type y, unsigned n) {
  if (n == 0) throw InvalidArgument("n must be positive");
  detail::Accumulator acc;
  for (unsigned i = 0; i < n; ++i) {
    acc.add(evaluate(g, y));
    if (i + 1 < n) y = system.forward(y);
  }
  return acc.value() / static_cast<double>(n) - oracle_value;
}

/// How base points x are drawn for the averaged statistic.
struct SamplerSpec {
  enum class Kind { UniformRational, PeriodicMeasure };
  Kind kind = Kind::PeriodicMeasure;
  std::uint64_t seed = 0;
  std::int64_t denominator = 9973;  ///< UniformRational: x = (k_1/q, ..., k_m/q)
  unsigned depth = 14;              ///< PeriodicMeasure: period N_0

  [[nodiscard]] std::string describe() const {
    if (kind == Kind::UniformRational)
      return "uniform-rational(q=" + std::to_string(denominator) + ",seed=" + std::to_string(seed) + ")";
    return "periodic-measure(N0=" + std::to_string(depth) + ",seed=" + std::to_string(seed) + ")";
  }
};

inline std::vector<TorusPoint> sample_uniform_rational(std::size_t dim, std::int64_t q, std::size_t count,
                                                       std::uint64_t seed) {
  if (q < 1) throw InvalidArgument("sampling denominator must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> dist(0, q - 1);
  std::vector<TorusPoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<std::int64_t> num(dim);
    for (auto& v : num) v = dist(rng);
    out.push_back(TorusPoint::exact(q, std::move(num)));
  }
  return out;
}

template <class P>
std::vector<P> sample_from(const AtomicMeasure<P>& mu, std::size_t count, std::uint64_t seed) {
  std::vector<double> w;
  w.reserve(mu.size());
  for (const auto& a : mu.atoms()) w.push_back(a.weight);
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> dist(w.begin(), w.end());
  std::vector<P> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(mu.atoms()[dist(rng)].point);
  return out;
}

template <class System, class Phi>
std::vector<typename System::point_type> sample_points(const System& system, const Phi& phi, const SamplerSpec& spec,
                                                       std::size_t count) {
  if (count == 0) throw InvalidArgument("need at least one sample");
  if (spec.kind == SamplerSpec::Kind::UniformRational) {
    if constexpr (std::is_same_v<typename System::point_type, TorusPoint>) {
      return sample_uniform_rational(system.dimension(), spec.denominator, count, spec.seed);
    } else {
      throw PhaseSpaceMismatch("uniform rational sampling is only defined on the torus");
    }
  }
  return sample_from(periodic_point_measure(system, phi, spec.depth), count, spec.seed);
}

/// (1/N) sum_j |<mu_n^{x_j}, g> - <mu_phi, g>| for fixed sample points.
template <PreimageSystem System, class Phi>
double l1_convergence_statistic(const System& system, const Phi& phi, const TestFunction& g, unsigned n,
                                const std::vector<typename System::point_type>& samples,
                                const Reference<typename System::point_type>& reference,
                                const ExecutionPolicy& policy = {}) {
  if (samples.empty()) throw InvalidArgument("need at least one sample");
  const double target = reference_integral(reference, g);
  detail::Accumulator acc;
  for (const auto& x : samples) acc.add(std::fabs(integrate(weighted_preimage_measure(system, phi, x, n, policy), g) - target));
  return acc.value() / static_cast<double>(samples.size());
}

template <PreimageSystem System, class Phi>
double l1_convergence_statistic(const System& system, const Phi& phi, const TestFunction& g, unsigned n,
                                const SamplerSpec& sampler, std::size_t count,
                                const Reference<typename System::point_type>& reference,
                                const ExecutionPolicy& policy = {}) {
  return l1_convergence_statistic(system, phi, g, n, sample_points(system, phi, sampler, count), reference, policy);
}

/// Per-n values of one scalar statistic.
struct ConvergenceReport {
  struct Row {
    unsigned n = 0;
    double statistic = 0.0;
  };
  std::vector<Row> rows;
  std::string g_id;
  std::string system_id;
  std::string sampling;
  std::size_t samples = 1;
  double tolerance = 0.0;

  [[nodiscard]] double minimum() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) m = std::min(m, r.statistic);
    return m;
  }
  /// Some n in the list reaches the tolerance (subsequence semantics).
  [[nodiscard]] bool reaches_tolerance() const { return minimum() <= tolerance; }
};

inline void check_increasing(const std::vector<unsigned>& ns) {
  if (ns.empty()) throw InvalidArgument("empty depth list");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] == 0) throw InvalidArgument("depths must be positive");
    if (i > 0 && ns[i] <= ns[i - 1]) throw InvalidArgument("depth list must be strictly increasing");
  }
}

/// The l1 statistic over a depth list, one shared sample set for all n.
template <PreimageSystem System, class Phi>
ConvergenceReport l1_convergence_report(const System& system, const Phi& phi, const TestFunction& g,
                                        const std::vector<unsigned>& ns, const SamplerSpec& sampler,
                                        std::size_t count, const Reference<typename System::point_type>& reference,
                                        const ExecutionPolicy& policy = {}, std::string system_id = {}) {
  check_increasing(ns);
  const auto samples = sample_points(system, phi, sampler, count);
  ConvergenceReport rep;
  rep.g_id = test_function_id(g);
  rep.system_id = std::move(system_id);
  rep.sampling = sampler.describe();
  rep.samples = count;
  for (unsigned n : ns) rep.rows.push_back({n, l1_convergence_statistic(system, phi, g, n, samples, reference, policy)});
  return rep;
}

/// weak_star_distance(mu_n^z, reference, dict) for each n in the list.
template <PreimageSystem System, class Phi>
ConvergenceReport pointwise_sequence(const System& system, const Phi& phi, const typename System::point_type& z,
                                     const TestDictionary& dict, const std::vector<unsigned>& ns,
                                     const Reference<typename System::point_type>& reference, double tolerance = 0.0,
                                     const ExecutionPolicy& policy = {}, std::string system_id = {}) {
  check_increasing(ns);
  ConvergenceReport rep;
  rep.g_id = "dictionary(" + std::to_string(dict.size()) + ")";
  rep.system_id = std::move(system_id);
  rep.sampling = "fixed-point";
  rep.samples = 1;
  rep.tolerance = tolerance;
  for (unsigned n : ns)
    rep.rows.push_back({n, weak_star_distance(weighted_preimage_measure(system, phi, z, n, policy), reference, dict)});
  return rep;
}

}  // namespace gibbs
