#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "gibbs/errors.hpp"
#include "gibbs/shift.hpp"
#include "gibbs/test_function.hpp"

namespace gibbs {

/// Perron eigendata of a nonnegative primitive matrix.
struct PerronData {
  double value = 0.0;             ///< Perron root lambda
  std::vector<double> left;       ///< l M = lambda l, l > 0
  std::vector<double> right;      ///< M r = lambda r, r > 0, l . r = 1
  int iterations = 0;
};

inline constexpr double kPerronTolerance = 1e-14;

namespace detail {

using Dense = std::vector<std::vector<double>>;

inline std::vector<double> power_iterate(const Dense& m, bool transpose, double& lambda, int& iterations) {
  const std::size_t n = m.size();
  std::vector<double> v(n, 1.0 / static_cast<double>(n)), w(n);
  lambda = 0.0;
  for (iterations = 1; iterations <= 1'000'000; ++iterations) {
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += (transpose ? m[j][i] : m[i][j]) * v[j];
      w[i] = acc;
      norm += acc;
    }
    if (!(norm > 0.0)) throw Error("power iteration collapsed to zero");
    double change = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] /= norm;
      change = std::max(change, std::fabs(w[i] - v[i]));
      scale = std::max(scale, std::fabs(w[i]));
    }
    v.swap(w);
    lambda = norm;  // v had unit l1 norm
    if (change <= kPerronTolerance * scale) return v;
  }
  throw Error("power iteration did not converge");
}

}  // namespace detail

inline PerronData perron(const detail::Dense& m) {
  PerronData p;
  int it_r = 0, it_l = 0;
  double lam_r = 0.0, lam_l = 0.0;
  p.right = detail::power_iterate(m, false, lam_r, it_r);
  p.left = detail::power_iterate(m, true, lam_l, it_l);
  // Rayleigh-style refinement: lambda = (l M r) / (l r)
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j) row += m[i][j] * p.right[j];
    num += p.left[i] * row;
    den += p.left[i] * p.right[i];
  }
  p.value = num / den;
  for (auto& v : p.left) v /= den;
  p.iterations = std::max(it_r, it_l);
  return p;
}

/// Exact Gibbs measure of a locally constant potential on an SFT.
///
/// States are symbols for range 1 (M_ab = A_ab e^{phi(a)}) and legal blocks of
/// length r-1 for range r >= 2 (M_{B,B'} = e^{phi(B b')} when B' extends B by
/// b'). For r = 2 the blocks are single symbols and M_ab = A_ab e^{phi(ab)}.
class MarkovOracle {
 public:
  MarkovOracle(ShiftSystem system, const LocallyConstantPotential& phi)
      : system_(std::move(system)), range_(phi.range()) {
    if (phi.alphabet() != system_.alphabet()) throw InvalidArgument("potential alphabet differs from system");
    block_ = range_ == 1 ? 1 : static_cast<std::size_t>(range_ - 1);
    states_ = system_.legal_words(block_);
    for (std::size_t i = 0; i < states_.size(); ++i) index_[states_[i]] = i;
    const std::size_t n = states_.size();
    matrix_.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const Word& a = states_[i];
        const Word& b = states_[j];
        if (a.substr(1) != b.substr(0, block_ - 1)) continue;
        const Word joined = a + b.back();
        if (!system_.is_legal(joined)) continue;
        matrix_[i][j] = std::exp(range_ == 1 ? phi.value(a) : phi.value(joined));
      }
    perron_ = perron(matrix_);
  }

  [[nodiscard]] const ShiftSystem& system() const { return system_; }
  [[nodiscard]] int range() const { return range_; }
  [[nodiscard]] double pressure() const { return std::log(perron_.value); }
  [[nodiscard]] const PerronData& perron_data() const { return perron_; }
  [[nodiscard]] const std::vector<std::vector<double>>& transfer_matrix() const { return matrix_; }
  [[nodiscard]] const std::vector<Word>& states() const { return states_; }

  /// mu[w] = l_{b_0} prod (M_{b_i b_{i+1}} / lambda) r_{b_last} over the block
  /// path of w; words shorter than a block are summed over their extensions.
  [[nodiscard]] double cylinder_measure(const Word& w) const {
    if (w.empty()) return 1.0;
    if (!system_.is_legal(w)) return 0.0;
    if (w.size() < block_) return sum_extensions(w, [this](const Word& e) { return cylinder_measure(e); });
    const auto path = block_path(w);
    double v = perron_.left[path.front()];
    for (std::size_t i = 0; i + 1 < path.size(); ++i) v *= matrix_[path[i]][path[i + 1]] / perron_.value;
    return v * perron_.right[path.back()];
  }

  /// Two-sided stationary Markov chain value pi_{b_0} prod P_{b_i b_{i+1}},
  /// with P_ab = M_ab r_b / (lambda r_a) and pi_a = l_a r_a.
  [[nodiscard]] double stationary_chain_measure(const Word& w) const {
    if (w.empty()) return 1.0;
    if (!system_.is_legal(w)) return 0.0;
    if (w.size() < block_) return sum_extensions(w, [this](const Word& e) { return stationary_chain_measure(e); });
    const auto path = block_path(w);
    const auto& l = perron_.left;
    const auto& r = perron_.right;
    double v = l[path.front()] * r[path.front()];
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      const std::size_t a = path[i], b = path[i + 1];
      v *= matrix_[a][b] * r[b] / (perron_.value * r[a]);
    }
    return v;
  }

  /// (1/n) log tr(M^n), i.e. (1/n) log of the sum of e^{S_n phi} over Fix(sigma^n),
  /// with per-step rescaling so large n does not overflow.
  [[nodiscard]] double log_trace_power(unsigned n) const {
    if (n == 0) throw InvalidArgument("power must be positive");
    const std::size_t s = matrix_.size();
    auto p = matrix_;
    double log_scale = 0.0;
    for (unsigned k = 1; k < n; ++k) {
      auto q = p;
      double mx = 0.0;
      for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) {
          double acc = 0.0;
          for (std::size_t l = 0; l < s; ++l) acc += p[i][l] * matrix_[l][j];
          q[i][j] = acc;
          mx = std::max(mx, acc);
        }
      for (auto& row : q)
        for (auto& v : row) v /= mx;
      log_scale += std::log(mx);
      p = std::move(q);
    }
    double tr = 0.0;
    for (std::size_t i = 0; i < s; ++i) tr += p[i][i];
    return (std::log(tr) + log_scale) / static_cast<double>(n);
  }

 private:
  template <class F>
  double sum_extensions(const Word& w, F&& f) const {
    double acc = 0.0;
    for (int a = 0; a < system_.alphabet(); ++a) {
      Word e = w + static_cast<char>(a);
      if (system_.is_legal(e)) acc += f(e);
    }
    return acc;
  }

  [[nodiscard]] std::vector<std::size_t> block_path(const Word& w) const {
    std::vector<std::size_t> path;
    path.reserve(w.size() - block_ + 1);
    for (std::size_t i = 0; i + block_ <= w.size(); ++i) path.push_back(index_.at(w.substr(i, block_)));
    return path;
  }

  ShiftSystem system_;
  int range_;
  std::size_t block_ = 1;
  std::vector<Word> states_;
  std::map<Word, std::size_t> index_;
  std::vector<std::vector<double>> matrix_;
  PerronData perron_;
};

/// Haar measure on T^m (the equilibrium state of every constant potential
/// for a hyperbolic toral endomorphism).
struct HaarOracle {
  std::size_t dimension = 2;
};

/// Exact reference measure: Markov (shift) or Haar (torus).
class GibbsOracle {
 public:
  GibbsOracle(MarkovOracle m) : impl_(std::move(m)) {}  // NOLINT(google-explicit-constructor)
  GibbsOracle(HaarOracle h) : impl_(h) {}               // NOLINT(google-explicit-constructor)

  static GibbsOracle markov(const ShiftSystem& s, const LocallyConstantPotential& phi) {
    return GibbsOracle(MarkovOracle(s, phi));
  }
  static GibbsOracle haar(std::size_t dim) { return GibbsOracle(HaarOracle{dim}); }

  [[nodiscard]] bool is_markov() const { return std::holds_alternative<MarkovOracle>(impl_); }
  [[nodiscard]] bool is_haar() const { return std::holds_alternative<HaarOracle>(impl_); }
  [[nodiscard]] const MarkovOracle& as_markov() const {
    if (!is_markov()) throw PhaseSpaceMismatch("oracle is not a shift (Markov) oracle");
    return std::get<MarkovOracle>(impl_);
  }
  [[nodiscard]] const HaarOracle& as_haar() const {
    if (!is_haar()) throw PhaseSpaceMismatch("oracle is not a torus (Haar) oracle");
    return std::get<HaarOracle>(impl_);
  }

  /// Exact integral of a test function.
  [[nodiscard]] double integrate(const TestFunction& g) const {
    if (const auto* t = std::get_if<Tabulated>(&g)) {
      if (t->constant_value) return *t->constant_value;
      throw InvalidArgument("no exact oracle value for tabulated function " + t->name);
    }
    if (is_haar()) {
      const auto* c = std::get_if<Character>(&g);
      if (!c) throw PhaseSpaceMismatch("cylinder indicator paired with the Haar oracle");
      if (c->k.size() != as_haar().dimension) throw InvalidArgument("character dimension differs from torus");
      return is_zero(c->k) ? 1.0 : 0.0;
    }
    const auto* cyl = std::get_if<Cylinder>(&g);
    if (!cyl) throw PhaseSpaceMismatch("torus character paired with a Markov oracle");
    return as_markov().cylinder_measure(cyl->word);
  }

 private:
  std::variant<MarkovOracle, HaarOracle> impl_;
};

/// mu[w] as a free function, matching the oracle's query interface.
inline double oracle_cylinder_measure(const GibbsOracle& o, const Word& w) { return o.as_markov().cylinder_measure(w); }

/// Both routes for the natural-extension measure of the anchored cylinder
/// {x_hat : b_{-j..-1} = past, b_{0..k-1} = future}.
struct LiftedCylinder {
  double direct = 0.0;                ///< stationary two-sided chain value
  std::vector<double> limit_by_depth; ///< mu(pi f_hat^{-n} E), n = 0, 1, ...
  double limit = 0.0;                 ///< the depth-j value, where the sequence stabilizes
  double difference = 0.0;            ///< |direct - limit|
  std::size_t anchor_depth = 0;       ///< j
};

/// For n >= j the projected set is sigma^{-(n-j)}[past future], whose
/// measure is summed over all legal prefixes of length n - j; for n < j only
/// the last n past symbols constrain x_{-n}.
inline LiftedCylinder lifted_cylinder_measure(const GibbsOracle& o, const Word& past, const Word& future,
                                              std::size_t extra_depth = 2) {
  const MarkovOracle& m = o.as_markov();
  const ShiftSystem& sys = m.system();
  const Word w = past + future;
  const std::size_t j = past.size();
  LiftedCylinder out;
  out.anchor_depth = j;
  out.direct = m.stationary_chain_measure(w);
  for (std::size_t n = 0; n <= j + extra_depth; ++n) {
    double v = 0.0;
    if (!sys.is_legal(w)) {
      v = 0.0;
    } else if (n < j) {
      v = m.cylinder_measure(w.substr(j - n));
    } else {
      for (const auto& u : sys.legal_words(n - j)) {
        const Word uw = u + w;
        if (sys.is_legal(uw)) v += m.cylinder_measure(uw);
      }
    }
    out.limit_by_depth.push_back(v);
  }
  out.limit = out.limit_by_depth[j];
  out.difference = std::fabs(out.direct - out.limit);
  return out;
}

/// mu[y_0 .. y_{n-1}] * exp(n P - S_n phi(y)): the Bowen-ball ratio with the
/// ball taken as the length-n cylinder of y.
inline double gibbs_ratio(const MarkovOracle& m, const LocallyConstantPotential& phi, const ShiftPoint& y,
                          std::size_t n) {
  if (n == 0) throw InvalidArgument("n must be positive");
  double s = 0.0;
  ShiftPoint z = y;
  for (std::size_t i = 0; i < n; ++i) {
    s += phi(z);
    z = z.shifted();
  }
  return m.cylinder_measure(y.prefix(n)) * std::exp(static_cast<double>(n) * m.pressure() - s);
}

}  // namespace gibbs
