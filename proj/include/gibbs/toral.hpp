#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gibbs/caps.hpp"
#include "gibbs/errors.hpp"
#include "gibbs/integer_matrix.hpp"
#include "gibbs/smith.hpp"
#include "gibbs/torus_point.hpp"

namespace gibbs {

// ---------------------------------------------------------------------------
// Hyperbolicity
// ---------------------------------------------------------------------------

enum class HyperbolicClass { Expanding, HyperbolicInvertible, HyperbolicNoninvertible, NotHyperbolic };

inline const char* to_string(HyperbolicClass c) {
  switch (c) {
    case HyperbolicClass::Expanding: return "Expanding";
    case HyperbolicClass::HyperbolicInvertible: return "HyperbolicInvertible";
    case HyperbolicClass::HyperbolicNoninvertible: return "HyperbolicNoninvertible";
    case HyperbolicClass::NotHyperbolic: return "NotHyperbolic";
  }
  return "?";
}

struct HyperbolicityReport {
  std::vector<std::complex<double>> eigenvalues;
  HyperbolicClass cls = HyperbolicClass::NotHyperbolic;
  /// Sum of log|lambda| over eigenvalues outside the unit circle.
  double entropy = 0.0;
  std::int64_t determinant = 0;
};

inline constexpr double kHyperbolicityMargin = 1e-9;

/// Eigenvalues from the exact characteristic polynomial (companion matrix,
/// binary64 QR), then classification by modulus.
inline HyperbolicityReport classify(const IntMatrix& a) {
  if (!a.square() || a.rows() == 0) throw InvalidArgument("classify needs a nonempty square matrix");
  HyperbolicityReport rep;
  rep.determinant = a.determinant();
  if (rep.determinant == 0) throw SingularMatrix("matrix is singular");

  const auto c = characteristic_polynomial(a);
  const auto m = static_cast<Eigen::Index>(a.rows());
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < m; ++i) companion(i, m - 1) = -static_cast<double>(c[static_cast<std::size_t>(i)]);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw Error("eigenvalue iteration failed");

  bool all_expanding = true;
  bool near_unit = false;
  for (Eigen::Index i = 0; i < m; ++i) {
    const std::complex<double> lam = solver.eigenvalues()(i);
    rep.eigenvalues.push_back(lam);
    const double mod = std::abs(lam);
    if (std::fabs(mod - 1.0) <= kHyperbolicityMargin) near_unit = true;
    if (mod > 1.0)
      rep.entropy += std::log(mod);
    else
      all_expanding = false;
  }
  if (near_unit)
    rep.cls = HyperbolicClass::NotHyperbolic;
  else if (all_expanding)
    rep.cls = HyperbolicClass::Expanding;
  else if (std::llabs(rep.determinant) == 1)
    rep.cls = HyperbolicClass::HyperbolicInvertible;
  else
    rep.cls = HyperbolicClass::HyperbolicNoninvertible;
  return rep;
}

// ---------------------------------------------------------------------------
// Trigonometric polynomials
// ---------------------------------------------------------------------------

/// One term a*cos(2 pi k.x) + b*sin(2 pi k.x) feeding output coordinate `component`.
struct TrigTerm {
  std::size_t component = 0;
  std::vector<std::int64_t> frequency;
  double cos_amplitude = 0.0;
  double sin_amplitude = 0.0;
};

/// Vector-valued trigonometric polynomial p : T^m -> R^m (periodic, smooth).
class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  TrigPolynomial(std::size_t dim, std::vector<TrigTerm> terms) : dim_(dim), terms_(std::move(terms)) {
    for (const auto& t : terms_) {
      if (t.component >= dim_ || t.frequency.size() != dim_)
        throw InvalidArgument("perturbation term does not match the torus dimension");
      if (!std::isfinite(t.cos_amplitude) || !std::isfinite(t.sin_amplitude))
        throw InvalidArgument("non-finite perturbation amplitude");
    }
  }

  [[nodiscard]] bool empty() const { return terms_.empty(); }
  [[nodiscard]] std::size_t dimension() const { return dim_; }
  [[nodiscard]] const std::vector<TrigTerm>& terms() const { return terms_; }

  [[nodiscard]] Eigen::VectorXd value(const Eigen::VectorXd& y) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_));
    for (const auto& t : terms_) {
      const double th = angle(t, y);
      out(static_cast<Eigen::Index>(t.component)) += t.cos_amplitude * std::cos(th) + t.sin_amplitude * std::sin(th);
    }
    return out;
  }

  [[nodiscard]] Eigen::MatrixXd jacobian(const Eigen::VectorXd& y) const {
    const auto m = static_cast<Eigen::Index>(dim_);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    for (const auto& t : terms_) {
      const double th = angle(t, y);
      const double d = 2.0 * std::numbers::pi * (-t.cos_amplitude * std::sin(th) + t.sin_amplitude * std::cos(th));
      for (Eigen::Index j = 0; j < m; ++j)
        J(static_cast<Eigen::Index>(t.component), j) += d * static_cast<double>(t.frequency[static_cast<std::size_t>(j)]);
    }
    return J;
  }

  /// Upper bound on sup|p| + sup|Dp| (max-norm rows).
  [[nodiscard]] double c1_norm_bound() const {
    std::vector<double> c0(dim_, 0.0), c1(dim_, 0.0);
    for (const auto& t : terms_) {
      double amp = std::fabs(t.cos_amplitude) + std::fabs(t.sin_amplitude);
      double k1 = 0.0;
      for (auto v : t.frequency) k1 += std::fabs(static_cast<double>(v));
      c0[t.component] += amp;
      c1[t.component] += 2.0 * std::numbers::pi * amp * k1;
    }
    double b0 = 0.0, b1 = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      b0 = std::max(b0, c0[i]);
      b1 = std::max(b1, c1[i]);
    }
    return b0 + b1;
  }

 private:
  static double angle(const TrigTerm& t, const Eigen::VectorXd& y) {
    double s = 0.0;
    for (std::size_t j = 0; j < t.frequency.size(); ++j)
      s += static_cast<double>(t.frequency[j]) * y(static_cast<Eigen::Index>(j));
    return 2.0 * std::numbers::pi * s;
  }

  std::size_t dim_ = 0;
  std::vector<TrigTerm> terms_;
};

/// Real-valued potential phi(x) = c + sum a cos(2 pi k.x) + b sin(2 pi k.x).
class TorusPotential {
 public:
  struct Term {
    std::vector<std::int64_t> frequency;
    double cos_amplitude = 0.0;
    double sin_amplitude = 0.0;
  };

  TorusPotential() = default;
  explicit TorusPotential(double constant, std::vector<Term> terms = {})
      : constant_(constant), terms_(std::move(terms)) {}

  static TorusPotential zero() { return TorusPotential(0.0); }

  [[nodiscard]] double operator()(const TorusPoint& x) const {
    double v = constant_;
    for (const auto& t : terms_) {
      const double th = 2.0 * std::numbers::pi * x.phase(t.frequency);
      v += t.cos_amplitude * std::cos(th) + t.sin_amplitude * std::sin(th);
    }
    return v;
  }

  [[nodiscard]] double constant() const { return constant_; }
  [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
  [[nodiscard]] bool is_constant() const { return terms_.empty(); }

  [[nodiscard]] TorusPotential shifted(double c) const { return TorusPotential(constant_ + c, terms_); }

 private:
  double constant_ = 0.0;
  std::vector<Term> terms_;
};

// ---------------------------------------------------------------------------
// The map f(x) = A x + eps p(x) mod 1
// ---------------------------------------------------------------------------

inline constexpr int kNewtonMaxIterations = 50;
inline constexpr double kBranchCollision = 1e-8;
inline constexpr double kPreimageResidual = 1e-10;

class LatticeMap {
 public:
  using point_type = TorusPoint;

  explicit LatticeMap(IntMatrix a, TrigPolynomial perturbation = {}, double epsilon = 0.0)
      : a_(std::move(a)), perturbation_(std::move(perturbation)), epsilon_(epsilon) {
    if (!a_.square() || a_.rows() == 0) throw InvalidArgument("lattice map needs a nonempty square matrix");
    det_ = a_.determinant();
    if (det_ == 0) throw SingularMatrix("det A = 0");
    if (!(epsilon_ >= 0.0) || !std::isfinite(epsilon_)) throw InvalidArgument("epsilon must be finite and >= 0");
    if (!perturbation_.empty() && perturbation_.dimension() != a_.rows())
      throw InvalidArgument("perturbation dimension differs from matrix");
    adj_ = a_.adjugate();
    report_ = classify(a_);
    reps_ = coset_representatives(a_);
    a_real_ = to_eigen(a_);
  }

  [[nodiscard]] const IntMatrix& matrix() const { return a_; }
  [[nodiscard]] std::size_t dimension() const { return a_.rows(); }
  [[nodiscard]] std::int64_t determinant() const { return det_; }
  [[nodiscard]] const HyperbolicityReport& hyperbolicity() const { return report_; }
  [[nodiscard]] bool perturbed() const { return epsilon_ > 0.0 && !perturbation_.empty(); }
  [[nodiscard]] double epsilon() const { return epsilon_; }
  [[nodiscard]] const TrigPolynomial& perturbation() const { return perturbation_; }
  [[nodiscard]] std::size_t max_preimage_count() const { return static_cast<std::size_t>(std::llabs(det_)); }
  /// Coset representatives of Z^m / A Z^m, in Smith mixed-radix order.
  [[nodiscard]] const std::vector<std::vector<std::int64_t>>& coset_reps() const { return reps_; }

  [[nodiscard]] TorusPoint forward(const TorusPoint& x) const {
    check_dim(x);
    if (!perturbed()) {
      if (x.is_exact()) {
        const auto y = a_.apply(x.numerators());
        std::vector<std::int64_t> num(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) num[i] = floor_mod(y[i], x.denominator());
        return TorusPoint::exact(x.denominator(), std::move(num));
      }
      return to_point(a_real_ * to_vec(x));
    }
    return to_point(lift(to_vec(x)));
  }

  /// All |det A| preimages, ordered by coset representative.
  [[nodiscard]] std::vector<TorusPoint> preimages(const TorusPoint& x) const {
    check_dim(x);
    std::vector<TorusPoint> out;
    out.reserve(reps_.size());
    if (!perturbed() && x.is_exact()) {
      const std::int64_t q = x.denominator();
      const std::int64_t big = checked::mul(q, std::llabs(det_));
      const int sign = det_ > 0 ? 1 : -1;
      const auto num = x.numerators();
      std::vector<std::int64_t> shifted(num.size());
      for (const auto& k : reps_) {
        for (std::size_t i = 0; i < num.size(); ++i) shifted[i] = checked::add(num[i], checked::mul(q, k[i]));
        const auto y = adj_.apply(shifted);
        std::vector<std::int64_t> yn(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) yn[i] = floor_mod(sign * y[i], big);
        out.push_back(TorusPoint::exact(big, std::move(yn)));
      }
      return out;
    }
    const Eigen::VectorXd xr = to_vec(x);
    const Eigen::MatrixXd a_inv = a_real_.inverse();
    for (const auto& k : reps_) {
      const Eigen::VectorXd target = xr + to_vec(k);
      Eigen::VectorXd y = a_inv * target;
      if (perturbed()) y = newton_preimage(y, target);
      out.push_back(to_point(y));
    }
    if (perturbed()) certify_branches(out, x);
    return out;
  }

  /// |det(A^n - I)|, computed exactly.
  [[nodiscard]] std::int64_t fixed_point_count(unsigned n) const {
    return std::llabs((a_.power(n) - IntMatrix::identity(dimension())).determinant());
  }

  /// Fix(f^n), one point per coset of Z^m / (A^n - I) Z^m.
  [[nodiscard]] std::vector<TorusPoint> fixed_points(unsigned n, std::size_t cap = kDefaultEnumerationCap) const {
    if (n == 0) throw InvalidArgument("period must be positive");
    const IntMatrix b = a_.power(n) - IntMatrix::identity(dimension());
    const std::int64_t db = b.determinant();
    if (db == 0) throw SingularMatrix("A^n - I is singular");
    if (static_cast<std::size_t>(std::llabs(db)) > cap)
      throw ResourceCapExceeded("|Fix(f^" + std::to_string(n) + ")| = " + std::to_string(std::llabs(db)) +
                                " exceeds the enumeration cap");
    const auto reps = coset_representatives(b);
    const IntMatrix adj = b.adjugate();
    const int sign = db > 0 ? 1 : -1;
    const std::int64_t big = std::llabs(db);
    std::vector<TorusPoint> out;
    out.reserve(reps.size());
    for (const auto& k : reps) {
      const auto y = adj.apply(k);
      std::vector<std::int64_t> yn(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) yn[i] = floor_mod(sign * y[i], big);
      out.push_back(TorusPoint::exact(big, std::move(yn)));
    }
    if (!perturbed()) return out;

    // Newton on the lifted equation F^n(y) = y + k, seeded at each linear fixed point.
    const Eigen::MatrixXd b_real = to_eigen(b);
    std::vector<TorusPoint> refined;
    refined.reserve(out.size());
    for (const auto& k : reps) {
      const Eigen::VectorXd kv = to_vec(k);
      Eigen::VectorXd y = b_real.partialPivLu().solve(kv);
      y = newton_periodic(y, kv, n);
      refined.push_back(to_point(y));
    }
    certify_distinct(refined);
    for (const auto& p : refined) {
      TorusPoint z = p;
      for (unsigned i = 0; i < n; ++i) z = forward(z);
      if (torus_distance(z, p) > 1e-9)
        throw CertificationFailure("perturbed periodic point does not close up; epsilon too large");
    }
    return refined;
  }

 private:
  void check_dim(const TorusPoint& x) const {
    if (x.dimension() != dimension()) throw InvalidArgument("point dimension differs from map dimension");
  }

  static Eigen::MatrixXd to_eigen(const IntMatrix& m) {
    Eigen::MatrixXd r(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<double>(m(i, j));
    return r;
  }
  static Eigen::VectorXd to_vec(const TorusPoint& x) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(x.dimension()));
    for (std::size_t i = 0; i < x.dimension(); ++i) v(static_cast<Eigen::Index>(i)) = x.coord(i);
    return v;
  }
  static Eigen::VectorXd to_vec(const std::vector<std::int64_t>& k) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(k.size()));
    for (std::size_t i = 0; i < k.size(); ++i) v(static_cast<Eigen::Index>(i)) = static_cast<double>(k[i]);
    return v;
  }
  static TorusPoint to_point(const Eigen::VectorXd& v) {
    return TorusPoint::real(std::vector<double>(v.data(), v.data() + v.size()));
  }

  // Lifted map R^m -> R^m.
  [[nodiscard]] Eigen::VectorXd lift(const Eigen::VectorXd& y) const {
    Eigen::VectorXd r = a_real_ * y;
    if (perturbed()) r += epsilon_ * perturbation_.value(y);
    return r;
  }
  [[nodiscard]] Eigen::MatrixXd lift_jacobian(const Eigen::VectorXd& y) const {
    Eigen::MatrixXd J = a_real_;
    if (perturbed()) J += epsilon_ * perturbation_.jacobian(y);
    return J;
  }

  // Damped Newton for G(y) = 0; `residual` returns (G(y), DG(y)).
  template <class Residual>
  static Eigen::VectorXd damped_newton(Eigen::VectorXd y, Residual&& residual) {
    auto [r, J] = residual(y);
    for (int it = 0; it < kNewtonMaxIterations; ++it) {
      const double rn = r.template lpNorm<Eigen::Infinity>();
      if (rn <= 1e-14) return y;
      const Eigen::VectorXd step = J.partialPivLu().solve(r);
      if (!step.allFinite()) break;
      double t = 1.0;
      bool accepted = false;
      while (t >= 1.0 / 1024.0) {
        Eigen::VectorXd trial = y - t * step;
        auto [r2, J2] = residual(trial);
        if (r2.template lpNorm<Eigen::Infinity>() < rn) {
          y = std::move(trial);
          r = std::move(r2);
          J = std::move(J2);
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) {
        // No decrease possible: either converged to rounding level or stuck.
        if (step.lpNorm<Eigen::Infinity>() <= 1e-13 * std::max(1.0, y.lpNorm<Eigen::Infinity>())) return y;
        break;
      }
      if (t == 1.0 && step.lpNorm<Eigen::Infinity>() <= 1e-15 * std::max(1.0, y.lpNorm<Eigen::Infinity>())) return y;
    }
    throw CertificationFailure("Newton branch following did not converge in " +
                               std::to_string(kNewtonMaxIterations) + " iterations; epsilon too large");
  }

  [[nodiscard]] Eigen::VectorXd newton_preimage(const Eigen::VectorXd& seed, const Eigen::VectorXd& target) const {
    return damped_newton(seed, [&](const Eigen::VectorXd& y) {
      return std::pair<Eigen::VectorXd, Eigen::MatrixXd>{lift(y) - target, lift_jacobian(y)};
    });
  }

  [[nodiscard]] Eigen::VectorXd newton_periodic(const Eigen::VectorXd& seed, const Eigen::VectorXd& k,
                                                unsigned n) const {
    const auto m = static_cast<Eigen::Index>(dimension());
    return damped_newton(seed, [&](const Eigen::VectorXd& y) {
      Eigen::VectorXd z = y;
      Eigen::MatrixXd D = Eigen::MatrixXd::Identity(m, m);
      for (unsigned i = 0; i < n; ++i) {
        D = lift_jacobian(z) * D;
        z = lift(z);
      }
      return std::pair<Eigen::VectorXd, Eigen::MatrixXd>{z - y - k, D - Eigen::MatrixXd::Identity(m, m)};
    });
  }

  // Sweep in the first coordinate: a collision needs |dx_0| < kBranchCollision (mod 1).
  static void certify_distinct(const std::vector<TorusPoint>& pts) {
    if (pts.size() < 2) return;
    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](auto i, auto j) { return pts[i].coord(0) < pts[j].coord(0); });
    const std::size_t n = order.size();
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t step = 1; step < n; ++step) {
        const std::size_t b = (a + step) % n;
        double gap = pts[order[b]].coord(0) - pts[order[a]].coord(0);
        if (b < a) gap += 1.0;
        if (gap >= kBranchCollision) break;
        if (torus_distance(pts[order[a]], pts[order[b]]) < kBranchCollision)
          throw CertificationFailure("two Newton branches collided; epsilon too large");
      }
    }
  }

  void certify_branches(const std::vector<TorusPoint>& pts, const TorusPoint& x) const {
    certify_distinct(pts);
    for (const auto& y : pts)
      if (torus_distance(forward(y), x) > kPreimageResidual)
        throw CertificationFailure("preimage does not map back within tolerance; epsilon too large");
  }

  IntMatrix a_;
  IntMatrix adj_;
  std::int64_t det_ = 0;
  TrigPolynomial perturbation_;
  double epsilon_ = 0.0;
  HyperbolicityReport report_;
  std::vector<std::vector<std::int64_t>> reps_;
  Eigen::MatrixXd a_real_;
};

}  // namespace gibbs
