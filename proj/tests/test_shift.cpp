#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "gibbs/gibbs.hpp"

using namespace gibbs;

namespace {

const double kBeta = std::log(3.0);

ShiftPoint sp(const char* head, const char* tail) { return ShiftPoint(parse_word(head), parse_word(tail)); }
Word w(const char* s) { return parse_word(s); }

// Perron data from a dense eigensolver, used as an independent reference for
// the power-iteration oracle.
struct EigenPerron {
  double lambda;
  Eigen::VectorXd l, r;
};

EigenPerron eigen_perron(const std::vector<std::vector<double>>& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  auto top = [](const Eigen::MatrixXd& x, double& lam) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(x);
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < x.rows(); ++i)
      if (es.eigenvalues()(i).real() > es.eigenvalues()(best).real()) best = i;
    lam = es.eigenvalues()(best).real();
    Eigen::VectorXd v = es.eigenvectors().col(best).real();
    if (v.sum() < 0) v = -v;
    return v;
  };
  EigenPerron p;
  double lt = 0;
  p.r = top(a, p.lambda);
  p.l = top(a.transpose(), lt);
  p.l /= p.l.dot(p.r);
  return p;
}

LocallyConstantPotential random_symbol_potential(const ShiftSystem& s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(s.alphabet()));
  for (auto& x : v) x = u(rng);
  return LocallyConstantPotential::from_symbol_values(s, v);
}

LocallyConstantPotential random_pair_potential(const ShiftSystem& s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::map<Word, double> t;
  for (const auto& x : s.legal_words(2)) t[x] = u(rng);
  return LocallyConstantPotential(s, 2, t);
}

}  // namespace

// --- the system -------------------------------------------------------------------

TEST(ShiftSystem, RejectsNonPrimitiveOrMalformed) {
  EXPECT_THROW(ShiftSystem(2, {{0, 1}, {1, 0}}), InvalidArgument);  // periodic, not primitive
  EXPECT_THROW(ShiftSystem(2, {{1, 0}, {0, 1}}), InvalidArgument);  // reducible
  EXPECT_THROW(ShiftSystem(2, {{1, 2}, {1, 1}}), InvalidArgument);
  EXPECT_THROW(ShiftSystem(1, {{1}}), InvalidArgument);
  EXPECT_NO_THROW(ShiftSystem(3, {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
}

TEST(ShiftSystem, Legality) {
  const auto g = ShiftSystem::golden_mean();
  EXPECT_TRUE(g.is_legal(w("0100")));
  EXPECT_FALSE(g.is_legal(w("0110")));
  EXPECT_TRUE(g.is_legal(sp("", "01")));
  EXPECT_FALSE(g.is_legal(sp("", "1")));
  EXPECT_FALSE(g.is_legal(sp("1", "10")));
}

TEST(ShiftPreimages, FullShiftAtZero) {
  const auto pre = ShiftSystem::full(2).preimages(sp("", "0"));
  ASSERT_EQ(pre.size(), 2u);
  EXPECT_EQ(pre[0], sp("", "0"));
  EXPECT_EQ(pre[1], sp("1", "0"));
}

TEST(ShiftPreimages, GoldenMeanForbidsDoubleOne) {
  const auto pre = ShiftSystem::golden_mean().preimages(sp("1", "0"));
  ASSERT_EQ(pre.size(), 1u);
  EXPECT_EQ(pre[0], sp("01", "0"));
}

TEST(ShiftPreimages, FullShiftCount) {
  const auto s = ShiftSystem::full(3);
  for (const auto& x : {sp("", "0"), sp("21", "01"), sp("", "2")}) EXPECT_EQ(s.preimages(x).size(), 3u);
}

TEST(ShiftSystem, PeriodicPointsAreCircularWords) {
  const auto g = ShiftSystem::golden_mean();
  for (unsigned n = 1; n <= 12; ++n) {
    const auto pts = g.fixed_points(n);
    EXPECT_DOUBLE_EQ(static_cast<double>(pts.size()), g.periodic_point_count(n));
    for (const auto& p : pts) {
      ShiftPoint z = p;
      for (unsigned i = 0; i < n; ++i) z = g.forward(z);
      EXPECT_EQ(z, p);
      EXPECT_TRUE(g.is_legal(p));
    }
  }
  // Lucas numbers: tr(G^n)
  EXPECT_EQ(g.fixed_points(10).size(), 123u);
}

// --- oracle -------------------------------------------------------------------------

TEST(MarkovOracle, BernoulliCylinders) {
  const auto s = ShiftSystem::full(2);
  const auto o = GibbsOracle::markov(s, LocallyConstantPotential::zero(s));
  EXPECT_NEAR(oracle_cylinder_measure(o, w("01")), 0.25, 1e-14);
  EXPECT_NEAR(o.as_markov().pressure(), std::log(2.0), 1e-14);
}

TEST(MarkovOracle, BetaPotentialOnFullShift) {
  const auto s = ShiftSystem::full(2);
  const auto o = GibbsOracle::markov(s, LocallyConstantPotential::indicator(s, 1, kBeta));
  EXPECT_NEAR(oracle_cylinder_measure(o, w("1")), 0.75, 1e-14);
  EXPECT_NEAR(oracle_cylinder_measure(o, w("0110")), 0.25 * 0.75 * 0.75 * 0.25, 1e-14);
  EXPECT_NEAR(o.as_markov().pressure(), std::log(4.0), 1e-14);
}

TEST(MarkovOracle, GoldenMeanPressure) {
  const auto g = ShiftSystem::golden_mean();
  const MarkovOracle o(g, LocallyConstantPotential::zero(g));
  EXPECT_NEAR(o.pressure(), std::log((1.0 + std::sqrt(5.0)) / 2.0), 1e-14);
}

TEST(MarkovOracle, GoldenMeanBetaFrozenValues) {
  // Reference values from an independent numpy eigendecomposition.
  const auto g = ShiftSystem::golden_mean();
  const MarkovOracle o(g, LocallyConstantPotential::indicator(g, 1, kBeta));
  EXPECT_NEAR(o.pressure(), 0.8341151943524012, 1e-13);
  EXPECT_NEAR(o.cylinder_measure(w("1")), 0.3613249509436927, 1e-13);
  EXPECT_NEAR(o.cylinder_measure(w("0")), 0.6386750490563072, 1e-13);
  EXPECT_NEAR(o.cylinder_measure(w("010")), 0.36132495094369277, 1e-13);
  EXPECT_EQ(o.cylinder_measure(w("11")), 0.0);
}

TEST(MarkovOracle, RangeTwoFrozenPressure) {
  const auto s = ShiftSystem::full(2);
  const LocallyConstantPotential phi(s, 2, {{w("00"), 0.3}, {w("01"), -0.2}, {w("10"), 0.5}, {w("11"), 1.1}});
  EXPECT_NEAR(MarkovOracle(s, phi).pressure(), 1.2818253434613087, 1e-13);
}

TEST(MarkovOracle, AgreesWithDenseEigensolver) {
  std::mt19937_64 rng(4);
  for (const auto& s : {ShiftSystem::full(2), ShiftSystem::golden_mean(), ShiftSystem::full(3),
                        ShiftSystem(3, {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}})}) {
    for (int trial = 0; trial < 3; ++trial) {
      const auto phi = trial % 2 ? random_pair_potential(s, rng) : random_symbol_potential(s, rng);
      const MarkovOracle o(s, phi);
      const auto ref = eigen_perron(o.transfer_matrix());
      EXPECT_NEAR(o.pressure(), std::log(ref.lambda), 1e-12);
      for (const auto& x : s.legal_words(4)) {
        double v = ref.l(x[0]);
        for (std::size_t i = 0; i + 1 < x.size(); ++i)
          v *= o.transfer_matrix()[static_cast<std::size_t>(x[i])][static_cast<std::size_t>(x[i + 1])] / ref.lambda;
        v *= ref.r(x.back());
        EXPECT_NEAR(o.cylinder_measure(x), v, 1e-12);
      }
    }
  }
}

TEST(MarkovOracle, RangeThreeUsesBlocks) {
  // A range-3 potential that only looks at x_0 must give the range-1 measure.
  const auto s = ShiftSystem::golden_mean();
  std::map<Word, double> t;
  for (const auto& x : s.legal_words(3)) t[x] = x[0] == 1 ? 0.7 : -0.1;
  const MarkovOracle o3(s, LocallyConstantPotential(s, 3, t));
  const MarkovOracle o1(s, LocallyConstantPotential::from_symbol_values(s, {-0.1, 0.7}));
  EXPECT_NEAR(o3.pressure(), o1.pressure(), 1e-12);
  for (std::size_t len = 1; len <= 5; ++len)
    for (const auto& x : s.legal_words(len)) EXPECT_NEAR(o3.cylinder_measure(x), o1.cylinder_measure(x), 1e-12);
}

TEST(MarkovOracle, IllegalWordHasZeroMass) {
  const auto g = ShiftSystem::golden_mean();
  EXPECT_EQ(MarkovOracle(g, LocallyConstantPotential::zero(g)).cylinder_measure(w("0110")), 0.0);
}

TEST(MarkovOracle, CylinderAdditivityAndStationarity) {
  std::mt19937_64 rng(6);
  for (const auto& s : {ShiftSystem::full(2), ShiftSystem::golden_mean(), ShiftSystem::full(3)}) {
    const auto phi = random_pair_potential(s, rng);
    const MarkovOracle o(s, phi);
    for (std::size_t len = 0; len <= 7; ++len)
      for (const auto& x : s.legal_words(len)) {
        double right = 0.0, left = 0.0;
        for (int a = 0; a < s.alphabet(); ++a) {
          right += o.cylinder_measure(x + static_cast<char>(a));
          left += o.cylinder_measure(static_cast<char>(a) + x);
        }
        EXPECT_NEAR(right, o.cylinder_measure(x), 1e-12);
        EXPECT_NEAR(left, o.cylinder_measure(x), 1e-12);
      }
  }
}

TEST(MarkovOracle, LogTracePowerMatchesEnumeration) {
  std::mt19937_64 rng(12);
  for (const auto& s : {ShiftSystem::full(2), ShiftSystem::golden_mean(), ShiftSystem::full(3)}) {
    const auto phi = random_pair_potential(s, rng);
    const MarkovOracle o(s, phi);
    for (unsigned n = 1; n <= 9; ++n)
      EXPECT_NEAR(o.log_trace_power(n), pressure_by_enumeration(s, phi, n), 1e-12) << "n=" << n;
    EXPECT_LT(std::fabs(o.log_trace_power(20) - o.pressure()), 0.02);
  }
}

TEST(GibbsOracle, IntegrateHandlesEachFunctionKind) {
  const auto s = ShiftSystem::full(2);
  const auto o = GibbsOracle::markov(s, LocallyConstantPotential::indicator(s, 1, kBeta));
  EXPECT_NEAR(o.integrate(Cylinder{w("1")}), 0.75, 1e-14);
  EXPECT_DOUBLE_EQ(o.integrate(constant_function(2.5)), 2.5);
  EXPECT_THROW(o.integrate(Character{{1}, Part::Real}), PhaseSpaceMismatch);
  const auto h = GibbsOracle::haar(2);
  EXPECT_EQ(h.integrate(Character{{1, 0}, Part::Real}), 0.0);
  EXPECT_EQ(h.integrate(Character{{0, 0}, Part::Real}), 1.0);
  EXPECT_THROW(h.integrate(Cylinder{w("0")}), PhaseSpaceMismatch);
  EXPECT_THROW(h.integrate(Tabulated{[](const Point&) { return 1.0; }, "opaque", std::nullopt}), InvalidArgument);
}

// --- lifted cylinders -----------------------------------------------------------------

TEST(LiftedCylinder, BernoulliTwoPastSymbols) {
  const auto s = ShiftSystem::full(2);
  const auto o = GibbsOracle::markov(s, LocallyConstantPotential::zero(s));
  const auto lc = lifted_cylinder_measure(o, w("10"), Word{});
  EXPECT_NEAR(lc.direct, 0.25, 1e-15);
  EXPECT_NEAR(lc.limit, 0.25, 1e-15);
  EXPECT_LT(lc.difference, 1e-15);
}

TEST(LiftedCylinder, EmptyConstraint) {
  const auto s = ShiftSystem::golden_mean();
  const auto o = GibbsOracle::markov(s, LocallyConstantPotential::zero(s));
  const auto lc = lifted_cylinder_measure(o, Word{}, Word{});
  EXPECT_DOUBLE_EQ(lc.direct, 1.0);
  EXPECT_NEAR(lc.limit, 1.0, 1e-15);
}

TEST(LiftedCylinder, GoldenMeanPastWord) {
  const auto s = ShiftSystem::golden_mean();
  const auto o = GibbsOracle::markov(s, LocallyConstantPotential::zero(s));
  const auto lc = lifted_cylinder_measure(o, w("10"), Word{});
  EXPECT_LT(lc.difference, 1e-12);
  for (std::size_t n = lc.anchor_depth; n < lc.limit_by_depth.size(); ++n)
    EXPECT_NEAR(lc.limit_by_depth[n], lc.direct, 1e-12);
}

TEST(LiftedCylinder, ShallowDepthsOnlySeeRecentPast) {
  // Before the anchor depth the projection forgets the earliest past symbols.
  const auto s = ShiftSystem::full(2);
  const auto o = GibbsOracle::markov(s, LocallyConstantPotential::indicator(s, 1, kBeta));
  const auto lc = lifted_cylinder_measure(o, w("01"), w("1"));
  EXPECT_NEAR(lc.limit_by_depth[0], 0.75, 1e-14);
  EXPECT_NEAR(lc.limit_by_depth[1], 0.75 * 0.75, 1e-14);
  EXPECT_NEAR(lc.limit_by_depth[2], 0.25 * 0.75 * 0.75, 1e-14);
}

// --- Gibbs ratio --------------------------------------------------------------------------

TEST(GibbsRatio, FullShiftZeroPotentialIsOne) {
  const auto s = ShiftSystem::full(2);
  const auto phi = LocallyConstantPotential::zero(s);
  const MarkovOracle o(s, phi);
  for (unsigned n = 1; n <= 12; ++n) EXPECT_NEAR(gibbs_ratio(o, phi, sp("0110", "01"), n), 1.0, 1e-12);
}

TEST(GibbsRatio, FullShiftSymbolPotentialIsOne) {
  std::mt19937_64 rng(2);
  const auto s = ShiftSystem::full(3);
  const auto phi = random_symbol_potential(s, rng);
  const MarkovOracle o(s, phi);
  std::uniform_int_distribution<int> sym(0, 2);
  for (int trial = 0; trial < 20; ++trial) {
    Word head;
    for (int i = 0; i < 25; ++i) head.push_back(static_cast<char>(sym(rng)));
    const ShiftPoint y(head, Word(1, static_cast<char>(sym(rng))));
    for (unsigned n = 1; n <= 20; ++n) EXPECT_NEAR(gibbs_ratio(o, phi, y, n), 1.0, 1e-9);
  }
}

TEST(GibbsRatio, GoldenMeanBoundedByEigenvectorRatio) {
  const auto g = ShiftSystem::golden_mean();
  const auto phi = LocallyConstantPotential::zero(g);
  const MarkovOracle o(g, phi);
  const auto& pd = o.perron_data();
  double lo = 1e300, hi = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      lo = std::min(lo, pd.left[a] * pd.right[b] * pd.value);
      hi = std::max(hi, pd.left[a] * pd.right[b] * pd.value);
    }
  for (const auto& x : g.legal_words(10)) {
    const ShiftPoint y(x, w("0"));
    const double r = gibbs_ratio(o, phi, y, 10);
    EXPECT_GE(r, lo - 1e-12);
    EXPECT_LE(r, hi + 1e-12);
  }
}

// --- potentials ------------------------------------------------------------------------------

TEST(Potential, TableValidation) {
  const auto g = ShiftSystem::golden_mean();
  EXPECT_THROW(LocallyConstantPotential(g, 2, {{w("00"), 0.0}, {w("01"), 0.0}}), InvalidArgument);
  EXPECT_THROW(LocallyConstantPotential(g, 2, {{w("00"), 0.0}, {w("01"), 0.0}, {w("10"), 0.0}, {w("11"), 0.0}}),
               InvalidArgument);
  EXPECT_NO_THROW(LocallyConstantPotential(g, 2, {{w("00"), 0.0}, {w("01"), 0.0}, {w("10"), 0.0}}));
  EXPECT_THROW(LocallyConstantPotential(g, 1, {{w("0"), 0.0}, {w("1"), std::nan("")}}), InvalidArgument);
}

TEST(Potential, EvaluatesOnLeadingBlock) {
  const auto s = ShiftSystem::full(2);
  const LocallyConstantPotential phi(s, 2, {{w("00"), 0.3}, {w("01"), -0.2}, {w("10"), 0.5}, {w("11"), 1.1}});
  EXPECT_DOUBLE_EQ(phi(sp("1", "0")), 0.5);
  EXPECT_DOUBLE_EQ(phi(sp("", "01")), -0.2);
  EXPECT_DOUBLE_EQ(phi.shifted(1.0)(sp("", "1")), 2.1);
}
