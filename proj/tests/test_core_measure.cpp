#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gibbs/gibbs.hpp"

using namespace gibbs;

namespace {

TorusPoint tp(std::int64_t den, std::vector<std::int64_t> num) { return TorusPoint::exact(den, std::move(num)); }
ShiftPoint sp(const char* head, const char* tail) { return ShiftPoint(parse_word(head), parse_word(tail)); }

TorusMeasure grid_measure(std::int64_t q) {
  std::vector<TorusPoint> pts;
  for (std::int64_t i = 0; i < q; ++i)
    for (std::int64_t j = 0; j < q; ++j) pts.push_back(tp(q, {i, j}));
  return TorusMeasure::uniform(pts);
}

TorusMeasure random_torus_measure(std::mt19937_64& rng, std::size_t atoms) {
  std::uniform_int_distribution<std::int64_t> c(0, 96);
  std::uniform_real_distribution<double> w(0.1, 1.0);
  std::vector<Atom<TorusPoint>> out;
  double total = 0.0;
  for (std::size_t i = 0; i < atoms; ++i) {
    out.push_back({tp(97, {c(rng), c(rng)}), w(rng)});
    total += out.back().weight;
  }
  for (auto& a : out) a.weight /= total;
  return TorusMeasure::merged(out);
}

}  // namespace

// --- points -----------------------------------------------------------------

TEST(TorusPoint, ExactPointsAreReduced) {
  const auto p = tp(4, {2, 6});
  EXPECT_EQ(p.denominator(), 2);
  EXPECT_EQ(std::vector<std::int64_t>(p.numerators().begin(), p.numerators().end()), (std::vector<std::int64_t>{1, 1}));
  EXPECT_EQ(p.coord_string(0), "1/2");
  EXPECT_EQ(tp(3, {-1, 0}).coord_string(0), "2/3");
  EXPECT_EQ(tp(3, {-1, 0}).coord_string(1), "0");
}

TEST(TorusPoint, FromFractionsUsesCommonDenominator) {
  const auto p = TorusPoint::from_fractions({{1, 2}, {1, 3}});
  EXPECT_EQ(p.denominator(), 6);
  EXPECT_EQ(p, tp(6, {3, 2}));
}

TEST(TorusPoint, RealCoordinatesWrap) {
  const auto p = TorusPoint::real({1.25, -0.25});
  EXPECT_DOUBLE_EQ(p.coord(0), 0.25);
  EXPECT_DOUBLE_EQ(p.coord(1), 0.75);
  EXPECT_NEAR(torus_distance(TorusPoint::real({0.999999}), TorusPoint::real({0.0})), 1e-6, 1e-12);
}

TEST(ShiftPoint, CanonicalForm) {
  EXPECT_EQ(sp("", "0101"), sp("", "01"));
  EXPECT_EQ(sp("0", "10"), sp("", "01"));
  EXPECT_EQ(sp("11", "1"), sp("", "1"));
  EXPECT_EQ(sp("10", "0").to_string(), "1(0)");
  EXPECT_EQ(sp("", "01").shifted(), sp("", "10"));
  EXPECT_EQ(sp("", "0").prepended(1), sp("1", "0"));
  EXPECT_EQ(sp("1", "0").prefix(4), parse_word("1000"));
  EXPECT_TRUE(sp("01", "1").starts_with(parse_word("0111")));
  EXPECT_THROW(ShiftPoint(Word{}, Word{}), InvalidArgument);
}

// --- integrate ----------------------------------------------------------------

TEST(Integrate, CharacterAtOrigin) {
  const auto mu = TorusMeasure::dirac(TorusPoint::origin(2));
  EXPECT_DOUBLE_EQ(integrate(mu, Character{{1, 0}, Part::Real}), 1.0);
}

TEST(Integrate, CylinderOnTwoPointShiftMeasure) {
  const auto mu = ShiftMeasure::uniform({sp("", "0"), sp("1", "0")});
  EXPECT_DOUBLE_EQ(integrate(mu, Cylinder{parse_word("0")}), 0.5);
}

TEST(Integrate, CharacterOnSixPointGrid) {
  std::vector<TorusPoint> pts;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) pts.push_back(TorusPoint::from_fractions({{i, 2}, {j, 3}}));
  EXPECT_NEAR(integrate(TorusMeasure::uniform(pts), Character{{1, 0}, Part::Real}), 0.0, 1e-15);
}

TEST(Integrate, PhaseSpaceMismatchIsTyped) {
  const auto torus = TorusMeasure::dirac(TorusPoint::origin(2));
  const auto shift = ShiftMeasure::dirac(sp("", "0"));
  EXPECT_THROW(integrate(torus, Cylinder{parse_word("0")}), PhaseSpaceMismatch);
  EXPECT_THROW(integrate(shift, Character{{1}, Part::Real}), PhaseSpaceMismatch);
}

TEST(Integrate, ImaginaryPartOfZeroCharacterRejected) {
  const auto torus = TorusMeasure::dirac(TorusPoint::origin(1));
  EXPECT_THROW(integrate(torus, Character{{0}, Part::Imag}), InvalidArgument);
  EXPECT_DOUBLE_EQ(integrate(torus, Character{{0}, Part::Real}), 1.0);
}

// --- Fourier coefficients ------------------------------------------------------

TEST(Fourier, GridMeasureAnnihilatesLowFrequencies) {
  const auto mu = grid_measure(5);
  const std::vector<std::int64_t> k{1, 0};
  EXPECT_NEAR(std::abs(fourier_coefficient(mu, k)), 0.0, 1e-15);
}

TEST(Fourier, DiracAtOriginIsOne) {
  const auto mu = TorusMeasure::dirac(TorusPoint::origin(2));
  for (std::int64_t a = -3; a <= 3; ++a) {
    const std::vector<std::int64_t> k{a, 2 * a + 1};
    EXPECT_NEAR(std::abs(fourier_coefficient(mu, k) - std::complex<double>(1.0, 0.0)), 0.0, 1e-15);
  }
}

TEST(Fourier, AntipodalCancellation) {
  const auto mu = TorusMeasure::uniform({TorusPoint::origin(2), TorusPoint::from_fractions({{1, 2}, {0, 1}})});
  const std::vector<std::int64_t> k{1, 0};
  EXPECT_NEAR(std::abs(fourier_coefficient(mu, k)), 0.0, 1e-15);
}

TEST(Fourier, ShiftMeasureRejected) {
  const AnyMeasure mu = ShiftMeasure::dirac(sp("", "0"));
  const std::vector<std::int64_t> k{1};
  EXPECT_THROW(fourier_coefficient(mu, k), PhaseSpaceMismatch);
}

// --- weak-* distance -------------------------------------------------------------

TEST(WeakStar, IdentityIsZero) {
  std::mt19937_64 rng(3);
  const auto mu = random_torus_measure(rng, 10);
  EXPECT_EQ(weak_star_distance(mu, mu, torus_characters(2, 3)), 0.0);
}

TEST(WeakStar, DiracVersusHaarOnCircle) {
  const auto mu = TorusMeasure::dirac(TorusPoint::origin(1));
  const auto dict = torus_characters(1, 1, CharacterWeights::Uniform);
  EXPECT_DOUBLE_EQ(weak_star_distance(mu, GibbsOracle::haar(1), dict), 1.0);
}

TEST(WeakStar, EmptyDictionaryRejected) {
  EXPECT_THROW(TestDictionary(std::vector<DictionaryEntry>{}), EmptyDictionary);
  const TestDictionary empty;
  const auto mu = TorusMeasure::dirac(TorusPoint::origin(1));
  EXPECT_THROW(weak_star_distance(mu, mu, empty), EmptyDictionary);
}

TEST(WeakStar, CharacterDictionaryShape) {
  // K=1 in 2D: 4 representatives of the 8 nonzero k, each with Re and Im.
  const auto d = torus_characters(2, 1);
  EXPECT_EQ(d.size(), 8u);
  for (const auto& e : d.entries()) {
    const auto& c = std::get<Character>(e.g);
    double n2 = 0;
    for (auto v : c.k) n2 += static_cast<double>(v * v);
    EXPECT_DOUBLE_EQ(e.weight, 1.0 / (1.0 + n2));
  }
  EXPECT_EQ(torus_characters(2, 3).size(), 48u);
}

TEST(WeakStar, ConstantDictionaryGivesZero) {
  std::mt19937_64 rng(8);
  const auto mu = random_torus_measure(rng, 6);
  EXPECT_EQ(weak_star_distance(mu, GibbsOracle::haar(2), constant_dictionary()), 0.0);
}

// --- measure validation -------------------------------------------------------------

TEST(AtomicMeasure, ValidationRejectsBadWeights) {
  EXPECT_THROW(TorusMeasure(std::vector<Atom<TorusPoint>>{}), InvalidMeasure);
  EXPECT_THROW(TorusMeasure({{TorusPoint::origin(1), 0.5}}), InvalidMeasure);
  EXPECT_THROW(TorusMeasure({{TorusPoint::origin(1), 1.5}, {tp(2, {1}), -0.5}}), InvalidMeasure);
  EXPECT_THROW(TorusMeasure({{TorusPoint::origin(1), std::nan("")}}), InvalidMeasure);
  EXPECT_THROW(TorusMeasure({{TorusPoint::origin(1), 0.5}, {TorusPoint::origin(2), 0.5}}), InvalidMeasure);
}

TEST(AtomicMeasure, MergeAddsDuplicateWeights) {
  const auto mu = TorusMeasure::merged({{tp(2, {1}), 0.25}, {TorusPoint::origin(1), 0.5}, {tp(4, {2}), 0.25}});
  ASSERT_EQ(mu.size(), 2u);
  EXPECT_EQ(mu.atoms()[0].point, TorusPoint::origin(1));
  EXPECT_DOUBLE_EQ(mu.atoms()[1].weight, 0.5);
}
