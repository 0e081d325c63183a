#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "gibbs/caps.hpp"
#include "gibbs/errors.hpp"
#include "gibbs/shift_point.hpp"
#include "gibbs/test_function.hpp"

namespace gibbs {

/// One-sided subshift of finite type on {0..s-1} with a primitive 0/1
/// adjacency matrix.
class ShiftSystem {
 public:
  using point_type = ShiftPoint;

  ShiftSystem(int alphabet, std::vector<std::vector<int>> adjacency)
      : s_(alphabet), adj_(std::move(adjacency)) {
    if (s_ < 2 || s_ > kMaxAlphabet) throw InvalidArgument("alphabet size must be in [2, 36]");
    if (adj_.size() != static_cast<std::size_t>(s_)) throw InvalidArgument("adjacency must be s x s");
    for (const auto& row : adj_) {
      if (row.size() != static_cast<std::size_t>(s_)) throw InvalidArgument("adjacency must be s x s");
      for (int v : row)
        if (v != 0 && v != 1) throw InvalidArgument("adjacency entries must be 0 or 1");
    }
    if (!primitive()) throw InvalidArgument("adjacency matrix is not primitive");
  }

  static ShiftSystem full(int s) {
    return ShiftSystem(s, std::vector<std::vector<int>>(static_cast<std::size_t>(s), std::vector<int>(static_cast<std::size_t>(s), 1)));
  }
  /// Forbids the word "11".
  static ShiftSystem golden_mean() { return ShiftSystem(2, {{1, 1}, {1, 0}}); }

  [[nodiscard]] int alphabet() const { return s_; }
  [[nodiscard]] const std::vector<std::vector<int>>& adjacency() const { return adj_; }
  [[nodiscard]] bool allowed(unsigned char a, unsigned char b) const {
    return a < s_ && b < s_ && adj_[a][b] == 1;
  }

  [[nodiscard]] bool is_legal(std::string_view w) const {
    for (char c : w)
      if (static_cast<unsigned char>(c) >= s_) return false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
      if (!allowed(static_cast<unsigned char>(w[i]), static_cast<unsigned char>(w[i + 1]))) return false;
    return true;
  }

  /// Every transition legal, including head -> tail and the tail wrap-around.
  [[nodiscard]] bool is_legal(const ShiftPoint& x) const {
    const Word w = x.head() + x.tail() + x.tail().substr(0, 1);
    return is_legal(w);
  }

  [[nodiscard]] ShiftPoint forward(const ShiftPoint& x) const { return x.shifted(); }

  /// All a.x with a -> x_0 allowed, in symbol order.
  [[nodiscard]] std::vector<ShiftPoint> preimages(const ShiftPoint& x) const {
    std::vector<ShiftPoint> out;
    const unsigned char first = x.symbol(0);
    for (int a = 0; a < s_; ++a)
      if (allowed(static_cast<unsigned char>(a), first)) out.push_back(x.prepended(static_cast<unsigned char>(a)));
    return out;
  }

  [[nodiscard]] std::size_t max_preimage_count() const {
    std::size_t best = 0;
    for (int b = 0; b < s_; ++b) {
      std::size_t c = 0;
      for (int a = 0; a < s_; ++a) c += static_cast<std::size_t>(adj_[a][b]);
      best = std::max(best, c);
    }
    return best;
  }

  /// Legal words of exactly length n, lexicographic.
  [[nodiscard]] std::vector<Word> legal_words(std::size_t n) const {
    std::vector<Word> out;
    if (n == 0) {
      out.emplace_back();
      return out;
    }
    Word w;
    extend(w, n, false, out);
    return out;
  }

  /// Number of points of period n: tr(adjacency^n), in double (may be large).
  [[nodiscard]] double periodic_point_count(unsigned n) const {
    std::vector<std::vector<double>> p(static_cast<std::size_t>(s_), std::vector<double>(static_cast<std::size_t>(s_), 0.0));
    for (int i = 0; i < s_; ++i) p[i][i] = 1.0;
    for (unsigned k = 0; k < n; ++k) {
      auto q = p;
      for (int i = 0; i < s_; ++i)
        for (int j = 0; j < s_; ++j) {
          double acc = 0.0;
          for (int l = 0; l < s_; ++l) acc += p[i][l] * adj_[l][j];
          q[i][j] = acc;
        }
      p = std::move(q);
    }
    double t = 0.0;
    for (int i = 0; i < s_; ++i) t += p[i][i];
    return t;
  }

  /// Fix(sigma^n): the points w^infinity for every legal circular word w of length n.
  [[nodiscard]] std::vector<ShiftPoint> fixed_points(unsigned n, std::size_t cap = kDefaultEnumerationCap) const {
    if (n == 0) throw InvalidArgument("period must be positive");
    if (periodic_point_count(n) > static_cast<double>(cap))
      throw ResourceCapExceeded("|Fix(sigma^" + std::to_string(n) + ")| exceeds the enumeration cap");
    std::vector<Word> words;
    Word w;
    extend(w, n, true, words);
    std::vector<ShiftPoint> out;
    out.reserve(words.size());
    for (auto& word : words) out.push_back(ShiftPoint::periodic(std::move(word)));
    return out;
  }

 private:
  void extend(Word& w, std::size_t n, bool circular, std::vector<Word>& out) const {
    if (w.size() == n) {
      if (!circular || allowed(static_cast<unsigned char>(w.back()), static_cast<unsigned char>(w.front())))
        out.push_back(w);
      return;
    }
    for (int a = 0; a < s_; ++a) {
      if (!w.empty() && !allowed(static_cast<unsigned char>(w.back()), static_cast<unsigned char>(a))) continue;
      w.push_back(static_cast<char>(a));
      extend(w, n, circular, out);
      w.pop_back();
    }
  }

  [[nodiscard]] bool primitive() const {
    // Wielandt: primitive iff A^k > 0 for k = (s-1)^2 + 1.
    const int n = s_;
    std::vector<std::vector<int>> p = adj_;
    const int k = (n - 1) * (n - 1) + 1;
    for (int step = 1; step < k; ++step) {
      std::vector<std::vector<int>> q(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
      for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l)
          if (p[i][l])
            for (int j = 0; j < n; ++j) q[i][j] |= adj_[l][j];
      p = std::move(q);
    }
    for (const auto& row : p)
      for (int v : row)
        if (!v) return false;
    return true;
  }

  int s_;
  std::vector<std::vector<int>> adj_;
};

/// phi(x) = table[x_0 ... x_{r-1}], defined on every legal word of length r.
class LocallyConstantPotential {
 public:
  LocallyConstantPotential(const ShiftSystem& system, int range, const std::map<Word, double>& table)
      : s_(system.alphabet()), r_(range) {
    if (range < 1) throw InvalidArgument("potential range must be >= 1");
    const double size = std::pow(static_cast<double>(s_), range);
    if (size > 1e7) throw InvalidArgument("potential table too large");
    values_.assign(static_cast<std::size_t>(size), std::numeric_limits<double>::quiet_NaN());
    for (const auto& [w, v] : table) {
      if (static_cast<int>(w.size()) != r_) throw InvalidArgument("potential word has wrong length");
      if (!system.is_legal(w)) throw InvalidArgument("potential defined on an illegal word");
      if (!std::isfinite(v)) throw InvalidArgument("non-finite potential value");
      values_[code(w)] = v;
    }
    for (const auto& w : system.legal_words(static_cast<std::size_t>(r_)))
      if (std::isnan(values_[code(w)]))
        throw InvalidArgument("potential table misses legal word " + word_to_string(w));
  }

  static LocallyConstantPotential zero(const ShiftSystem& system) { return constant(system, 0.0); }

  static LocallyConstantPotential constant(const ShiftSystem& system, double c) {
    std::map<Word, double> t;
    for (auto& w : system.legal_words(1)) t[w] = c;
    return LocallyConstantPotential(system, 1, t);
  }

  /// r = 1 potential from per-symbol values.
  static LocallyConstantPotential from_symbol_values(const ShiftSystem& system, const std::vector<double>& v) {
    if (v.size() != static_cast<std::size_t>(system.alphabet())) throw InvalidArgument("one value per symbol");
    std::map<Word, double> t;
    for (int a = 0; a < system.alphabet(); ++a) t[Word(1, static_cast<char>(a))] = v[static_cast<std::size_t>(a)];
    return LocallyConstantPotential(system, 1, t);
  }

  /// phi = beta * [x_0 = symbol].
  static LocallyConstantPotential indicator(const ShiftSystem& system, unsigned char symbol, double beta) {
    std::vector<double> v(static_cast<std::size_t>(system.alphabet()), 0.0);
    v.at(symbol) = beta;
    return from_symbol_values(system, v);
  }

  [[nodiscard]] int range() const { return r_; }
  [[nodiscard]] int alphabet() const { return s_; }

  [[nodiscard]] double value(std::string_view w) const {
    if (static_cast<int>(w.size()) < r_) throw InvalidArgument("word shorter than potential range");
    return values_[code(w.substr(0, static_cast<std::size_t>(r_)))];
  }

  [[nodiscard]] double operator()(const ShiftPoint& x) const {
    std::size_t c = 0;
    for (int i = 0; i < r_; ++i) c = c * static_cast<std::size_t>(s_) + x.symbol(static_cast<std::size_t>(i));
    return values_[c];
  }

  [[nodiscard]] std::map<Word, double> table() const {
    std::map<Word, double> t;
    for (std::size_t c = 0; c < values_.size(); ++c) {
      if (std::isnan(values_[c])) continue;
      Word w(static_cast<std::size_t>(r_), '\0');
      std::size_t v = c;
      for (int i = r_ - 1; i >= 0; --i) {
        w[static_cast<std::size_t>(i)] = static_cast<char>(v % static_cast<std::size_t>(s_));
        v /= static_cast<std::size_t>(s_);
      }
      t[w] = values_[c];
    }
    return t;
  }

  [[nodiscard]] LocallyConstantPotential shifted(double c) const {
    LocallyConstantPotential p = *this;
    for (auto& v : p.values_)
      if (!std::isnan(v)) v += c;
    return p;
  }

 private:
  [[nodiscard]] std::size_t code(std::string_view w) const {
    std::size_t c = 0;
    for (char ch : w) c = c * static_cast<std::size_t>(s_) + static_cast<unsigned char>(ch);
    return c;
  }

  int s_;
  int r_;
  std::vector<double> values_;
};

/// One cylinder indicator per legal word of length 1..L, unit weights.
inline TestDictionary cylinder_indicators(const ShiftSystem& system, int max_length) {
  if (max_length < 1) throw InvalidArgument("cylinder dictionary needs L >= 1");
  std::vector<DictionaryEntry> entries;
  for (int len = 1; len <= max_length; ++len)
    for (auto& w : system.legal_words(static_cast<std::size_t>(len))) entries.push_back({Cylinder{std::move(w)}, 1.0});
  return TestDictionary(std::move(entries));
}

}  // namespace gibbs
