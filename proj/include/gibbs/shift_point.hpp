#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

#include "gibbs/errors.hpp"

namespace gibbs {

/// Finite word over the alphabet {0, ..., s-1}; one symbol per char.
using Word = std::string;

/// Maximum alphabet size representable in the text form ("0".."9", "a".."z").
inline constexpr int kMaxAlphabet = 36;

inline char symbol_to_char(unsigned char s) {
  return s < 10 ? static_cast<char>('0' + s) : static_cast<char>('a' + (s - 10));
}

/// Parses "0110" style text into a Word.
inline Word parse_word(std::string_view text) {
  Word w;
  w.reserve(text.size());
  for (char c : text) {
    if (c >= '0' && c <= '9')
      w.push_back(static_cast<char>(c - '0'));
    else if (c >= 'a' && c <= 'z')
      w.push_back(static_cast<char>(c - 'a' + 10));
    else
      throw InvalidArgument("bad symbol '" + std::string(1, c) + "' in word");
  }
  return w;
}

inline std::string word_to_string(std::string_view w) {
  std::string out;
  out.reserve(w.size());
  for (char c : w) out.push_back(symbol_to_char(static_cast<unsigned char>(c)));
  return out;
}

/// An eventually periodic one-sided sequence head . tail tail tail ...
///
/// Stored in canonical form: the tail is primitive (not a proper power), and
/// the head never ends with the tail's last symbol (that symbol is rotated
/// into the tail instead). Equal sequences therefore compare equal.
class ShiftPoint {
 public:
  ShiftPoint() : tail_(1, '\0') {}
  ShiftPoint(Word head, Word tail) : head_(std::move(head)), tail_(std::move(tail)) {
    if (tail_.empty()) throw InvalidArgument("shift point needs a nonempty periodic tail");
    canonicalize();
  }

  /// The periodic point w^infinity.
  static ShiftPoint periodic(Word w) { return ShiftPoint({}, std::move(w)); }

  [[nodiscard]] const Word& head() const { return head_; }
  [[nodiscard]] const Word& tail() const { return tail_; }

  [[nodiscard]] unsigned char symbol(std::size_t i) const {
    if (i < head_.size()) return static_cast<unsigned char>(head_[i]);
    return static_cast<unsigned char>(tail_[(i - head_.size()) % tail_.size()]);
  }

  /// First n symbols.
  [[nodiscard]] Word prefix(std::size_t n) const {
    Word out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<char>(symbol(i)));
    return out;
  }

  [[nodiscard]] bool starts_with(std::string_view w) const {
    for (std::size_t i = 0; i < w.size(); ++i)
      if (symbol(i) != static_cast<unsigned char>(w[i])) return false;
    return true;
  }

  /// The shift map: drop the first symbol.
  [[nodiscard]] ShiftPoint shifted() const {
    ShiftPoint p = *this;
    if (!p.head_.empty()) {
      p.head_.erase(0, 1);
    } else {
      std::rotate(p.tail_.begin(), p.tail_.begin() + 1, p.tail_.end());
    }
    return p;
  }

  /// a . x
  [[nodiscard]] ShiftPoint prepended(unsigned char a) const {
    Word h;
    h.reserve(head_.size() + 1);
    h.push_back(static_cast<char>(a));
    h += head_;
    return ShiftPoint(std::move(h), tail_);
  }

  [[nodiscard]] std::string to_string() const {
    return word_to_string(head_) + "(" + word_to_string(tail_) + ")";
  }

  friend bool operator==(const ShiftPoint&, const ShiftPoint&) = default;
  friend auto operator<=>(const ShiftPoint& a, const ShiftPoint& b) {
    if (auto c = a.head_ <=> b.head_; c != 0) return c;
    return a.tail_ <=> b.tail_;
  }

  [[nodiscard]] std::size_t hash() const {
    std::size_t h = std::hash<std::string>{}(head_);
    return h ^ (std::hash<std::string>{}(tail_) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  }

 private:
  void canonicalize() {
    const std::size_t n = tail_.size();
    for (std::size_t p = 1; p < n; ++p) {
      if (n % p != 0) continue;
      bool periodic = true;
      for (std::size_t i = p; i < n && periodic; ++i) periodic = tail_[i] == tail_[i - p];
      if (periodic) {
        tail_.resize(p);
        break;
      }
    }
    while (!head_.empty() && head_.back() == tail_.back()) {
      head_.pop_back();
      std::rotate(tail_.rbegin(), tail_.rbegin() + 1, tail_.rend());
    }
  }

  Word head_;
  Word tail_;
};

}  // namespace gibbs

template <>
struct std::hash<gibbs::ShiftPoint> {
  std::size_t operator()(const gibbs::ShiftPoint& p) const noexcept { return p.hash(); }
};
