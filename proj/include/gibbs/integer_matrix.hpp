#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <ostream>
#include <span>
#include <vector>

#include "gibbs/errors.hpp"

namespace gibbs {

// Checked int64 arithmetic. Everything on the exact torus path goes through
// these so that overflow is reported instead of silently wrapping.
namespace checked {

inline std::int64_t narrow(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw ArithmeticOverflow("int64 overflow");
  return static_cast<std::int64_t>(v);
}

inline std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ArithmeticOverflow("int64 overflow in add");
  return r;
}

inline std::int64_t sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw ArithmeticOverflow("int64 overflow in sub");
  return r;
}

inline std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflow("int64 overflow in mul");
  return r;
}

}  // namespace checked

/// Non-negative remainder of a modulo m (m > 0).
inline std::int64_t floor_mod(__int128 a, std::int64_t m) {
  __int128 r = a % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

/// Floor division for m > 0.
inline std::int64_t floor_div(std::int64_t a, std::int64_t m) {
  std::int64_t q = a / m;
  if ((a % m != 0) && (a < 0)) --q;
  return q;
}

/// Dense row-major integer matrix with overflow-checked products.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw InvalidArgument("ragged matrix rows");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
    IntMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw InvalidArgument("ragged matrix rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] bool square() const { return rows_ == cols_; }

  std::int64_t& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  [[nodiscard]] std::vector<std::vector<std::int64_t>> to_rows() const {
    std::vector<std::vector<std::int64_t>> out(rows_, std::vector<std::int64_t>(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
    return out;
  }

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw InvalidArgument("matrix shape mismatch");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) {
        __int128 acc = 0;
        for (std::size_t k = 0; k < a.cols_; ++k) acc += static_cast<__int128>(a(i, k)) * b(k, j);
        c(i, j) = checked::narrow(acc);
      }
    return c;
  }

  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InvalidArgument("matrix shape mismatch");
    IntMatrix c(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.data_.size(); ++i) c.data_[i] = checked::sub(a.data_[i], b.data_[i]);
    return c;
  }

  /// y = M v, accumulated in 128 bits.
  [[nodiscard]] std::vector<__int128> apply(std::span<const std::int64_t> v) const {
    if (v.size() != cols_) throw InvalidArgument("vector length mismatch");
    std::vector<__int128> out(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i] += static_cast<__int128>((*this)(i, j)) * v[j];
    return out;
  }

  [[nodiscard]] IntMatrix power(unsigned n) const {
    if (!square()) throw InvalidArgument("power of non-square matrix");
    IntMatrix result = identity(rows_);
    IntMatrix base = *this;
    while (n > 0) {
      if (n & 1U) result = result * base;
      n >>= 1U;
      if (n > 0) base = base * base;
    }
    return result;
  }

  /// Fraction-free Gaussian elimination (Bareiss); exact for integer input.
  [[nodiscard]] std::int64_t determinant() const {
    if (!square()) throw InvalidArgument("determinant of non-square matrix");
    const std::size_t n = rows_;
    if (n == 0) return 1;
    std::vector<__int128> a(data_.begin(), data_.end());
    auto at = [&](std::size_t i, std::size_t j) -> __int128& { return a[i * n + j]; };
    int sign = 1;
    __int128 prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (at(k, k) == 0) {
        std::size_t p = k + 1;
        while (p < n && at(p, k) == 0) ++p;
        if (p == n) return 0;
        for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(p, j));
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        for (std::size_t j = k + 1; j < n; ++j) {
          __int128 v = at(i, j) * at(k, k) - at(i, k) * at(k, j);
          at(i, j) = v / prev;
          checked::narrow(at(i, j));
        }
        at(i, k) = 0;
      }
      prev = at(k, k);
    }
    return checked::narrow(sign * at(n - 1, n - 1));
  }

  [[nodiscard]] IntMatrix minor_matrix(std::size_t skip_row, std::size_t skip_col) const {
    IntMatrix m(rows_ - 1, cols_ - 1);
    for (std::size_t i = 0, r = 0; i < rows_; ++i) {
      if (i == skip_row) continue;
      for (std::size_t j = 0, c = 0; j < cols_; ++j) {
        if (j == skip_col) continue;
        m(r, c++) = (*this)(i, j);
      }
      ++r;
    }
    return m;
  }

  /// Classical adjugate: adj(M) M = det(M) I.
  [[nodiscard]] IntMatrix adjugate() const {
    if (!square()) throw InvalidArgument("adjugate of non-square matrix");
    const std::size_t n = rows_;
    IntMatrix adj(n, n);
    if (n == 1) {
      adj(0, 0) = 1;
      return adj;
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::int64_t cof = minor_matrix(i, j).determinant();
        adj(j, i) = ((i + j) % 2 == 0) ? cof : checked::sub(0, cof);
      }
    return adj;
  }

  [[nodiscard]] std::int64_t trace() const {
    std::int64_t t = 0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t = checked::add(t, (*this)(i, i));
    return t;
  }

  friend std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
    os << '[';
    for (std::size_t i = 0; i < m.rows_; ++i) {
      os << (i ? ",[" : "[");
      for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? "," : "") << m(i, j);
      os << ']';
    }
    return os << ']';
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
};

/// Coefficients c_0..c_n of det(tI - M) = t^n + c_{n-1} t^{n-1} + ... + c_0,
/// via Faddeev-LeVerrier in exact integer arithmetic.
inline std::vector<std::int64_t> characteristic_polynomial(const IntMatrix& m) {
  if (!m.square()) throw InvalidArgument("characteristic polynomial of non-square matrix");
  const std::size_t n = m.rows();
  std::vector<std::int64_t> c(n + 1, 0);
  c[n] = 1;
  IntMatrix mk(n, n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    IntMatrix next = m * mk;
    for (std::size_t i = 0; i < n; ++i) next(i, i) = checked::add(next(i, i), c[n - k + 1]);
    mk = next;
    IntMatrix am = m * mk;
    // c_{n-k} = -tr(A M_k) / k, exact by construction
    std::int64_t tr = am.trace();
    c[n - k] = -tr / static_cast<std::int64_t>(k);
  }
  return c;
}

}  // namespace gibbs
