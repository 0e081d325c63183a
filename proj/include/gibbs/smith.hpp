#pragma once

#include <cstdint>
#include <cstdlib>
#include <utility>
#include <vector>

#include "gibbs/errors.hpp"
#include "gibbs/integer_matrix.hpp"

namespace gibbs {

/// A = U * D * V with U, V unimodular and D diagonal, d_1 | d_2 | ... | d_m,
/// all d_i >= 0.
struct SmithDecomposition {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;

  [[nodiscard]] std::vector<std::int64_t> diagonal() const {
    std::vector<std::int64_t> d(D.rows());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = D(i, i);
    return d;
  }
};

namespace detail {

// Row/column operations on the working matrix, mirrored onto U and V so that
// A == U * W * V holds after every step.
struct SmithWork {
  IntMatrix W, U, V;
  std::size_t n;

  void swap_rows(std::size_t i, std::size_t j) {
    for (std::size_t c = 0; c < n; ++c) std::swap(W(i, c), W(j, c));
    for (std::size_t r = 0; r < n; ++r) std::swap(U(r, i), U(r, j));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < n; ++r) std::swap(W(r, i), W(r, j));
    for (std::size_t c = 0; c < n; ++c) std::swap(V(i, c), V(j, c));
  }
  // row_i += q * row_j
  void add_row(std::size_t i, std::size_t j, std::int64_t q) {
    if (q == 0) return;
    for (std::size_t c = 0; c < n; ++c) W(i, c) = checked::add(W(i, c), checked::mul(q, W(j, c)));
    for (std::size_t r = 0; r < n; ++r) U(r, j) = checked::sub(U(r, j), checked::mul(q, U(r, i)));
  }
  // col_j += q * col_i
  void add_col(std::size_t j, std::size_t i, std::int64_t q) {
    if (q == 0) return;
    for (std::size_t r = 0; r < n; ++r) W(r, j) = checked::add(W(r, j), checked::mul(q, W(r, i)));
    for (std::size_t c = 0; c < n; ++c) V(i, c) = checked::sub(V(i, c), checked::mul(q, V(j, c)));
  }
  void negate_row(std::size_t i) {
    for (std::size_t c = 0; c < n; ++c) W(i, c) = checked::sub(0, W(i, c));
    for (std::size_t r = 0; r < n; ++r) U(r, i) = checked::sub(0, U(r, i));
  }
};

}  // namespace detail

/// Smith normal form of a square integer matrix.
inline SmithDecomposition smith_decompose(const IntMatrix& a) {
  if (!a.square()) throw InvalidArgument("Smith form requires a square matrix");
  const std::size_t n = a.rows();
  detail::SmithWork w{a, IntMatrix::identity(n), IntMatrix::identity(n), n};

  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      // pivot: smallest nonzero |entry| in the trailing block
      std::size_t pr = n, pc = n;
      std::int64_t best = 0;
      for (std::size_t i = t; i < n; ++i)
        for (std::size_t j = t; j < n; ++j) {
          std::int64_t v = std::llabs(w.W(i, j));
          if (v != 0 && (best == 0 || v < best)) {
            best = v;
            pr = i;
            pc = j;
          }
        }
      if (best == 0) break;  // trailing block is zero
      w.swap_rows(t, pr);
      w.swap_cols(t, pc);

      bool clean = true;
      const std::int64_t p = w.W(t, t);
      for (std::size_t i = t + 1; i < n; ++i) {
        w.add_row(i, t, -(w.W(i, t) / p));
        if (w.W(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        w.add_col(j, t, -(w.W(t, j) / p));
        if (w.W(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // divisibility: pull any non-multiple of the pivot into the pivot row
      bool divides = true;
      for (std::size_t i = t + 1; i < n && divides; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (w.W(i, j) % p != 0) {
            w.add_row(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (w.W(t, t) < 0) w.negate_row(t);
  }
  return SmithDecomposition{std::move(w.U), std::move(w.W), std::move(w.V)};
}

/// Representatives of Z^m / A Z^m in mixed-radix order of the Smith diagonal:
/// k = U * j with 0 <= j_i < d_i. Requires det A != 0.
inline std::vector<std::vector<std::int64_t>> coset_representatives(const SmithDecomposition& snf) {
  const auto d = snf.diagonal();
  std::int64_t total = 1;
  for (auto di : d) {
    if (di == 0) throw SingularMatrix("coset enumeration of a singular matrix");
    total = checked::mul(total, di);
  }
  const std::size_t m = d.size();
  std::vector<std::vector<std::int64_t>> reps;
  reps.reserve(static_cast<std::size_t>(total));
  std::vector<std::int64_t> j(m, 0);
  for (std::int64_t idx = 0; idx < total; ++idx) {
    auto k = snf.U.apply(j);
    std::vector<std::int64_t> rep(m);
    for (std::size_t i = 0; i < m; ++i) rep[i] = checked::narrow(k[i]);
    reps.push_back(std::move(rep));
    // odometer, last digit fastest
    for (std::size_t pos = m; pos-- > 0;) {
      if (++j[pos] < d[pos]) break;
      j[pos] = 0;
    }
  }
  return reps;
}

inline std::vector<std::vector<std::int64_t>> coset_representatives(const IntMatrix& a) {
  return coset_representatives(smith_decompose(a));
}

}  // namespace gibbs
