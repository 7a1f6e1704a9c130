#pragma once

// Exact integer / rational linear algebra: Smith normal form, saturated
// kernels, Hermite row bases and congruence diagonalization.

#include "k3lines/matrix.hpp"

#include <optional>
#include <tuple>

namespace k3lines {

struct SmithDecomposition {
  IntegerMatrix S;  // diagonal, d1 | d2 | ... >= 0
  IntegerMatrix U;  // unimodular, rows x rows
  IntegerMatrix V;  // unimodular, cols x cols
  std::size_t rank = 0;

  std::vector<Integer> diagonal() const {
    std::vector<Integer> d;
    for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i) d.push_back(S(i, i));
    return d;
  }
};

namespace detail {

// Smallest nonzero |entry| in the trailing block [t.., t..]; ties broken lexicographically.
inline std::optional<std::pair<std::size_t, std::size_t>> smallest_entry(const IntegerMatrix& a, std::size_t t) {
  std::optional<std::pair<std::size_t, std::size_t>> best;
  Integer best_abs;
  for (std::size_t i = t; i < a.rows(); ++i)
    for (std::size_t j = t; j < a.cols(); ++j) {
      if (a(i, j) == 0) continue;
      Integer v = abs(a(i, j));
      if (!best || v < best_abs) {
        best = {i, j};
        best_abs = v;
      }
    }
  return best;
}

}  // namespace detail

// U * M * V = S with S in Smith normal form.
inline SmithDecomposition smith_decompose(const IntegerMatrix& m) {
  SmithDecomposition r{m, IntegerMatrix::identity(m.rows()), IntegerMatrix::identity(m.cols()), 0};
  IntegerMatrix& a = r.S;
  const std::size_t n = std::min(a.rows(), a.cols());

  auto move_pivot = [&](std::size_t t, std::size_t i, std::size_t j) {
    a.swap_rows(t, i);
    r.U.swap_rows(t, i);
    a.swap_cols(t, j);
    r.V.swap_cols(t, j);
  };

  for (std::size_t t = 0; t < n; ++t) {
    auto pos = detail::smallest_entry(a, t);
    if (!pos) break;
    move_pivot(t, pos->first, pos->second);

    for (;;) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < a.rows(); ++i) {
        if (a(i, t) == 0) continue;
        Integer q = floor_div(a(i, t), a(t, t));
        a.add_row(i, t, -q);
        r.U.add_row(i, t, -q);
        if (a(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < a.cols(); ++j) {
        if (a(t, j) == 0) continue;
        Integer q = floor_div(a(t, j), a(t, t));
        a.add_col(j, t, -q);
        r.V.add_col(j, t, -q);
        if (a(t, j) != 0) dirty = true;
      }
      if (dirty) {
        // A smaller remainder appeared in row/column t: make it the pivot.
        std::size_t bi = t, bj = t;
        Integer best = abs(a(t, t));
        for (std::size_t i = t + 1; i < a.rows(); ++i)
          if (a(i, t) != 0 && abs(a(i, t)) < best) {
            best = abs(a(i, t));
            bi = i;
            bj = t;
          }
        for (std::size_t j = t + 1; j < a.cols(); ++j)
          if (a(t, j) != 0 && abs(a(t, j)) < best) {
            best = abs(a(t, j));
            bi = t;
            bj = j;
          }
        move_pivot(t, bi, bj);
        continue;
      }
      // Row and column are clear; enforce divisibility of the trailing block.
      std::optional<std::size_t> bad_row;
      for (std::size_t i = t + 1; i < a.rows() && !bad_row; ++i)
        for (std::size_t j = t + 1; j < a.cols(); ++j)
          if (a(i, j) % a(t, t) != 0) {
            bad_row = i;
            break;
          }
      if (!bad_row) break;
      a.add_row(t, *bad_row, 1);
      r.U.add_row(t, *bad_row, 1);
    }
    if (a(t, t) < 0) {
      a.negate_row(t);
      r.U.negate_row(t);
    }
    ++r.rank;
  }
  return r;
}

// Row-style Hermite normal form: nonzero rows in echelon form, positive pivots,
// entries above each pivot reduced into [0, pivot). Spans the same Z-module.
inline IntegerMatrix hermite_rows(IntegerMatrix a) {
  std::size_t r = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    for (;;) {
      std::optional<std::size_t> best;
      for (std::size_t i = r; i < a.rows(); ++i)
        if (a(i, c) != 0 && (!best || abs(a(i, c)) < abs(a(*best, c)))) best = i;
      if (!best) break;
      a.swap_rows(r, *best);
      bool done = true;
      for (std::size_t i = r + 1; i < a.rows(); ++i) {
        if (a(i, c) == 0) continue;
        a.add_row(i, r, -floor_div(a(i, c), a(r, c)));
        if (a(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (r < a.rows() && a(r, c) != 0) {
      if (a(r, c) < 0) a.negate_row(r);
      for (std::size_t i = 0; i < r; ++i) a.add_row(i, r, -floor_div(a(i, c), a(r, c)));
      pivots.push_back(c);
      ++r;
    }
  }
  return a.rows_slice(0, r);
}

// Saturated basis of {x in Z^n : M x = 0}, as rows in Hermite form.
inline std::vector<std::vector<Integer>> integral_kernel(const IntegerMatrix& m) {
  auto sd = smith_decompose(m);
  const std::size_t nullity = m.cols() - sd.rank;
  if (nullity == 0) return {};
  IntegerMatrix basis = sd.V.columns(sd.rank, nullity).transpose();
  IntegerMatrix h = hermite_rows(basis);
  std::vector<std::vector<Integer>> out;
  for (std::size_t i = 0; i < h.rows(); ++i) out.push_back(h.row(i));
  return out;
}

// Basis (as rows) of the Z-module spanned by rational row vectors.
inline RationalMatrix rational_row_basis(const std::vector<RationalVector>& gens, std::size_t dim) {
  Integer den = 1;
  for (const auto& g : gens) den = lcm(den, g.denominator());
  IntegerMatrix scaled(gens.size(), dim);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < dim; ++j) scaled(i, j) = gens[i].numerators()[j] * (den / gens[i].denominator());
  IntegerMatrix h = hermite_rows(scaled);
  RationalMatrix out(h.rows(), dim);
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = 0; j < dim; ++j) out(i, j) = Rational(h(i, j), den);
  return out;
}

// P^T G P = diag(d) over Q, for symmetric G.
struct CongruenceDiagonalization {
  RationalMatrix P;
  std::vector<Rational> d;
};

inline CongruenceDiagonalization diagonalize(const RationalMatrix& g) {
  if (!g.symmetric()) throw InputError("diagonalize: matrix is not symmetric");
  const std::size_t n = g.rows();
  RationalMatrix a = g;
  RationalMatrix p = RationalMatrix::identity(n);
  auto swap_sym = [&](std::size_t i, std::size_t j) {
    a.swap_rows(i, j);
    a.swap_cols(i, j);
    p.swap_cols(i, j);
  };
  for (std::size_t k = 0; k < n; ++k) {
    if (a(k, k) == 0) {
      std::optional<std::size_t> diag_pivot, off_pivot;
      for (std::size_t j = k + 1; j < n; ++j) {
        if (!diag_pivot && a(j, j) != 0) diag_pivot = j;
        if (!off_pivot && a(k, j) != 0) off_pivot = j;
      }
      if (diag_pivot) {
        swap_sym(k, *diag_pivot);
      } else if (off_pivot) {
        // 2x2 hyperbolic block: e_k + e_j has square 2 a(k, j) != 0.
        std::size_t j = *off_pivot;
        a.add_row(k, j, 1);
        a.add_col(k, j, 1);
        p.add_col(k, j, 1);
      } else {
        continue;
      }
    }
    if (a(k, k) == 0) continue;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rational f = -a(i, k) / a(k, k);
      a.add_row(i, k, f);
      a.add_col(i, k, f);
      p.add_col(i, k, f);
    }
  }
  CongruenceDiagonalization out{p, {}};
  for (std::size_t i = 0; i < n; ++i) out.d.push_back(a(i, i));
  return out;
}

struct Inertia {
  std::size_t plus = 0;
  std::size_t minus = 0;
  std::size_t zero = 0;
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

inline Inertia inertia(const RationalMatrix& m) {
  Inertia in;
  for (const auto& x : diagonalize(m).d) {
    if (x > 0) ++in.plus;
    else if (x < 0) ++in.minus;
    else ++in.zero;
  }
  return in;
}
inline Inertia inertia(const IntegerMatrix& m) { return inertia(matrix_cast<Rational>(m)); }

}  // namespace k3lines
