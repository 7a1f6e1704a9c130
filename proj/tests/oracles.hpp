#pragma once

// Brute-force oracles shared by the unit tests and the acceptance binary.

#include "k3lines/fano.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace k3test {

// Search a basis of `b` inside `a` with coordinates in [-3, 3], column by column.
inline bool isometric_lattices(const Lattice& a, const Lattice& b) {
  if (a.rank() != b.rank() || a.det() != b.det()) return false;
  const std::size_t n = a.rank();
  std::vector<std::vector<Integer>> box;
  std::vector<Integer> x(n, -3);
  for (;;) {
    box.push_back(x);
    std::size_t i = 0;
    while (i < n && x[i] == 3) x[i++] = -3;
    if (i == n) break;
    ++x[i];
  }
  std::vector<std::vector<Integer>> cols;
  std::function<bool(std::size_t)> rec = [&](std::size_t j) {
    if (j == n) {
      IntegerMatrix p(n, n);
      for (std::size_t c = 0; c < n; ++c) p.set_column(c, cols[c]);
      return abs(determinant(p)) == 1;
    }
    for (const auto& v : box) {
      if (a.product(v, v) != b.gram()(j, j)) continue;
      bool ok = true;
      for (std::size_t k = 0; k < j && ok; ++k) ok = a.product(v, cols[k]) == b.gram()(k, j);
      if (!ok) continue;
      cols.push_back(v);
      if (rec(j + 1)) return true;
      cols.pop_back();
    }
    return false;
  };
  return rec(0);
}

inline Lattice random_lattice_with_signature(std::size_t plus, std::size_t minus, long bound) {
  for (;;) {
    Lattice l(random_even_gram(plus + minus, bound));
    const auto& s = l.signature();
    if (s.plus == plus && s.minus == minus && abs(l.det()) <= 3000) return l;
  }
}

// Reduced even positive definite binary forms [a, b, c] (|2b| <= a <= c) of determinant det.
inline std::vector<Lattice> reduced_binary_forms(const Integer& det) {
  std::vector<Lattice> out;
  for (Integer a = 2; 3 * a * a <= 4 * det; a += 2)
    for (Integer b = 0; 2 * b <= a; ++b) {
      Integer num = det + b * b;
      if (num % a != 0) continue;
      Integer c = num / a;
      if (c < a || c % 2 != 0) continue;
      out.push_back(binary_lattice(a, b, c));
    }
  return out;
}

inline Integer min_norm_binary(const Lattice& l) {
  Integer best = -1;
  for (int x = -12; x <= 12; ++x)
    for (int y = -12; y <= 12; ++y) {
      if (x == 0 && y == 0) continue;
      Integer n = l.product(std::vector<Integer>{x, y}, std::vector<Integer>{x, y});
      if (best < 0 || n < best) best = n;
    }
  return best;
}

// Vectors of the given norm in a positive definite lattice, coordinates in [-k, k].
inline std::vector<std::vector<Integer>> norm_vectors_in_box(const Lattice& l, const Integer& norm, int k) {
  std::vector<std::vector<Integer>> out;
  const std::size_t n = l.rank();
  std::vector<Integer> x(n, -k);
  for (;;) {
    if (l.product(x, x) == norm) out.push_back(x);
    std::size_t i = 0;
    while (i < n && x[i] == k) x[i++] = -k;
    if (i == n) break;
    ++x[i];
  }
  return out;
}

// All 2d-subsets S with M (sum e_v - e_h) = 0 for the Fano Gram matrix M.
inline std::vector<std::vector<std::size_t>> brute_force_fragments(const LineConfiguration& cfg) {
  const std::size_t n = cfg.size(), k = static_cast<std::size_t>(cfg.degree);
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  IntegerMatrix m = fano_gram(cfg);
  std::vector<char> pick(n, 0);
  std::fill(pick.end() - static_cast<long>(k), pick.end(), 1);
  do {
    std::vector<std::int64_t> x(n + 1, 0);
    std::vector<std::size_t> s;
    for (std::size_t v = 0; v < n; ++v)
      if (pick[v]) {
        x[v] = 1;
        s.push_back(v);
      }
    x[n] = -1;
    bool zero = true;
    for (std::size_t i = 0; i <= n && zero; ++i) {
      std::int64_t acc = 0;
      for (std::size_t j = 0; j <= n; ++j) acc += to_int64(m(i, j)) * x[j];
      zero = acc == 0;
    }
    if (zero) out.push_back(s);
  } while (std::next_permutation(pick.begin(), pick.end()));
  std::sort(out.begin(), out.end());
  return out;
}

// Random multigraph; with plant > 0 a catalog fragment of that size is
// planted and most outside vertices meet it once.
inline Multigraph random_multigraph(std::size_t n, std::size_t plant) {
  Multigraph g(n);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng());
  std::vector<char> planted(n, 0);
  if (plant) {
    std::vector<const Multigraph*> options;
    for (const auto& e : fragment_catalog())
      if (e.graph.size() == plant) options.push_back(&e.graph);
    const Multigraph& f = *options[static_cast<std::size_t>(uniform(0, static_cast<long>(options.size()) - 1))];
    for (std::size_t a = 0; a < plant; ++a) {
      planted[perm[a]] = 1;
      for (std::size_t b = a + 1; b < plant; ++b)
        if (f.multiplicity(a, b)) g.set_multiplicity(perm[a], perm[b], f.multiplicity(a, b));
    }
    for (std::size_t v = plant; v < n; ++v)
      if (uniform(0, 7)) g.set_multiplicity(perm[v], perm[static_cast<std::size_t>(uniform(0, static_cast<long>(plant) - 1))], 1);
  }
  const long density = uniform(1, 6);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      if (g.multiplicity(a, b) || uniform(0, 9) >= density) continue;
      if ((planted[a] || planted[b]) && uniform(0, 1)) continue;
      g.set_multiplicity(a, b, static_cast<int>(uniform(0, 9) < 8 ? 1 : uniform(2, 3)));
    }
  return g;
}

inline std::vector<Permutation> brute_force_automorphisms(const Multigraph& g) {
  std::vector<Permutation> out;
  Permutation p = identity_permutation(g.size());
  do {
    if (g.is_automorphism(p)) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace k3test
