#pragma once

// Multigraphs with edge multiplicities, canonical labeling and automorphism
// groups by individualization-refinement.

#include "k3lines/numeric.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

namespace k3lines {

using Permutation = std::vector<std::size_t>;  // p[v] = image of v

inline Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  return p;
}
// (a o b)(v) = a(b(v))
inline Permutation compose(const Permutation& a, const Permutation& b) {
  Permutation c(b.size());
  for (std::size_t v = 0; v < b.size(); ++v) c[v] = a[b[v]];
  return c;
}
inline Permutation inverse(const Permutation& p) {
  Permutation q(p.size());
  for (std::size_t v = 0; v < p.size(); ++v) q[p[v]] = v;
  return q;
}
inline bool is_identity(const Permutation& p) {
  for (std::size_t v = 0; v < p.size(); ++v)
    if (p[v] != v) return false;
  return true;
}

class Multigraph {
 public:
  Multigraph() = default;
  explicit Multigraph(std::size_t n) : n_(n), m_(n * n, 0) {}

  std::size_t size() const { return n_; }
  int multiplicity(std::size_t v, std::size_t w) const { return m_[v * n_ + w]; }
  void set_multiplicity(std::size_t v, std::size_t w, int m) {
    if (v == w) throw InputError("multigraph: loops are not allowed");
    if (m < 0 || m > 3) throw InputError("multigraph: multiplicity must lie in [0, 3]");
    m_[v * n_ + w] = m_[w * n_ + v] = static_cast<std::uint8_t>(m);
  }
  int valency(std::size_t v) const {
    int s = 0;
    for (std::size_t w = 0; w < n_; ++w) s += multiplicity(v, w);
    return s;
  }

  // Induced subgraph on `vertices` (in the given order).
  Multigraph induced(const std::vector<std::size_t>& vertices) const {
    Multigraph g(vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i)
      for (std::size_t j = i + 1; j < vertices.size(); ++j)
        if (int m = multiplicity(vertices[i], vertices[j])) g.set_multiplicity(i, j, m);
    return g;
  }

  Multigraph disjoint_union(const Multigraph& other) const {
    Multigraph g(n_ + other.n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if (int m = multiplicity(i, j)) g.set_multiplicity(i, j, m);
    for (std::size_t i = 0; i < other.n_; ++i)
      for (std::size_t j = i + 1; j < other.n_; ++j)
        if (int m = other.multiplicity(i, j)) g.set_multiplicity(n_ + i, n_ + j, m);
    return g;
  }

  bool is_automorphism(const Permutation& p) const {
    if (p.size() != n_) return false;
    for (std::size_t v = 0; v < n_; ++v)
      for (std::size_t w = v + 1; w < n_; ++w)
        if (multiplicity(v, w) != multiplicity(p[v], p[w])) return false;
    return true;
  }

  friend bool operator==(const Multigraph&, const Multigraph&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> m_;
};

inline Multigraph graph_from_edges(std::size_t n, const std::vector<std::array<std::size_t, 3>>& edges) {
  Multigraph g(n);
  for (auto [v, w, m] : edges) {
    if (v >= n || w >= n) throw InputError("edge endpoint out of range");
    g.set_multiplicity(v, w, static_cast<int>(m));
  }
  return g;
}

// Girth with multi-edges counting as 2-cycles; nullopt for forests.
inline std::optional<std::size_t> girth(const Multigraph& g) {
  const std::size_t n = g.size();
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t w = v + 1; w < n; ++w)
      if (g.multiplicity(v, w) >= 2) return 2;
  std::optional<std::size_t> best;
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::size_t> dist(n, SIZE_MAX), parent(n, SIZE_MAX);
    std::queue<std::size_t> q;
    dist[s] = 0;
    q.push(s);
    while (!q.empty()) {
      std::size_t v = q.front();
      q.pop();
      for (std::size_t w = 0; w < n; ++w) {
        if (!g.multiplicity(v, w)) continue;
        if (dist[w] == SIZE_MAX) {
          dist[w] = dist[v] + 1;
          parent[w] = v;
          q.push(w);
        } else if (parent[v] != w) {
          std::size_t len = dist[v] + dist[w] + 1;
          if (!best || len < *best) best = len;
        }
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Equitable partition refinement. A coloring assigns each vertex a color in
// [0, k); refinement renumbers colors by the sorted (color, neighbourhood
// profile) signatures, so the result is isomorphism invariant.

namespace detail {

using Coloring = std::vector<std::size_t>;

struct Refined {
  Coloring color;
  std::size_t classes = 0;
  // Per color: the neighbourhood profile shared by its members.
  std::vector<std::vector<std::pair<std::size_t, int>>> profile;
};

inline Refined refine(const Multigraph& g, Coloring color) {
  const std::size_t n = g.size();
  using Signature = std::pair<std::size_t, std::vector<std::pair<std::size_t, int>>>;
  std::size_t classes = std::set<std::size_t>(color.begin(), color.end()).size();
  std::vector<Signature> sig(n);
  for (;;) {
    for (std::size_t v = 0; v < n; ++v) {
      std::map<std::pair<std::size_t, int>, int> counts;
      for (std::size_t w = 0; w < n; ++w)
        if (int m = g.multiplicity(v, w)) ++counts[{color[w], m}];
      std::vector<std::pair<std::size_t, int>> prof;
      for (auto& [key, c] : counts) {
        prof.emplace_back(key.first, key.second);
        prof.emplace_back(SIZE_MAX, c);
      }
      sig[v] = {color[v], std::move(prof)};
    }
    std::vector<Signature> uniq(sig);
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    Coloring next(n);
    for (std::size_t v = 0; v < n; ++v)
      next[v] = static_cast<std::size_t>(std::lower_bound(uniq.begin(), uniq.end(), sig[v]) - uniq.begin());
    color = std::move(next);
    if (uniq.size() == classes) {
      Refined r{std::move(color), uniq.size(), {}};
      for (auto& s : uniq) r.profile.push_back(s.second);
      return r;
    }
    classes = uniq.size();
  }
}

// Give v its own color, ahead of the rest of its cell, then refine.
inline Refined individualize(const Multigraph& g, const Coloring& color, std::size_t v) {
  Coloring c(color.size());
  for (std::size_t w = 0; w < color.size(); ++w) c[w] = 2 * color[w] + (w == v ? 0 : 1);
  return refine(g, std::move(c));
}

// First color class with more than one member; nullopt when discrete.
inline std::optional<std::size_t> target_cell(const Refined& r) {
  std::vector<std::size_t> count(r.classes, 0);
  for (auto c : r.color) ++count[c];
  for (std::size_t c = 0; c < r.classes; ++c)
    if (count[c] > 1) return c;
  return std::nullopt;
}

inline std::vector<std::size_t> members(const Refined& r, std::size_t cell) {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < r.color.size(); ++v)
    if (r.color[v] == cell) out.push_back(v);
  return out;
}

inline bool same_shape(const Refined& a, const Refined& b) { return a.classes == b.classes && a.profile == b.profile; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Automorphism group with a base and strong generating set found by search.

class AutomorphismGroup {
 public:
  static constexpr std::size_t kEnumerationCap = 1'000'000;

  explicit AutomorphismGroup(const Multigraph& g) : graph_(g) { build(); }

  const std::vector<Permutation>& generators() const { return generators_; }
  const Integer& order() const { return order_; }
  std::size_t degree() const { return graph_.size(); }

  // Every group element, in a deterministic order. Throws CapExceeded for huge groups.
  std::vector<Permutation> elements() const {
    if (order_ > Integer(kEnumerationCap))
      throw CapExceeded("automorphism group of order " + order_.str() + " is too large to enumerate");
    std::vector<Permutation> out{identity_permutation(graph_.size())};
    // g = u_0 o u_1 o ... o u_{m-1}
    for (std::size_t lvl = transversals_.size(); lvl-- > 0;) {
      std::vector<Permutation> next;
      next.reserve(out.size() * transversals_[lvl].size());
      for (const auto& [point, u] : transversals_[lvl])
        for (const auto& h : out) next.push_back(compose(u, h));
      out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  void build() {
    const std::size_t n = graph_.size();
    order_ = 1;
    if (n == 0) return;
    // Base path.
    std::vector<detail::Refined> path{detail::refine(graph_, detail::Coloring(n, 0))};
    std::vector<std::size_t> base, cells;
    while (auto cell = detail::target_cell(path.back())) {
      auto mem = detail::members(path.back(), *cell);
      base.push_back(mem.front());
      cells.push_back(*cell);
      path.push_back(detail::individualize(graph_, path.back().color, mem.front()));
    }
    const detail::Coloring& leaf = path.back().color;

    std::vector<std::vector<Permutation>> level_gens(base.size());
    transversals_.assign(base.size(), {});
    for (std::size_t lvl = base.size(); lvl-- > 0;) {
      std::vector<Permutation> gens;
      for (std::size_t j = lvl; j < base.size(); ++j)
        gens.insert(gens.end(), level_gens[j].begin(), level_gens[j].end());
      auto orbit = orbit_transversal(base[lvl], gens);
      for (std::size_t c : detail::members(path[lvl], cells[lvl])) {
        if (orbit.count(c)) continue;
        auto found = search(path, cells, leaf, lvl, detail::individualize(graph_, path[lvl].color, c), lvl + 1);
        if (!found) continue;
        level_gens[lvl].push_back(*found);
        gens.push_back(*found);
        orbit = orbit_transversal(base[lvl], gens);
      }
      transversals_[lvl] = std::move(orbit);
      order_ *= transversals_[lvl].size();
    }
    for (auto& lg : level_gens) generators_.insert(generators_.end(), lg.begin(), lg.end());
  }

  std::map<std::size_t, Permutation> orbit_transversal(std::size_t point, const std::vector<Permutation>& gens) const {
    std::map<std::size_t, Permutation> orbit{{point, identity_permutation(graph_.size())}};
    std::queue<std::size_t> q;
    q.push(point);
    while (!q.empty()) {
      std::size_t x = q.front();
      q.pop();
      for (const auto& s : gens) {
        std::size_t y = s[x];
        if (orbit.count(y)) continue;
        orbit.emplace(y, compose(s, orbit.at(x)));
        q.push(y);
      }
    }
    return orbit;
  }

  // Follows the base path shape from `current` (matching path[depth]); returns
  // an automorphism mapping the base leaf to a leaf below `current`.
  std::optional<Permutation> search(const std::vector<detail::Refined>& path, const std::vector<std::size_t>& cells,
                                    const detail::Coloring& leaf, std::size_t lvl, const detail::Refined& current,
                                    std::size_t depth) const {
    if (!detail::same_shape(current, path[depth])) return std::nullopt;
    if (depth == path.size() - 1) {
      // Both colorings are discrete: map v (color c in the base leaf) to the
      // vertex with color c here.
      Permutation by_color(graph_.size());
      for (std::size_t w = 0; w < graph_.size(); ++w) by_color[current.color[w]] = w;
      Permutation p(graph_.size());
      for (std::size_t v = 0; v < graph_.size(); ++v) p[v] = by_color[leaf[v]];
      if (graph_.is_automorphism(p)) return p;
      return std::nullopt;
    }
    for (std::size_t x : detail::members(current, cells[depth])) {
      auto r = search(path, cells, leaf, lvl, detail::individualize(graph_, current.color, x), depth + 1);
      if (r) return r;
    }
    return std::nullopt;
  }

  Multigraph graph_;
  std::vector<Permutation> generators_;
  std::vector<std::map<std::size_t, Permutation>> transversals_;
  Integer order_ = 1;
};

// ---------------------------------------------------------------------------
// Canonical certificate: the lexicographically smallest relabeled adjacency
// string over all leaves of the individualization-refinement tree.

inline std::string canonical_certificate(const Multigraph& g) {
  const std::size_t n = g.size();
  std::string best;
  std::function<void(const detail::Refined&)> walk = [&](const detail::Refined& r) {
    auto cell = detail::target_cell(r);
    if (!cell) {
      Permutation by_color(n);
      for (std::size_t v = 0; v < n; ++v) by_color[r.color[v]] = v;
      std::string s;
      s.reserve(n * (n - 1) / 2);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) s += static_cast<char>('0' + g.multiplicity(by_color[i], by_color[j]));
      if (best.empty() || s < best) best = std::move(s);
      return;
    }
    for (std::size_t x : detail::members(r, *cell)) walk(detail::individualize(g, r.color, x));
  };
  walk(detail::refine(g, detail::Coloring(n, 0)));
  return "n" + std::to_string(n) + ":" + best;
}

}  // namespace k3lines
