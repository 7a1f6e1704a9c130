#pragma once

// Line configurations on polarized K3 surfaces: the Fano lattice, h-fragments,
// the polarized stabilizer and candidate real structures.

#include "k3lines/graph.hpp"
#include "k3lines/lattice.hpp"
#include "k3lines/parallel.hpp"
#include "k3lines/real_criteria.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace k3lines {

struct LineConfiguration {
  std::int64_t degree = 2;  // h^2 = 2d
  Multigraph graph;
  std::vector<RationalVector> kernel;  // coordinates on (lines..., h)
  std::optional<TranscendentalSpec> transcendental;

  std::size_t size() const { return graph.size(); }
};

// Gram matrix on (lines..., h): v^2 = -2, v.h = 1, h^2 = 2d.
inline IntegerMatrix fano_gram(const LineConfiguration& cfg) {
  const std::size_t n = cfg.size();
  IntegerMatrix g(n + 1, n + 1);
  for (std::size_t v = 0; v < n; ++v) {
    g(v, v) = -2;
    g(v, n) = g(n, v) = 1;
    for (std::size_t w = 0; w < n; ++w)
      if (w != v) g(v, w) = cfg.graph.multiplicity(v, w);
  }
  g(n, n) = cfg.degree;
  return g;
}

inline void validate(const LineConfiguration& cfg) {
  if (cfg.degree < 2 || cfg.degree % 2 != 0) throw InputError("degree must be an even integer >= 2");
  const std::size_t n = cfg.size();
  RationalMatrix gram = matrix_cast<Rational>(fano_gram(cfg));
  for (std::size_t i = 0; i < cfg.kernel.size(); ++i) {
    const auto& x = cfg.kernel[i];
    if (x.size() != n + 1)
      throw InputError("kernel generator " + std::to_string(i) + " must have " + std::to_string(n + 1) + " entries");
    auto gx = gram * x.values();
    for (const auto& c : gx)
      if (denominator(c) != 1)
        throw InputError("kernel generator " + std::to_string(i) + " does not pair integrally with lines and h");
    Rational self = 0;
    for (std::size_t j = 0; j <= n; ++j) self += x[j] * gx[j];
    if (denominator(self) != 1 || numerator(self) % 2 != 0)
      throw InputError("kernel generator " + std::to_string(i) + " has non-even square " + to_string(self));
  }
  if (cfg.transcendental) validate(*cfg.transcendental);
}

// ---------------------------------------------------------------------------
// Fano lattice and the extension N

struct FanoLattice {
  IntegerMatrix gram;                          // on (lines..., h)
  std::vector<std::vector<Integer>> radical;   // saturated basis of the kernel of gram
  IntegerMatrix projection;                    // k x (n+1): coordinates in the quotient
  IntegerMatrix lift;                          // (n+1) x k: quotient basis in (lines..., h)
  Lattice quotient{IntegerMatrix()};           // Fano(Gamma) = (Z Gamma + Z h) / ker
  std::vector<std::string> warnings;
};

inline FanoLattice fano_lattice(const LineConfiguration& cfg) {
  FanoLattice f;
  f.gram = fano_gram(cfg);
  f.radical = integral_kernel(f.gram);
  auto sd = smith_decompose(f.gram);
  const std::size_t k = sd.rank;
  f.lift = sd.V.columns(0, k);
  f.projection = to_integer_matrix(inverse(sd.V)).rows_slice(0, k);
  f.quotient = Lattice(f.lift.transpose() * f.gram * f.lift);
  const auto& s = f.quotient.signature();
  if (s.plus != 1)
    f.warnings.push_back("Fano lattice has signature (" + std::to_string(s.plus) + "," + std::to_string(s.minus) +
                         "), not hyperbolic; the configuration is not realizable");
  if (k > 20) f.warnings.push_back("Fano lattice has rank " + std::to_string(k) + " > 20");
  return f;
}

struct Extension {
  FanoLattice fano;
  RationalMatrix basis;  // rows: basis of N in quotient coordinates
  Lattice lattice{IntegerMatrix()};
};

inline Extension extension_lattice(const LineConfiguration& cfg) {
  Extension e{fano_lattice(cfg), {}, Lattice(IntegerMatrix())};
  const std::size_t k = e.fano.quotient.rank();
  std::vector<RationalVector> gens;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Integer> unit(k, 0);
    unit[i] = 1;
    gens.emplace_back(unit);
  }
  RationalMatrix proj = matrix_cast<Rational>(e.fano.projection);
  for (const auto& x : cfg.kernel) gens.emplace_back(proj * x.values());
  e.basis = rational_row_basis(gens, k);
  RationalMatrix g = e.basis * matrix_cast<Rational>(e.fano.quotient.gram()) * e.basis.transpose();
  if (!is_integral(g)) throw InputError("kernel generators do not span an integral overlattice");
  IntegerMatrix gi = to_integer_matrix(g);
  for (std::size_t i = 0; i < k; ++i)
    if (gi(i, i) % 2 != 0) throw InputError("kernel generators do not span an even overlattice");
  e.lattice = Lattice(gi);
  return e;
}

// Action of the polarized isometry (sigma, eps) on quotient coordinates.
inline IntegerMatrix quotient_action(const FanoLattice& f, const Permutation& sigma, int eps) {
  const std::size_t n = sigma.size();
  IntegerMatrix perm(n + 1, n + 1);
  for (std::size_t v = 0; v < n; ++v) perm(sigma[v], v) = eps;
  perm(n, n) = eps;
  return f.projection * perm * f.lift;
}

// Action on N coordinates; nullopt when sigma does not preserve N.
inline std::optional<IntegerMatrix> extension_action(const Extension& e, const Permutation& sigma, int eps) {
  RationalMatrix a = matrix_cast<Rational>(quotient_action(e.fano, sigma, eps));
  RationalMatrix bt = e.basis.transpose();
  RationalMatrix an = inverse(bt) * a * bt;
  if (!is_integral(an)) return std::nullopt;
  return to_integer_matrix(an);
}

// ---------------------------------------------------------------------------
// Fragment catalog and classification

struct CatalogEntry {
  std::string name;
  Multigraph graph;
};

inline const std::vector<CatalogEntry>& fragment_catalog() {
  static const std::vector<CatalogEntry> catalog = [] {
    std::vector<CatalogEntry> c;
    c.push_back({"tritangent-pair", graph_from_edges(2, {{0, 1, 3}})});
    c.push_back({"K4", graph_from_edges(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 1}})});
    c.push_back({"prism", graph_from_edges(6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1},
                                               {0, 3, 1}, {1, 4, 1}, {2, 5, 1}})});
    std::vector<std::array<std::size_t, 3>> k33;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 3; j < 6; ++j) k33.push_back({i, j, 1});
    c.push_back({"K33", graph_from_edges(6, k33)});
    // Triangle 0,1,2 matched to the 3-side 3,4,5 of K(3,2) with 2-side 6,7.
    std::vector<std::array<std::size_t, 3>> k3k32{{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {0, 3, 1}, {1, 4, 1}, {2, 5, 1}};
    for (std::size_t i = 3; i < 6; ++i)
      for (std::size_t j = 6; j < 8; ++j) k3k32.push_back({i, j, 1});
    c.push_back({"K3uK32", graph_from_edges(8, k3k32)});
    std::vector<std::array<std::size_t, 3>> wagner;
    for (std::size_t i = 0; i < 8; ++i) wagner.push_back({i, (i + 1) % 8, 1});
    for (std::size_t i = 0; i < 4; ++i) wagner.push_back({i, i + 4, 1});
    c.push_back({"wagner", graph_from_edges(8, wagner)});
    std::vector<std::array<std::size_t, 3>> cube;
    for (std::size_t v = 0; v < 8; ++v)
      for (std::size_t bit = 1; bit < 8; bit <<= 1)
        if (!(v & bit)) cube.push_back({v, v | bit, 1});
    c.push_back({"cube", graph_from_edges(8, cube)});
    return c;
  }();
  return catalog;
}

inline const std::map<std::string, std::string>& catalog_certificates() {
  static const std::map<std::string, std::string> certs = [] {
    std::map<std::string, std::string> m;
    for (const auto& e : fragment_catalog()) m.emplace(canonical_certificate(e.graph), e.name);
    return m;
  }();
  return certs;
}

inline std::string classify_fragment(const Multigraph& sub) {
  for (std::size_t v = 0; v < sub.size(); ++v)
    if (sub.valency(v) != 3) throw InputError("classify_fragment: graph is not 3-regular");
  std::string cert = canonical_certificate(sub);
  auto it = catalog_certificates().find(cert);
  return it == catalog_certificates().end() ? cert : it->second;
}

// ---------------------------------------------------------------------------
// Fragments: 2d lines with sum h. Equivalently every chosen line meets the
// others with total multiplicity 3 and every other line meets them exactly once.

struct Fragment {
  std::vector<std::size_t> vertices;
  std::string type;

  friend bool operator==(const Fragment&, const Fragment&) = default;
  friend auto operator<=>(const Fragment&, const Fragment&) = default;
};

namespace detail {

inline void fragment_search(const Multigraph& g, std::size_t size, std::size_t next, std::vector<std::size_t>& chosen,
                            std::vector<int>& val, std::vector<char>& in, std::vector<std::vector<std::size_t>>& out) {
  const std::size_t n = g.size();
  if (chosen.size() == size) {
    for (std::size_t w = 0; w < n; ++w)
      if (val[w] != (in[w] ? 3 : 1)) return;
    out.push_back(chosen);
    return;
  }
  // Vertices below `next` that were skipped are final outsiders.
  for (std::size_t j = next; j + (size - chosen.size()) <= n; ++j) {
    bool ok = true;
    for (std::size_t w = 0; w < n && ok; ++w) {
      int add = g.multiplicity(j, w);
      if (!add) continue;
      int limit = in[w] ? 3 : (w < j ? 1 : 3);
      if (val[w] + add > limit) ok = false;
    }
    if (ok && val[j] <= 3) {
      chosen.push_back(j);
      in[j] = 1;
      for (std::size_t w = 0; w < n; ++w) val[w] += g.multiplicity(j, w);
      fragment_search(g, size, j + 1, chosen, val, in, out);
      for (std::size_t w = 0; w < n; ++w) val[w] -= g.multiplicity(j, w);
      in[j] = 0;
      chosen.pop_back();
    }
    // Skipping j makes it an outsider for good.
    if (val[j] > 1) return;
  }
}

}  // namespace detail

inline std::vector<Fragment> enumerate_fragments(const LineConfiguration& cfg) {
  const std::size_t n = cfg.size();
  const std::size_t size = static_cast<std::size_t>(cfg.degree);
  if (size > n) return {};
  auto parts = parallel_map(n - size + 1, [&](std::size_t first) {
    std::vector<std::vector<std::size_t>> found;
    std::vector<int> val(n, 0);
    std::vector<char> in(n, 0);
    std::vector<std::size_t> chosen{first};
    in[first] = 1;
    for (std::size_t w = 0; w < n; ++w) val[w] = cfg.graph.multiplicity(first, w);
    for (std::size_t w = 0; w < first; ++w)
      if (val[w] > 1) return found;
    detail::fragment_search(cfg.graph, size, first + 1, chosen, val, in, found);
    return found;
  });
  std::vector<Fragment> out;
  for (auto& part : parts)
    for (auto& s : part) out.push_back({s, classify_fragment(cfg.graph.induced(s))});
  std::sort(out.begin(), out.end());
  return out;
}

// numR: fragments mapped to themselves by sigma; numRR: fragments fixed pointwise.
struct RealCounts {
  std::size_t num_r = 0;
  std::size_t num_rr = 0;
};

inline RealCounts count_fragments_under(const std::vector<Fragment>& fragments, const Permutation& sigma) {
  RealCounts c;
  for (const auto& f : fragments) {
    std::vector<std::size_t> image;
    bool pointwise = true;
    for (auto v : f.vertices) {
      image.push_back(sigma[v]);
      if (sigma[v] != v) pointwise = false;
    }
    std::sort(image.begin(), image.end());
    if (image == f.vertices) ++c.num_r;
    if (pointwise) ++c.num_rr;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Graph invariants (r, girth, |Aut|)

struct GraphInvariants {
  std::size_t rank = 0;
  std::optional<std::size_t> girth;
  Integer aut_order = 1;
};

inline GraphInvariants graph_invariants(const Multigraph& g) {
  IntegerMatrix lines(g.size(), g.size());
  for (std::size_t v = 0; v < g.size(); ++v)
    for (std::size_t w = 0; w < g.size(); ++w) lines(v, w) = v == w ? Integer(-2) : Integer(g.multiplicity(v, w));
  return {rank(lines), girth(g), AutomorphismGroup(g).order()};
}

// ---------------------------------------------------------------------------
// Polarized stabilizer: pairs (sigma, eps) in Aut Gamma x {+-1} preserving N.

struct PolarizedStabilizer {
  std::vector<Permutation> generators;  // graph parts; -id is implicit
  std::vector<Permutation> elements;    // graph parts, sorted
  Integer order = 1;                    // counts both signs
};

inline std::vector<Permutation> generators_of(const std::vector<Permutation>& sorted_elements) {
  std::vector<Permutation> gens;
  if (sorted_elements.empty()) return gens;
  std::set<Permutation> closure{identity_permutation(sorted_elements.front().size())};
  for (const auto& x : sorted_elements) {
    if (closure.count(x)) continue;
    gens.push_back(x);
    std::vector<Permutation> frontier(closure.begin(), closure.end());
    while (!frontier.empty()) {
      std::vector<Permutation> next;
      for (const auto& y : frontier)
        for (const auto& s : gens) {
          Permutation z = compose(s, y);
          if (closure.insert(z).second) next.push_back(std::move(z));
        }
      frontier = std::move(next);
    }
  }
  return gens;
}

inline PolarizedStabilizer polarized_stabilizer(const LineConfiguration& cfg, const Extension& ext) {
  AutomorphismGroup aut(cfg.graph);
  PolarizedStabilizer s;
  auto all = aut.elements();
  if (cfg.kernel.empty()) {
    s.elements = std::move(all);
    s.generators = aut.generators();
  } else {
    auto keep = parallel_map(all.size(), [&](std::size_t i) { return extension_action(ext, all[i], 1).has_value(); });
    for (std::size_t i = 0; i < all.size(); ++i)
      if (keep[i]) s.elements.push_back(all[i]);
    s.generators = generators_of(s.elements);
  }
  s.order = 2 * Integer(s.elements.size());
  return s;
}

inline PolarizedStabilizer polarized_stabilizer(const LineConfiguration& cfg) {
  return polarized_stabilizer(cfg, extension_lattice(cfg));
}

// ---------------------------------------------------------------------------
// Real structure candidates: g = -sigma for graph involutions sigma.

enum class Admissibility { Admissible, Inadmissible, Unknown };

inline std::string to_string(Admissibility a) {
  switch (a) {
    case Admissibility::Admissible: return "ADMISSIBLE";
    case Admissibility::Inadmissible: return "INADMISSIBLE";
    case Admissibility::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

struct RealCandidate {
  Permutation sigma;
  int epsilon = -1;
  std::size_t class_size = 1;  // conjugates in the stabilizer
  std::size_t real_lines = 0;  // sigma-fixed vertices
  RealCounts counts;
  Admissibility admissibility = Admissibility::Unknown;
  std::string reason;
};

struct RealAnalysis {
  Extension extension;
  PolarizedStabilizer stabilizer;
  std::vector<Fragment> fragments;
  std::vector<RealCandidate> candidates;
  std::optional<Verdict> criterion;  // totally real criterion, when r >= 1
  std::vector<std::string> notes;
};

namespace detail {

// Involutions of the stabilizer up to conjugacy; representatives are class minima.
inline std::vector<std::pair<Permutation, std::size_t>> involution_class_reps(const PolarizedStabilizer& s) {
  std::set<Permutation> seen;
  std::vector<std::pair<Permutation, std::size_t>> out;
  for (const auto& x : s.elements) {
    if (!is_identity(compose(x, x)) || seen.count(x)) continue;
    std::set<Permutation> orbit{x};
    std::vector<Permutation> frontier{x};
    while (!frontier.empty()) {
      std::vector<Permutation> next;
      for (const auto& y : frontier)
        for (const auto& g : s.generators) {
          Permutation z = compose(compose(g, y), inverse(g));
          if (orbit.insert(z).second) next.push_back(std::move(z));
        }
      frontier = std::move(next);
    }
    seen.insert(orbit.begin(), orbit.end());
    out.emplace_back(x, orbit.size());
  }
  return out;
}

// Inverse of a bijective isometry f: d1 -> d2, as a map d2 -> d1.
inline FqfIsometry inverse_isometry(const FiniteQuadraticForm& d1, const FiniteQuadraticForm& d2, const FqfIsometry& f) {
  std::map<FqfElement, FqfElement> back;
  for (const auto& x : d1.elements()) back.emplace(apply(d2, f, x), x);
  FqfIsometry inv;
  inv.anti = f.anti;
  for (std::size_t j = 0; j < d2.generator_count(); ++j) inv.images.push_back(back.at(d2.generator(j)));
  return inv;
}

}  // namespace detail

inline RealAnalysis real_structure_candidates(const LineConfiguration& cfg) {
  validate(cfg);
  RealAnalysis a{extension_lattice(cfg), {}, {}, {}, std::nullopt, {}};
  const Extension& ext = a.extension;
  a.stabilizer = polarized_stabilizer(cfg, ext);
  a.fragments = enumerate_fragments(cfg);
  for (const auto& w : ext.fano.warnings) a.notes.push_back(w);

  const Lattice& n_lat = ext.lattice;
  const long r = 22 - static_cast<long>(n_lat.rank());
  const bool hyperbolic = n_lat.signature().plus == 1 && n_lat.nondegenerate();
  std::optional<Discriminant> d_n;
  if (hyperbolic) d_n = discriminant(n_lat);
  if (d_n && r >= 1) a.criterion = totally_real_criterion(d_n->form, r, n_lat.det());

  // Transcendental side, shared by all candidates.
  std::optional<TSideInvolutions> t_side;
  std::vector<FqfIsometry> phis;
  std::vector<FqfIsometry> phi_inverses;
  std::string t_problem;
  if (!hyperbolic) {
    t_problem = "N is not hyperbolic";
  } else if (cfg.transcendental && !std::holds_alternative<GenericDiscr>(*cfg.transcendental)) {
    t_side = t_side_involution_classes(*cfg.transcendental);
    const Lattice t = transcendental_lattice(*cfg.transcendental);
    if (static_cast<long>(t.rank()) != r) {
      t_problem = "transcendental lattice has rank " + std::to_string(t.rank()) + " but 22 - rank N = " + std::to_string(r);
    } else {
      phis = fqf_isometries(d_n->form, t_side->discriminant.form, true);
      if (phis.empty()) t_problem = "no anti-isometry discr N -> discr T exists";
      for (const auto& phi : phis)
        phi_inverses.push_back(detail::inverse_isometry(d_n->form, t_side->discriminant.form, phi));
    }
  }

  auto reps = detail::involution_class_reps(a.stabilizer);
  a.candidates = parallel_map(reps.size(), [&](std::size_t i) {
    RealCandidate c;
    c.sigma = reps[i].first;
    c.class_size = reps[i].second;
    for (std::size_t v = 0; v < c.sigma.size(); ++v)
      if (c.sigma[v] == v) ++c.real_lines;
    c.counts = count_fragments_under(a.fragments, c.sigma);
    const bool trivial = is_identity(c.sigma);

    if (!cfg.transcendental || std::holds_alternative<GenericDiscr>(*cfg.transcendental)) {
      const bool generic = cfg.transcendental.has_value();
      if (trivial && a.criterion && !generic) {
        switch (a.criterion->kind) {
          case VerdictKind::YesContains2:
          case VerdictKind::YesContainsU2: c.admissibility = Admissibility::Admissible; break;
          case VerdictKind::No: c.admissibility = Admissibility::Inadmissible; break;
          case VerdictKind::Unknown: c.admissibility = Admissibility::Unknown; break;
        }
        c.reason = "totally real criterion: " + to_string(a.criterion->kind);
      } else if (generic) {
        c.reason = "transcendental lattice known only through its discriminant form; O(T) is not available";
        if (trivial && a.criterion) c.reason += "; totally real criterion: " + to_string(a.criterion->kind);
      } else {
        c.reason = trivial ? "totally real criterion not applicable (r < 1 or N not hyperbolic)"
                           : "no transcendental lattice supplied";
      }
      return c;
    }
    if (!t_problem.empty()) {
      c.reason = t_problem;
      return c;
    }
    auto action = extension_action(ext, c.sigma, -1);
    if (!action) {
      c.reason = "sigma does not preserve N";
      return c;
    }
    const FiniteQuadraticForm& dt = t_side->discriminant.form;
    const FqfIsometry g_bar = d_n->induced(*action);
    for (std::size_t k = 0; k < phis.size(); ++k) {
      FqfIsometry conj = compose(dt, compose(dt, phis[k], g_bar), phi_inverses[k]);
      if (std::binary_search(t_side->realizable.begin(), t_side->realizable.end(), conj)) {
        c.admissibility = Admissibility::Admissible;
        c.reason = "matched through anti-isometry " + std::to_string(k + 1) + " of " + std::to_string(phis.size());
        return c;
      }
    }
    c.admissibility = Admissibility::Inadmissible;
    c.reason = "no anti-isometry (" + std::to_string(phis.size()) +
               " checked) carries the action on discr N to a realizable involution of discr T";
    return c;
  });
  return a;
}

}  // namespace k3lines
