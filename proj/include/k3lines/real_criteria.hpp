#pragma once

// Existence of a transcendental lattice T containing [2] or U(2), and the
// transcendental side of real structures: involutions of O^-(T) and their
// images in Aut(discr T).

#include "k3lines/fqf.hpp"
#include "k3lines/lattice.hpp"
#include "k3lines/padic.hpp"

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace k3lines {

enum class VerdictKind { YesContains2, YesContainsU2, No, Unknown };

inline std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::YesContains2: return "YES_CONTAINS_2";
    case VerdictKind::YesContainsU2: return "YES_CONTAINS_U2";
    case VerdictKind::No: return "NO";
    case VerdictKind::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  std::vector<std::string> trace;
};

// ---------------------------------------------------------------------------
// Transcendental lattice data

struct Definite2 {
  Integer a, b, c;  // Gram [[a, b], [b, c]]
};
struct TwoU {
  Integer n;  // 2U(n)
};
struct GenericDiscr {
  FiniteQuadraticForm form;
  std::size_t rank = 0;
};
using TranscendentalSpec = std::variant<Definite2, TwoU, GenericDiscr>;

inline void validate(const TranscendentalSpec& t) {
  if (auto* d = std::get_if<Definite2>(&t)) {
    Lattice l = binary_lattice(d->a, d->b, d->c);
    if (!l.positive_definite()) throw InputError("definite2: lattice is not positive definite");
  } else if (auto* u = std::get_if<TwoU>(&t)) {
    if (u->n < 1) throw InputError("twoU: scale must be at least 1");
  } else {
    const auto& g = std::get<GenericDiscr>(t);
    for (const auto& p : g.form.primes())
      if (g.form.ell(p) > g.rank)
        throw InputError("discr: rank " + std::to_string(g.rank) + " is below ell_" + p.str());
  }
}

inline Lattice transcendental_lattice(const TranscendentalSpec& t) {
  if (auto* d = std::get_if<Definite2>(&t)) return binary_lattice(d->a, d->b, d->c);
  if (auto* u = std::get_if<TwoU>(&t)) return direct_sum(hyperbolic_plane(), hyperbolic_plane()).rescaled(u->n);
  throw InputError("no lattice representative for a generic discriminant form");
}

// ---------------------------------------------------------------------------
// Totally real criterion

namespace detail {

enum class CaseResult { Pass, Fail, Unknown };

// Smallest odd prime p, coprime to `avoid`, at which c is not a square.
inline Integer nonresidue_prime(const Integer& c, const Integer& avoid) {
  for (Integer p = 3;; p += 2) {
    if (!is_prime(p) || avoid % p == 0) continue;
    if (legendre(c, p) == -1) return p;
  }
}

// Bullets at odd primes. `slack` is 2 for the [2]-case and 3 for the U(2)-case;
// the equality case compares det N_p with `target`.
inline CaseResult odd_primes(const FiniteQuadraticForm& d, long r, long slack, const Integer& target,
                             const Integer& size, std::vector<std::string>& trace, const std::string& tag) {
  CaseResult result = CaseResult::Pass;
  for (const auto& p : d.primes()) {
    if (p == 2) continue;
    const long ell = static_cast<long>(d.ell(p));
    if (ell <= r - slack) {
      trace.push_back(tag + " p=" + p.str() + ": ell=" + std::to_string(ell) + " <= r-" + std::to_string(slack) + ", pass");
    } else if (ell == r - slack + 1) {
      Rational det = d.p_part(p).form.gram_determinant();
      bool ok = square_class_equal(det, Rational(target), p);
      trace.push_back(tag + " p=" + p.str() + ": ell=r-" + std::to_string(slack - 1) + ", det=" + to_string(det) +
                      (ok ? " matches " : " does not match ") + target.str() + " mod squares, " + (ok ? "pass" : "fail"));
      if (!ok) result = CaseResult::Fail;
    } else {
      trace.push_back(tag + " p=" + p.str() + ": ell=" + std::to_string(ell) + " > r-" + std::to_string(slack - 1) +
                      ", fail");
      result = CaseResult::Fail;
    }
  }
  // Primes not dividing |N| have ell = 0.
  if (0 <= r - slack) {
    trace.push_back(tag + " odd p not dividing |N|: ell=0 <= r-" + std::to_string(slack) + ", pass");
  } else if (0 == r - slack + 1) {
    Integer p = nonresidue_prime(target, 2 * size);
    trace.push_back(tag + " p=" + p.str() + " (coprime to |N|): ell=0=r-" + std::to_string(slack - 1) + ", det=1 vs " +
                    target.str() + " is not a square mod " + p.str() + ", fail");
    result = CaseResult::Fail;
  } else {
    trace.push_back(tag + " odd p not dividing |N|: ell=0 > r-" + std::to_string(slack - 1) + ", fail");
    result = CaseResult::Fail;
  }
  return result;
}

inline std::vector<FqfElement> order_two_elements(const FiniteQuadraticForm& f) {
  std::vector<FqfElement> out;
  for (const auto& x : f.elements())
    if (f.order(x) == 2) out.push_back(x);
  return out;
}

inline CaseResult two_case_at_2(const FiniteQuadraticForm& d, long r, const Integer& size, std::vector<std::string>& trace) {
  const long ell = static_cast<long>(d.ell(2));
  const std::string head = "[2]-case p=2: ell=" + std::to_string(ell);
  if (ell <= r - 2) {
    trace.push_back(head + " <= r-2, pass");
    return CaseResult::Pass;
  }
  if (ell == r - 1) {
    trace.push_back(head + " = r-1, not covered by the criterion, unknown");
    return CaseResult::Unknown;
  }
  if (ell > r) {
    trace.push_back(head + " > r, fail");
    return CaseResult::Fail;
  }
  const FiniteQuadraticForm f = d.p_part(2).form;
  const auto twos = order_two_elements(f);
  const Rational three_halves(3, 2);
  for (const auto& u : twos) {
    if (f.q(u) != three_halves) continue;
    for (const auto& v : twos) {
      if (mod(f.b(u, v) - f.q(v), Rational(1)) != 0) {
        trace.push_back(head + " = r, u of square -1/2 is not characteristic, pass");
        return CaseResult::Pass;
      }
    }
    auto perp = f.orthogonal_complement({u});
    if (perp.form.size() * 2 != f.size()) continue;  // u does not split off
    Rational det = perp.form.gram_determinant();
    if (det == 0) continue;
    const Rational target = 2 * Rational(size);
    if (square_class_equal(det, target, 2) || square_class_equal(det, -target, 2)) {
      trace.push_back(head + " = r, characteristic u with det u^perp=" + to_string(det) + " = +-2|N|, pass");
      return CaseResult::Pass;
    }
  }
  trace.push_back(head + " = r, no admissible u of order 2 and square -1/2, fail");
  return CaseResult::Fail;
}

inline CaseResult u2_case_at_2(const FiniteQuadraticForm& d, std::vector<std::string>& trace) {
  const FiniteQuadraticForm f = d.p_part(2).form;
  const auto twos = order_two_elements(f);
  std::vector<FqfElement> isotropic;
  for (const auto& x : twos)
    if (f.q(x) == 0) isotropic.push_back(x);
  for (std::size_t i = 0; i < isotropic.size(); ++i)
    for (std::size_t j = i + 1; j < isotropic.size(); ++j)
      if (f.b(isotropic[i], isotropic[j]) == Rational(1, 2)) {
        trace.push_back("U(2)-case p=2: found u, v with u^2=v^2=0, u.v=1/2, pass");
        return CaseResult::Pass;
      }
  trace.push_back("U(2)-case p=2: no pair u, v with u^2=v^2=0, u.v=1/2, fail");
  return CaseResult::Fail;
}

inline CaseResult combine(CaseResult a, CaseResult b) {
  if (a == CaseResult::Fail || b == CaseResult::Fail) return CaseResult::Fail;
  if (a == CaseResult::Unknown || b == CaseResult::Unknown) return CaseResult::Unknown;
  return CaseResult::Pass;
}

}  // namespace detail

// Decides whether some T in the genus of N^perp (rank r, discr T = -D_N)
// contains [2] or U(2). |detN| must equal |D_N|.
inline Verdict totally_real_criterion(const FiniteQuadraticForm& d, long r, const Integer& det_n) {
  if (r < 1) throw InputError("totally_real_criterion: r must be at least 1");
  if (abs(det_n) != d.size())
    throw InputError("totally_real_criterion: |D_N| = " + d.size().str() + " but detN = " + det_n.str());
  if (!d.nondegenerate()) throw InputError("totally_real_criterion: degenerate discriminant form");
  const Integer size = abs(det_n);
  Verdict v;
  auto two_odd = detail::odd_primes(d, r, 2, -2 * size, size, v.trace, "[2]-case");
  auto two_even = detail::two_case_at_2(d, r, size, v.trace);
  auto two = detail::combine(two_odd, two_even);
  if (two == detail::CaseResult::Pass) {
    v.kind = VerdictKind::YesContains2;
    return v;
  }
  if (two == detail::CaseResult::Unknown) {
    v.trace.push_back("[2]-case undecided; the U(2)-case presumes it fails, so the verdict is unknown");
    v.kind = VerdictKind::Unknown;
    return v;
  }
  auto u2_odd = detail::odd_primes(d, r, 3, -size, size, v.trace, "U(2)-case");
  auto u2_even = detail::u2_case_at_2(d, v.trace);
  v.kind = detail::combine(u2_odd, u2_even) == detail::CaseResult::Pass ? VerdictKind::YesContainsU2 : VerdictKind::No;
  return v;
}

// ---------------------------------------------------------------------------
// Involutions of O^-(2U). Coordinates (u1, v1, u2, v2) with u_i.v_i = 1.

struct LabeledInvolution {
  std::string label;
  IntegerMatrix matrix;
};

// The expected invariant sublattice for each label.
inline Lattice two_u_label_lattice(const std::string& label) { return build_lattice(label); }

inline std::vector<LabeledInvolution> two_u_involutions() {
  const IntegerMatrix id{{1, 0}, {0, 1}};
  const IntegerMatrix neg{{-1, 0}, {0, -1}};
  const IntegerMatrix swap{{0, 1}, {1, 0}};
  const IntegerMatrix neg_swap{{0, -1}, {-1, 0}};
  auto block = [](const IntegerMatrix& a, const IntegerMatrix& b) {
    IntegerMatrix m(4, 4);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        m(i, j) = a(i, j);
        m(i + 2, j + 2) = b(i, j);
      }
    return m;
  };
  IntegerMatrix summand_swap(4, 4);
  for (std::size_t i = 0; i < 2; ++i) summand_swap(i, i + 2) = summand_swap(i + 2, i) = 1;
  return {
      {"U", block(id, neg)},
      {"U(2)", summand_swap},
      {"[2]", block(swap, neg)},
      {"[2]+[-2]", block(swap, neg_swap)},
      {"U+[-2]", block(id, neg_swap)},
  };
}

// ---------------------------------------------------------------------------
// Images of the involutions of O^-(T) in Aut(discr T)

struct TSideInvolutions {
  bool known = false;
  std::string reason;
  Discriminant discriminant;
  std::vector<FqfIsometry> realizable;     // images allowed on the T side, sorted
  std::vector<InvolutionClass> classes;    // distinct Aut(discr T) classes of the images
  std::vector<std::string> class_labels;   // for 2U(n): labels of the involutions in each class
};

inline TSideInvolutions t_side_involution_classes(const TranscendentalSpec& spec) {
  TSideInvolutions out;
  if (std::holds_alternative<GenericDiscr>(spec)) {
    out.reason = "transcendental lattice given only by its discriminant form; O(T) is not computed";
    return out;
  }
  validate(spec);
  const Lattice t = transcendental_lattice(spec);
  out.discriminant = discriminant(t);
  const FqfGroup group(out.discriminant.form);

  std::vector<std::pair<std::string, FqfIsometry>> images;
  if (std::holds_alternative<TwoU>(spec)) {
    // O(2U(n)) = O(2U) as matrices and O(2U(n)) -> Aut(discr) is onto, so
    // whole conjugacy classes are realizable.
    for (const auto& inv : two_u_involutions()) images.emplace_back(inv.label, out.discriminant.induced(inv.matrix));
  } else {
    for (const auto& g : orthogonal_group_definite(t)) {
      if (g.matrix * g.matrix != IntegerMatrix::identity(2)) continue;
      if (sign_structure_action(t, g.matrix) != -1) continue;
      std::ostringstream os;
      os << g.matrix;
      images.emplace_back(os.str(), out.discriminant.induced(g.matrix));
    }
  }

  std::set<FqfIsometry> realizable;
  std::map<FqfIsometry, std::size_t> class_index;
  for (const auto& [label, image] : images) {
    auto cls = group.conjugacy_class(image);
    auto [it, fresh] = class_index.emplace(cls.front(), out.classes.size());
    if (fresh) {
      out.classes.push_back({cls.front(), cls.size()});
      out.class_labels.push_back(label);
    } else {
      out.class_labels[it->second] += ", " + label;
    }
    if (std::holds_alternative<TwoU>(spec))
      realizable.insert(cls.begin(), cls.end());
    else
      realizable.insert(image);
  }
  out.realizable.assign(realizable.begin(), realizable.end());
  out.known = true;
  return out;
}

}  // namespace k3lines
