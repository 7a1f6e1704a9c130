#pragma once

// Even integral lattices given by Gram matrices.
//
// Sign convention: the root lattices A_n, D_n, E_n are NEGATIVE definite,
// e.g. A2 = [[-2, 1], [1, -2]]. The hyperbolic plane is U = [[0, 1], [1, 0]].

#include "k3lines/fqf.hpp"
#include "k3lines/linalg.hpp"

#include <cctype>
#include <string>
#include <string_view>

namespace k3lines {

class Lattice {
 public:
  Lattice() = default;
  explicit Lattice(IntegerMatrix gram) : gram_(std::move(gram)) {
    if (!gram_.symmetric()) throw InputError("lattice: Gram matrix is not symmetric");
    for (std::size_t i = 0; i < gram_.rows(); ++i)
      if (gram_(i, i) % 2 != 0) throw InputError("lattice: odd diagonal entry (lattice is not even)");
    inertia_ = k3lines::inertia(gram_);
    det_ = determinant(gram_);
  }

  const IntegerMatrix& gram() const { return gram_; }
  std::size_t rank() const { return gram_.rows(); }
  const Inertia& signature() const { return inertia_; }
  const Integer& det() const { return det_; }
  bool nondegenerate() const { return inertia_.zero == 0; }
  bool positive_definite() const { return inertia_.plus == rank(); }
  bool negative_definite() const { return inertia_.minus == rank(); }

  // x . y for coordinate vectors.
  template <typename T>
  T product(const std::vector<T>& x, const std::vector<T>& y) const {
    T s = 0;
    for (std::size_t i = 0; i < rank(); ++i)
      for (std::size_t j = 0; j < rank(); ++j)
        if (gram_(i, j) != 0) s += x[i] * T(gram_(i, j)) * y[j];
    return s;
  }

  Lattice rescaled(const Integer& n) const {
    if (n == 0) throw InputError("lattice: rescale factor must be nonzero");
    return Lattice(Rational(n) == 1 ? gram_ : to_integer_matrix(Rational(n) * matrix_cast<Rational>(gram_)));
  }

  friend Lattice direct_sum(const Lattice& a, const Lattice& b) {
    IntegerMatrix g(a.rank() + b.rank(), a.rank() + b.rank());
    for (std::size_t i = 0; i < a.rank(); ++i)
      for (std::size_t j = 0; j < a.rank(); ++j) g(i, j) = a.gram_(i, j);
    for (std::size_t i = 0; i < b.rank(); ++i)
      for (std::size_t j = 0; j < b.rank(); ++j) g(a.rank() + i, a.rank() + j) = b.gram_(i, j);
    return Lattice(g);
  }

  friend bool operator==(const Lattice& a, const Lattice& b) { return a.gram_ == b.gram_; }

 private:
  IntegerMatrix gram_;
  Inertia inertia_;
  Integer det_ = 1;
};

// Automorphism of a lattice acting on coordinate column vectors.
struct Isometry {
  IntegerMatrix matrix;

  friend bool operator==(const Isometry&, const Isometry&) = default;
  friend bool operator<(const Isometry& a, const Isometry& b) { return a.matrix < b.matrix; }
};

inline bool is_isometry(const Lattice& l, const IntegerMatrix& g) {
  return g.rows() == l.rank() && g.cols() == l.rank() && g.transpose() * l.gram() * g == l.gram() &&
         abs(determinant(g)) == 1;
}

// ---------------------------------------------------------------------------
// Constructors

inline Lattice hyperbolic_plane() { return Lattice(IntegerMatrix{{0, 1}, {1, 0}}); }

inline Lattice binary_lattice(const Integer& a, const Integer& b, const Integer& c) {
  if (a % 2 != 0 || c % 2 != 0) throw InputError("[a,b,c] requires even a and c");
  IntegerMatrix g(2, 2);
  g(0, 0) = a;
  g(0, 1) = g(1, 0) = b;
  g(1, 1) = c;
  return Lattice(g);
}

// Negative definite root lattice from a simply laced Dynkin diagram.
inline Lattice root_lattice(char type, std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  switch (type) {
    case 'A':
      if (n < 1) throw InputError("A_n needs n >= 1");
      for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
      break;
    case 'D':
      if (n < 4) throw InputError("D_n needs n >= 4");
      for (std::size_t i = 0; i + 2 < n; ++i) edges.emplace_back(i, i + 1);
      edges.emplace_back(n - 3, n - 1);
      break;
    case 'E':
      if (n < 6 || n > 8) throw InputError("E_n needs 6 <= n <= 8");
      // Chain 0-1-...-(n-2), node n-1 attached to node 2.
      for (std::size_t i = 0; i + 2 < n; ++i) edges.emplace_back(i, i + 1);
      edges.emplace_back(2, n - 1);
      break;
    default:
      throw InputError(std::string("unknown root system type ") + type);
  }
  IntegerMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) g(i, i) = -2;
  for (auto [i, j] : edges) g(i, j) = g(j, i) = 1;
  return Lattice(g);
}

// ---------------------------------------------------------------------------
// Lattice expressions:
//   A<n> | D<n> | E<n> | U | [a,b,c] | [n] | spec(n) | k*spec | spec+spec
// with parentheses for grouping, e.g. "2U(3)", "E8+2*A2", "(U+A1)(2)".
// A leading integer binds as a multiplicity: "2U(3)" is (U+U)(3).

namespace detail {

class LatticeParser {
 public:
  explicit LatticeParser(std::string_view text) {
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) s_ += c;
  }

  Lattice parse() {
    if (s_.empty()) throw InputError("empty lattice expression");
    Lattice l = sum();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return l;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("lattice expression \"" + s_ + "\" at position " + std::to_string(pos_) + ": " + msg);
  }
  bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }
  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  bool at_digit() const { return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])); }

  Integer integer() {
    std::size_t start = pos_;
    if (peek('-') || peek('+')) ++pos_;
    if (!at_digit()) fail("expected integer");
    while (at_digit()) ++pos_;
    std::string t = s_.substr(start, pos_ - start);
    if (t[0] == '+') t.erase(0, 1);
    return Integer(t);
  }

  Lattice sum() {
    Lattice l = term();
    while (peek('+')) {
      ++pos_;
      l = direct_sum(l, term());
    }
    return l;
  }

  Lattice term() {
    if (at_digit()) {
      Integer k = integer();
      if (peek('*')) ++pos_;
      if (k < 1) fail("multiplicity must be positive");
      Lattice base = postfix();
      Lattice l = base;
      for (Integer i = 1; i < k; ++i) l = direct_sum(l, base);
      return l;
    }
    return postfix();
  }

  Lattice postfix() {
    Lattice l = atom();
    while (peek('(')) {
      ++pos_;
      Integer n = integer();
      expect(')');
      if (n == 0) fail("rescale factor must be nonzero");
      l = l.rescaled(n);
    }
    return l;
  }

  Lattice atom() {
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (c == 'U') {
      ++pos_;
      return hyperbolic_plane();
    }
    if (c == 'A' || c == 'D' || c == 'E') {
      ++pos_;
      if (!at_digit()) fail("expected rank after root type");
      Integer n = integer();
      if (n > 64) fail("root lattice rank too large");
      return root_lattice(c, n.convert_to<std::size_t>());
    }
    if (c == '[') {
      ++pos_;
      std::vector<Integer> v{integer()};
      while (peek(',')) {
        ++pos_;
        v.push_back(integer());
      }
      expect(']');
      if (v.size() == 1) {
        if (v[0] % 2 != 0) fail("[n] requires even n");
        IntegerMatrix g(1, 1);
        g(0, 0) = v[0];
        return Lattice(g);
      }
      if (v.size() == 3) {
        if (v[0] % 2 != 0 || v[2] % 2 != 0) fail("[a,b,c] requires even a and c");
        return binary_lattice(v[0], v[1], v[2]);
      }
      fail("bracket form takes 1 or 3 entries");
    }
    if (c == '(') {
      ++pos_;
      Lattice l = sum();
      expect(')');
      return l;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Lattice build_lattice(std::string_view spec) { return detail::LatticeParser(spec).parse(); }

// ---------------------------------------------------------------------------
// Discriminant forms

// discr L = L^v / L together with the dual vectors representing its generators.
struct Discriminant {
  FiniteQuadraticForm form;
  std::vector<RationalVector> generators;  // dual vectors, lattice coordinates
  IntegerMatrix v_inverse;                 // from the Smith form of the Gram matrix
  std::vector<std::size_t> kept;           // Smith positions with invariant factor > 1

  // Group coordinates of a dual vector x (G x integral).
  FqfElement element_of(const std::vector<Rational>& x) const {
    std::vector<Rational> y = matrix_cast<Rational>(v_inverse) * x;
    FqfElement e(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
      Rational c = y[kept[i]] * Rational(form.order_of_generator(i));
      if (denominator(c) != 1) throw Error("vector is not in the dual lattice");
      e[i] = to_int64(mod(numerator(c), Integer(form.order_of_generator(i))));
    }
    return e;
  }

  // Induced action of a lattice automorphism (acting on coordinate columns).
  FqfIsometry induced(const IntegerMatrix& g) const {
    FqfIsometry f;
    RationalMatrix gq = matrix_cast<Rational>(g);
    for (const auto& v : generators) f.images.push_back(element_of(gq * v.values()));
    return f;
  }
};

inline Discriminant discriminant(const Lattice& l) {
  if (!l.nondegenerate()) throw InputError("discriminant form of a degenerate lattice");
  auto sd = smith_decompose(l.gram());
  Discriminant d;
  d.v_inverse = to_integer_matrix(inverse(sd.V));
  std::vector<Integer> orders;
  for (std::size_t i = 0; i < l.rank(); ++i) {
    if (sd.S(i, i) == 1) continue;
    d.kept.push_back(i);
    orders.push_back(sd.S(i, i));
    std::vector<Integer> col = sd.V.column(i);
    d.generators.emplace_back(col, sd.S(i, i));
  }
  std::vector<Rational> q;
  RationalMatrix b(orders.size(), orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i) {
    auto gi = d.generators[i].values();
    q.push_back(l.product(gi, gi));
    for (std::size_t j = 0; j < orders.size(); ++j) b(i, j) = l.product(gi, d.generators[j].values());
  }
  d.form = FiniteQuadraticForm(orders, q, b);
  return d;
}

inline FiniteQuadraticForm discriminant_form(const Lattice& l) { return discriminant(l).form; }

// ---------------------------------------------------------------------------
// Orthogonal groups of definite lattices

// All x with x.x == norm for a positive definite Gram matrix, via the box
// bound x_i^2 <= norm * (G^-1)_ii.
inline std::vector<std::vector<Integer>> vectors_of_norm(const Lattice& l, const Integer& norm) {
  if (!l.positive_definite()) throw InputError("vectors_of_norm needs a positive definite lattice");
  const std::size_t n = l.rank();
  RationalMatrix inv = inverse(l.gram());
  std::vector<Integer> bound(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rational b2 = Rational(norm) * inv(i, i);
    Integer b = boost::multiprecision::sqrt(numerator(b2) / denominator(b2));
    while ((b + 1) * (b + 1) * denominator(b2) <= numerator(b2)) ++b;
    bound[i] = b;
  }
  std::vector<std::vector<Integer>> out;
  std::vector<Integer> x(n);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      if (l.product(x, x) == norm) out.push_back(x);
      return;
    }
    for (Integer v = -bound[i]; v <= bound[i]; ++v) {
      x[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

// The full finite group O(L) of a definite lattice of rank <= 4, sorted.
inline std::vector<Isometry> orthogonal_group_definite(const Lattice& l) {
  if (!l.positive_definite() && !l.negative_definite())
    throw InputError("orthogonal_group_definite: lattice is not definite");
  if (l.rank() > 4) throw InputError("orthogonal_group_definite: rank exceeds 4");
  Lattice pos = l.positive_definite() ? l : l.rescaled(-1);
  const std::size_t n = pos.rank();
  const auto& g = pos.gram();
  std::vector<std::vector<std::vector<Integer>>> cands(n);
  for (std::size_t i = 0; i < n; ++i) cands[i] = vectors_of_norm(pos, g(i, i));

  std::vector<Isometry> out;
  std::vector<std::vector<Integer>> img;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      IntegerMatrix m(n, n);
      for (std::size_t c = 0; c < n; ++c) m.set_column(c, img[c]);
      if (abs(determinant(m)) == 1) out.push_back({m});
      return;
    }
    for (const auto& v : cands[i]) {
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) ok = pos.product(v, img[j]) == g(i, j);
      if (!ok) continue;
      img.push_back(v);
      rec(i + 1);
      img.pop_back();
    }
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Sign structure and invariant sublattices

// +1 if g preserves the orientation of maximal positive definite subspaces, -1 otherwise.
inline int sign_structure_action(const Lattice& l, const IntegerMatrix& g) {
  if (!l.nondegenerate()) throw InputError("sign_structure_action: degenerate lattice");
  if (!is_isometry(l, g)) throw InputError("sign_structure_action: not an isometry");
  auto diag = diagonalize(matrix_cast<Rational>(l.gram()));
  std::vector<std::size_t> positive;
  for (std::size_t i = 0; i < diag.d.size(); ++i)
    if (diag.d[i] > 0) positive.push_back(i);
  if (positive.empty()) return 1;
  RationalMatrix basis(l.rank(), positive.size());
  for (std::size_t c = 0; c < positive.size(); ++c) basis.set_column(c, diag.P.column(positive[c]));
  RationalMatrix gram = matrix_cast<Rational>(l.gram());
  // Orthogonal projection of g(V+) onto V+ has determinant with the sign of
  // det(B^T G g B) since B^T G B is positive diagonal.
  Rational d = determinant(basis.transpose() * gram * matrix_cast<Rational>(g) * basis);
  if (d == 0) throw Error("sign_structure_action: projection is singular");
  return d > 0 ? 1 : -1;
}

struct Sublattice {
  Lattice lattice;
  IntegerMatrix embedding;  // columns: basis vectors in ambient coordinates
};

// Saturated sublattice Ker(g - id) of an involution g.
inline Sublattice invariant_sublattice(const Lattice& l, const IntegerMatrix& g) {
  const std::size_t n = l.rank();
  if (g.rows() != n || g.cols() != n) throw InputError("invariant_sublattice: dimension mismatch");
  if (g * g != IntegerMatrix::identity(n)) throw InputError("invariant_sublattice: not an involution");
  auto ker = integral_kernel(g - IntegerMatrix::identity(n));
  IntegerMatrix emb(n, ker.size());
  for (std::size_t c = 0; c < ker.size(); ++c) emb.set_column(c, ker[c]);
  return {Lattice(emb.transpose() * l.gram() * emb), emb};
}

}  // namespace k3lines
