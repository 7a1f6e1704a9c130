#pragma once

// Finite quadratic forms (discriminant forms): a finite abelian group given by
// independent cyclic generators, a Q/2Z-valued quadratic form q and the
// associated Q/Z-valued pairing b with q(x + y) = q(x) + q(y) + 2 b(x, y).

#include "k3lines/linalg.hpp"
#include "k3lines/padic.hpp"
#include "k3lines/parallel.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

namespace k3lines {

using FqfElement = std::vector<std::int64_t>;

inline constexpr std::size_t kElementCap = 1'000'000;
inline constexpr std::size_t kIsometryCap = 2'000'000;

class FiniteQuadraticForm {
 public:
  FiniteQuadraticForm() { rescale(); }

  // orders: generator orders (> 1); q: q(g_i) mod 2; b: b(g_i, g_j) mod 1.
  FiniteQuadraticForm(std::vector<Integer> orders, std::vector<Rational> q, RationalMatrix b) {
    const std::size_t k = orders.size();
    if (q.size() != k || b.rows() != k || b.cols() != k)
      throw InputError("finite quadratic form: inconsistent generator data");
    if (!b.symmetric()) throw InputError("finite quadratic form: pairing is not symmetric");
    for (std::size_t i = 0; i < k; ++i) {
      if (orders[i] < 2) throw InputError("finite quadratic form: generator orders must exceed 1");
      orders_.push_back(to_int64(orders[i]));
    }
    q_.resize(k);
    b_ = RationalMatrix(k, k);
    for (std::size_t i = 0; i < k; ++i) {
      q_[i] = mod(q[i], Rational(2));
      for (std::size_t j = 0; j < k; ++j) b_(i, j) = mod(b(i, j), Rational(1));
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (mod(q_[i], Rational(1)) != b_(i, i))
        throw InputError("finite quadratic form: q(g) and b(g, g) disagree mod 1");
      Rational d(orders[i]);
      if (mod(d * d * q_[i], Rational(2)) != 0)
        throw InputError("finite quadratic form: q is not well defined on generator orders");
      for (std::size_t j = 0; j < k; ++j)
        if (denominator(d * b_(i, j)) != 1)
          throw InputError("finite quadratic form: pairing is not well defined on generator orders");
    }
    rescale();
  }

  std::size_t generator_count() const { return orders_.size(); }
  const std::vector<std::int64_t>& orders() const { return orders_; }
  std::int64_t order_of_generator(std::size_t i) const { return orders_[i]; }
  const Rational& q_value(std::size_t i) const { return q_[i]; }
  const Rational& pairing(std::size_t i, std::size_t j) const { return b_(i, j); }
  const RationalMatrix& pairing_matrix() const { return b_; }
  const std::vector<Rational>& q_values() const { return q_; }

  Integer size() const {
    Integer s = 1;
    for (auto d : orders_) s *= d;
    return s;
  }
  bool trivial() const { return orders_.empty(); }

  // Number of generators of the p-primary part (minimal generator count).
  std::size_t ell(const Integer& p) const {
    std::size_t n = 0;
    for (auto d : orders_)
      if (d % p == 0) ++n;
    return n;
  }

  std::vector<Integer> primes() const {
    std::set<Integer> ps;
    for (auto d : orders_)
      for (auto& p : prime_divisors(Integer(d))) ps.insert(p);
    return {ps.begin(), ps.end()};
  }

  // ---- element arithmetic; coordinates are kept in [0, order_i) ----
  FqfElement zero() const { return FqfElement(orders_.size(), 0); }
  FqfElement generator(std::size_t i) const {
    FqfElement e = zero();
    e[i] = 1;
    return e;
  }
  FqfElement reduce(FqfElement x) const {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = pmod(x[i], orders_[i]);
    return x;
  }
  FqfElement add(const FqfElement& x, const FqfElement& y) const {
    FqfElement z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = pmod(x[i] + y[i], orders_[i]);
    return z;
  }
  FqfElement scale(const FqfElement& x, std::int64_t n) const {
    FqfElement z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      z[i] = pmod(static_cast<std::int64_t>((static_cast<__int128>(x[i]) * n) % orders_[i]), orders_[i]);
    return z;
  }
  FqfElement negate(const FqfElement& x) const { return scale(x, -1); }
  bool is_zero(const FqfElement& x) const {
    return std::all_of(x.begin(), x.end(), [](std::int64_t v) { return v == 0; });
  }
  std::int64_t order(const FqfElement& x) const {
    std::int64_t o = 1;
    for (std::size_t i = 0; i < x.size(); ++i) o = std::lcm(o, orders_[i] / std::gcd(x[i], orders_[i]));
    return o;
  }

  // q(x) * scale mod 2 * scale and b(x, y) * scale mod scale, exact integers.
  std::int64_t scale_denominator() const { return scale_; }
  std::int64_t q_scaled(const FqfElement& x) const {
    const std::int64_t m2 = 2 * scale_;
    __int128 acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0) continue;
      __int128 xi = x[i] % m2;
      acc = (acc + (xi * xi % m2) * qs_[i]) % m2;
      for (std::size_t j = i + 1; j < x.size(); ++j) {
        if (x[j] == 0) continue;
        acc = (acc + 2 * ((xi * (x[j] % m2) % m2) * bs_[i * x.size() + j] % m2)) % m2;
      }
    }
    return static_cast<std::int64_t>((acc % m2 + m2) % m2);
  }
  std::int64_t b_scaled(const FqfElement& x, const FqfElement& y) const {
    const std::size_t k = x.size();
    __int128 acc = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (y[j] == 0) continue;
        acc = (acc + (static_cast<__int128>(x[i]) * y[j] % scale_) * bs_[i * k + j]) % scale_;
      }
    }
    return static_cast<std::int64_t>((acc % scale_ + scale_) % scale_);
  }
  Rational q(const FqfElement& x) const { return Rational(q_scaled(x), scale_); }
  Rational b(const FqfElement& x, const FqfElement& y) const { return Rational(b_scaled(x, y), scale_); }

  // Scaled integer for a rational value mod `period` (1 or 2); nullopt if not representable.
  std::optional<std::int64_t> to_scaled(const Rational& v, int period) const {
    Rational s = mod(v, Rational(period)) * scale_;
    if (denominator(s) != 1) return std::nullopt;
    return to_int64(numerator(s));
  }

  // ---- enumeration in mixed radix order ----
  std::size_t element_count() const {
    Integer s = size();
    if (s > Integer(kElementCap)) throw CapExceeded("finite quadratic form has more than " +
                                                    std::to_string(kElementCap) + " elements");
    return s.convert_to<std::size_t>();
  }
  FqfElement element_at(std::size_t index) const {
    FqfElement x(orders_.size());
    for (std::size_t i = orders_.size(); i-- > 0;) {
      x[i] = static_cast<std::int64_t>(index % static_cast<std::size_t>(orders_[i]));
      index /= static_cast<std::size_t>(orders_[i]);
    }
    return x;
  }
  std::size_t index_of(const FqfElement& x) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < orders_.size(); ++i) idx = idx * static_cast<std::size_t>(orders_[i]) + static_cast<std::size_t>(x[i]);
    return idx;
  }
  std::vector<FqfElement> elements() const {
    std::size_t n = element_count();
    std::vector<FqfElement> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(element_at(i));
    return out;
  }

  // ---- derived forms ----
  FiniteQuadraticForm negated() const {
    std::vector<Rational> q;
    for (const auto& v : q_) q.push_back(-v);
    return FiniteQuadraticForm(orders_as_integers(), q, -b_);
  }

  friend FiniteQuadraticForm direct_sum(const FiniteQuadraticForm& a, const FiniteQuadraticForm& c) {
    const std::size_t ka = a.generator_count(), kc = c.generator_count();
    std::vector<Integer> orders = a.orders_as_integers();
    for (auto d : c.orders_) orders.emplace_back(d);
    std::vector<Rational> q = a.q_;
    q.insert(q.end(), c.q_.begin(), c.q_.end());
    RationalMatrix b(ka + kc, ka + kc);
    for (std::size_t i = 0; i < ka; ++i)
      for (std::size_t j = 0; j < ka; ++j) b(i, j) = a.b_(i, j);
    for (std::size_t i = 0; i < kc; ++i)
      for (std::size_t j = 0; j < kc; ++j) b(ka + i, ka + j) = c.b_(i, j);
    return FiniteQuadraticForm(orders, q, b);
  }

  struct Embedded;
  // Subgroup generated by `gens`, in invariant-factor form, with its inclusion.
  Embedded subform(const std::vector<FqfElement>& gens) const;
  // {x : b(x, u) = 0 for all u in `gens`}.
  Embedded orthogonal_complement(const std::vector<FqfElement>& gens) const;
  // p-primary summand.
  Embedded p_part(const Integer& p) const;

  // Determinant of the rational Gram matrix of b on the generators, with the
  // diagonal lifted from q. 1 for the trivial form.
  Rational gram_determinant() const {
    RationalMatrix g = b_;
    for (std::size_t i = 0; i < q_.size(); ++i) g(i, i) = q_[i];
    return determinant(g);
  }

  bool nondegenerate() const;

  friend bool operator==(const FiniteQuadraticForm& a, const FiniteQuadraticForm& c) {
    return a.orders_ == c.orders_ && a.q_ == c.q_ && a.b_ == c.b_;
  }

 private:
  static std::int64_t pmod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
  }
  std::vector<Integer> orders_as_integers() const { return {orders_.begin(), orders_.end()}; }

  void rescale() {
    Integer m = 1;
    for (const auto& v : q_) m = lcm(m, denominator(v));
    for (const auto& v : b_.data()) m = lcm(m, denominator(v));
    if (m > Integer(std::int64_t{1} << 40)) throw CapExceeded("finite quadratic form denominators too large");
    scale_ = to_int64(m);
    const std::size_t k = q_.size();
    qs_.assign(k, 0);
    bs_.assign(k * k, 0);
    for (std::size_t i = 0; i < k; ++i) {
      qs_[i] = to_int64(numerator(q_[i] * scale_));
      for (std::size_t j = 0; j < k; ++j) bs_[i * k + j] = to_int64(numerator(b_(i, j) * scale_));
    }
  }

  std::vector<std::int64_t> orders_;
  std::vector<Rational> q_;
  RationalMatrix b_;
  std::int64_t scale_ = 1;
  std::vector<std::int64_t> qs_;
  std::vector<std::int64_t> bs_;
};

struct FiniteQuadraticForm::Embedded {
  FiniteQuadraticForm form;
  std::vector<FqfElement> inclusion;  // image of each generator of `form` in the ambient form
};

inline FiniteQuadraticForm::Embedded FiniteQuadraticForm::subform(const std::vector<FqfElement>& gens) const {
  const std::size_t k = generator_count();
  if (k == 0) return {FiniteQuadraticForm(), {}};
  // Lattice spanned by the generators and the relations, inside Z^k.
  IntegerMatrix rows(gens.size() + k, k);
  for (std::size_t r = 0; r < gens.size(); ++r)
    for (std::size_t j = 0; j < k; ++j) rows(r, j) = gens[r][j];
  for (std::size_t j = 0; j < k; ++j) rows(gens.size() + j, j) = orders_[j];
  IntegerMatrix basis = hermite_rows(rows);  // k x k, full rank
  // Relations expressed in that basis: C * basis = diag(orders).
  RationalMatrix rel = matrix_cast<Rational>(IntegerMatrix::diagonal(std::vector<Integer>(orders_.begin(), orders_.end()))) *
                       inverse(basis);
  auto sd = smith_decompose(to_integer_matrix(rel));
  IntegerMatrix new_basis = to_integer_matrix(inverse(sd.V) * matrix_cast<Rational>(basis));

  std::vector<Integer> orders;
  std::vector<FqfElement> incl;
  for (std::size_t i = 0; i < k; ++i) {
    if (sd.S(i, i) == 1) continue;
    orders.push_back(sd.S(i, i));
    FqfElement x(k);
    for (std::size_t j = 0; j < k; ++j) x[j] = to_int64(mod(new_basis(i, j), Integer(orders_[j])));
    incl.push_back(x);
  }
  std::vector<Rational> q;
  RationalMatrix b(incl.size(), incl.size());
  for (std::size_t i = 0; i < incl.size(); ++i) {
    q.push_back(this->q(incl[i]));
    for (std::size_t j = 0; j < incl.size(); ++j) b(i, j) = this->b(incl[i], incl[j]);
  }
  return {FiniteQuadraticForm(orders, q, b), incl};
}

inline FiniteQuadraticForm::Embedded FiniteQuadraticForm::orthogonal_complement(
    const std::vector<FqfElement>& gens) const {
  const std::size_t k = generator_count();
  const std::size_t m = gens.size();
  if (k == 0) return {FiniteQuadraticForm(), {}};
  // x in Z^k with sum_j x_j * b(g_j, u_r) = 0 mod 1 for every r.
  IntegerMatrix sys(m, k + m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < k; ++j) sys(r, j) = b_scaled(generator(j), gens[r]);
    sys(r, k + r) = scale_;
  }
  std::vector<FqfElement> sols;
  if (m == 0) {
    for (std::size_t j = 0; j < k; ++j) sols.push_back(generator(j));
  } else {
    for (const auto& v : integral_kernel(sys)) {
      FqfElement x(k);
      for (std::size_t j = 0; j < k; ++j) x[j] = to_int64(mod(v[j], Integer(orders_[j])));
      sols.push_back(x);
    }
  }
  return subform(sols);
}

inline FiniteQuadraticForm::Embedded FiniteQuadraticForm::p_part(const Integer& p) const {
  std::vector<FqfElement> incl;
  std::vector<Integer> orders;
  for (std::size_t i = 0; i < orders_.size(); ++i) {
    Integer d = orders_[i];
    if (d % p != 0) continue;
    Integer pk = 1;
    while (d % p == 0) {
      d /= p;
      pk *= p;
    }
    orders.push_back(pk);
    incl.push_back(scale(generator(i), to_int64(d)));
  }
  std::vector<Rational> q;
  RationalMatrix b(incl.size(), incl.size());
  for (std::size_t i = 0; i < incl.size(); ++i) {
    q.push_back(this->q(incl[i]));
    for (std::size_t j = 0; j < incl.size(); ++j) b(i, j) = this->b(incl[i], incl[j]);
  }
  return {FiniteQuadraticForm(orders, q, b), incl};
}

inline bool FiniteQuadraticForm::nondegenerate() const {
  std::vector<FqfElement> all;
  for (std::size_t i = 0; i < generator_count(); ++i) all.push_back(generator(i));
  return orthogonal_complement(all).form.trivial();
}

// ---------------------------------------------------------------------------
// Isometries between finite quadratic forms

// Homomorphism given by the images of the domain generators.
struct FqfIsometry {
  std::vector<FqfElement> images;
  bool anti = false;

  friend bool operator==(const FqfIsometry&, const FqfIsometry&) = default;
  friend auto operator<=>(const FqfIsometry& a, const FqfIsometry& b) {
    if (auto c = a.anti <=> b.anti; c != 0) return c;
    return a.images <=> b.images;
  }
};

inline FqfElement apply(const FiniteQuadraticForm& codomain, const FqfIsometry& f, const FqfElement& x) {
  FqfElement y = codomain.zero();
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j] != 0) y = codomain.add(y, codomain.scale(f.images[j], x[j]));
  return y;
}

// (f o g)(x) = f(g(x)); g maps into f's domain, f maps into `codomain`.
inline FqfIsometry compose(const FiniteQuadraticForm& codomain, const FqfIsometry& f, const FqfIsometry& g) {
  FqfIsometry h;
  h.anti = f.anti != g.anti;
  h.images.reserve(g.images.size());
  for (const auto& x : g.images) h.images.push_back(apply(codomain, f, x));
  return h;
}

inline FqfIsometry identity_isometry(const FiniteQuadraticForm& d) {
  FqfIsometry id;
  for (std::size_t i = 0; i < d.generator_count(); ++i) id.images.push_back(d.generator(i));
  return id;
}

// Checks that f is a q-preserving (or q-negating when anti) bijection d1 -> d2.
inline bool is_isometry(const FiniteQuadraticForm& d1, const FiniteQuadraticForm& d2, const FqfIsometry& f) {
  if (d1.size() != d2.size() || f.images.size() != d1.generator_count()) return false;
  const Rational sgn = f.anti ? -1 : 1;
  for (std::size_t i = 0; i < f.images.size(); ++i) {
    if (d2.order(f.images[i]) != d1.order_of_generator(i)) return false;
    if (mod(sgn * d1.q_value(i) - d2.q(f.images[i]), Rational(2)) != 0) return false;
    for (std::size_t j = i + 1; j < f.images.size(); ++j)
      if (mod(sgn * d1.pairing(i, j) - d2.b(f.images[i], f.images[j]), Rational(1)) != 0) return false;
  }
  return d2.subform(f.images).form.size() == d2.size();
}

namespace detail {

struct IsometrySearch {
  const FiniteQuadraticForm& d1;
  const FiniteQuadraticForm& d2;
  bool anti;
  std::size_t limit;
  bool check_bijective;

  std::vector<std::size_t> gen_order;                // processing order of d1 generators
  std::vector<std::vector<FqfElement>> candidates;   // per processing position
  std::vector<std::vector<std::int64_t>> target_b;   // scaled (in d2) pairing targets [pos][earlier pos]

  bool prepare() {
    const std::size_t k = d1.generator_count();
    gen_order.resize(k);
    std::iota(gen_order.begin(), gen_order.end(), std::size_t{0});
    std::stable_sort(gen_order.begin(), gen_order.end(), [&](std::size_t a, std::size_t b) {
      if (d1.order_of_generator(a) != d1.order_of_generator(b))
        return d1.order_of_generator(a) > d1.order_of_generator(b);
      return d1.q_value(a) < d1.q_value(b);
    });
    const Rational sgn = anti ? -1 : 1;
    std::map<std::pair<std::int64_t, std::int64_t>, std::vector<FqfElement>> buckets;
    for (auto& x : d2.elements()) buckets[{d2.order(x), d2.q_scaled(x)}].push_back(x);
    candidates.resize(k);
    target_b.resize(k);
    for (std::size_t pos = 0; pos < k; ++pos) {
      std::size_t g = gen_order[pos];
      auto tq = d2.to_scaled(sgn * d1.q_value(g), 2);
      if (!tq) return false;
      auto it = buckets.find({d1.order_of_generator(g), *tq});
      if (it == buckets.end()) return false;
      candidates[pos] = it->second;
      for (std::size_t prev = 0; prev < pos; ++prev) {
        auto tb = d2.to_scaled(sgn * d1.pairing(g, gen_order[prev]), 1);
        if (!tb) return false;
        target_b[pos].push_back(*tb);
      }
    }
    return true;
  }

  void search(std::size_t pos, std::vector<FqfElement>& chosen, std::vector<FqfIsometry>& out) const {
    if (out.size() >= limit) return;
    const std::size_t k = gen_order.size();
    if (pos == k) {
      FqfIsometry f;
      f.anti = anti;
      f.images.resize(k);
      for (std::size_t p = 0; p < k; ++p) f.images[gen_order[p]] = chosen[p];
      if (check_bijective && d2.subform(f.images).form.size() != d2.size()) return;
      out.push_back(std::move(f));
      if (out.size() > kIsometryCap) throw CapExceeded("more than " + std::to_string(kIsometryCap) + " isometries");
      return;
    }
    for (const auto& x : candidates[pos]) {
      bool ok = true;
      for (std::size_t prev = 0; prev < pos && ok; ++prev) ok = d2.b_scaled(x, chosen[prev]) == target_b[pos][prev];
      if (!ok) continue;
      chosen.push_back(x);
      search(pos + 1, chosen, out);
      chosen.pop_back();
      if (out.size() >= limit) return;
    }
  }
};

}  // namespace detail

// All isomorphisms d1 -> d2 carrying q1 to q2 (or to -q2 when anti), sorted.
// `limit` stops the search early (used for existence tests).
inline std::vector<FqfIsometry> fqf_isometries(const FiniteQuadraticForm& d1, const FiniteQuadraticForm& d2, bool anti,
                                               std::size_t limit = std::numeric_limits<std::size_t>::max()) {
  if (d1.size() != d2.size()) return {};
  if (d1.generator_count() == 0) return {FqfIsometry{{}, anti}};
  detail::IsometrySearch s{d1, d2, anti, limit, !d1.nondegenerate(), {}, {}, {}};
  if (!s.prepare()) return {};

  std::vector<FqfIsometry> out;
  if (limit == std::numeric_limits<std::size_t>::max()) {
    // Independent top-level branches; concatenation in branch order is deterministic.
    const auto& top = s.candidates[0];
    auto parts = parallel_map(top.size(), [&](std::size_t i) {
      std::vector<FqfIsometry> part;
      std::vector<FqfElement> chosen{top[i]};
      s.search(1, chosen, part);
      return part;
    });
    for (auto& p : parts) {
      out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
      if (out.size() > kIsometryCap) throw CapExceeded("more than " + std::to_string(kIsometryCap) + " isometries");
    }
  } else {
    std::vector<FqfElement> chosen;
    s.search(0, chosen, out);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool isometric(const FiniteQuadraticForm& d1, const FiniteQuadraticForm& d2) {
  return !fqf_isometries(d1, d2, false, 1).empty();
}
inline bool anti_isometric(const FiniteQuadraticForm& d1, const FiniteQuadraticForm& d2) {
  return !fqf_isometries(d1, d2, true, 1).empty();
}

// ---------------------------------------------------------------------------
// The automorphism group Aut(D) as an explicit element list.

class FqfGroup {
 public:
  explicit FqfGroup(const FiniteQuadraticForm& d) : form_(d), elements_(fqf_isometries(d, d, false)) {
    for (std::size_t i = 0; i < elements_.size(); ++i) index_.emplace(key(elements_[i]), i);
  }

  const FiniteQuadraticForm& form() const { return form_; }
  const std::vector<FqfIsometry>& elements() const { return elements_; }
  std::size_t order() const { return elements_.size(); }

  FqfIsometry compose(const FqfIsometry& f, const FqfIsometry& g) const { return k3lines::compose(form_, f, g); }
  FqfIsometry inverse(const FqfIsometry& f) const {
    const FqfIsometry id = identity_isometry(form_);
    FqfIsometry prev = id, cur = f;
    while (cur != id) {
      prev = cur;
      cur = compose(cur, f);
    }
    return prev;
  }
  bool contains(const FqfIsometry& f) const { return index_.count(key(f)) != 0; }

  // Conjugacy class of x under the whole group, sorted.
  std::vector<FqfIsometry> conjugacy_class(const FqfIsometry& x) const {
    std::set<FqfIsometry> orbit;
    for (const auto& g : elements_) orbit.insert(compose(compose(g, x), inverse(g)));
    return {orbit.begin(), orbit.end()};
  }

 private:
  static std::string key(const FqfIsometry& f) {
    std::string s;
    for (const auto& x : f.images)
      for (auto v : x) s += std::to_string(v) + ',';
    return s;
  }

  FiniteQuadraticForm form_;
  std::vector<FqfIsometry> elements_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct InvolutionClass {
  FqfIsometry representative;  // lexicographically smallest member
  std::size_t size = 0;
};

inline bool is_involution(const FqfGroup& g, const FqfIsometry& s) {
  return g.compose(s, s) == identity_isometry(g.form());
}

// Conjugacy classes of elements s with s^2 = id in Aut(D), including id.
inline std::vector<InvolutionClass> involution_classes(const FqfGroup& group) {
  std::vector<FqfIsometry> involutions;
  for (const auto& s : group.elements())
    if (is_involution(group, s)) involutions.push_back(s);
  std::set<FqfIsometry> remaining(involutions.begin(), involutions.end());
  std::vector<InvolutionClass> out;
  while (!remaining.empty()) {
    FqfIsometry rep = *remaining.begin();
    auto cls = group.conjugacy_class(rep);
    for (const auto& c : cls) remaining.erase(c);
    out.push_back({cls.front(), cls.size()});
  }
  return out;
}

inline std::vector<InvolutionClass> involution_classes(const FiniteQuadraticForm& d) {
  if (d.size() > Integer(10'000)) throw CapExceeded("involution_classes: |D| exceeds 10^4");
  return involution_classes(FqfGroup(d));
}

// ---------------------------------------------------------------------------
// Brown invariant via the Gauss sum sum_x exp(i pi q(x)) on each primary part.
// Small cyclotomic moduli are handled exactly in Z[zeta_N] against
// zeta_8^k * sqrt|D|, with sqrt|D| built from quadratic Gauss sums.

namespace detail {

// Sparse element of Z[zeta_N] as exponent -> coefficient.
using Cyclotomic = std::map<std::int64_t, Integer>;

inline Cyclotomic cyc_mul(const Cyclotomic& a, const Cyclotomic& b, std::int64_t n) {
  Cyclotomic c;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      auto& slot = c[(ea + eb) % n];
      slot += ca * cb;
    }
  for (auto it = c.begin(); it != c.end();) it = it->second == 0 ? c.erase(it) : std::next(it);
  return c;
}

// Coefficients of the n-th cyclotomic polynomial (index = degree).
inline std::vector<Integer> cyclotomic_polynomial(std::int64_t n) {
  // Phi_n = prod_{d | n} (x^d - 1)^{mu(n/d)}; multiply the mu = +1 factors,
  // then divide exactly by the mu = -1 factors.
  auto mobius = [](std::int64_t m) {
    int mu = 1;
    for (std::int64_t p = 2; p * p <= m; ++p) {
      if (m % p) continue;
      m /= p;
      if (m % p == 0) return 0;
      mu = -mu;
    }
    if (m > 1) mu = -mu;
    return mu;
  };
  std::vector<Integer> poly{1};
  std::vector<std::int64_t> divide_by;
  for (std::int64_t d = 1; d <= n; ++d) {
    if (n % d) continue;
    int mu = mobius(n / d);
    if (mu == 1) {
      std::vector<Integer> next(poly.size() + static_cast<std::size_t>(d));
      for (std::size_t i = 0; i < poly.size(); ++i) {
        next[i + static_cast<std::size_t>(d)] += poly[i];
        next[i] -= poly[i];
      }
      poly = std::move(next);
    } else if (mu == -1) {
      divide_by.push_back(d);
    }
  }
  for (auto d : divide_by) {
    // poly / (x^d - 1): q_i = -(p_i - q_{i-d}) solved from low degree upwards.
    const std::size_t ud = static_cast<std::size_t>(d);
    std::vector<Integer> q(poly.size() - ud);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = -(poly[i] - (i >= ud ? q[i - ud] : Integer(0)));
    poly = std::move(q);
  }
  return poly;
}

// True iff the element vanishes in Z[zeta_n].
inline bool cyc_is_zero(const Cyclotomic& a, std::int64_t n, const std::vector<Integer>& phi) {
  std::vector<Integer> poly(static_cast<std::size_t>(n));
  for (const auto& [e, c] : a) poly[static_cast<std::size_t>(e)] += c;
  const std::size_t deg = phi.size() - 1;  // phi is monic
  for (std::size_t i = poly.size(); i-- > deg;) {
    if (poly[i] == 0) continue;
    Integer f = poly[i];
    for (std::size_t j = 0; j <= deg; ++j) poly[i - deg + j] -= f * phi[j];
  }
  return std::all_of(poly.begin(), poly.end(), [](const Integer& c) { return c == 0; });
}

inline constexpr std::int64_t kExactGaussModulus = 4096;

// Exact test in Z[zeta_n]: the Gauss sum equals zeta_8^k * sqrt|D|.
inline int brown_exact(const FiniteQuadraticForm& d, std::int64_t n) {
  const std::int64_t m2 = 2 * d.scale_denominator();
  const std::vector<Integer> primes = prime_divisors(d.size());
  Cyclotomic sum;
  for (const auto& x : d.elements()) sum[d.q_scaled(x) * (n / m2)] += 1;
  for (auto it = sum.begin(); it != sum.end();) it = it->second == 0 ? sum.erase(it) : std::next(it);

  // sqrt|D| = p^(e/2) ... * prod over odd-exponent primes of sqrt(p).
  Cyclotomic root{{0, 1}};
  for (const auto& p : primes) {
    int e = valuation(d.size(), p);
    Integer scalar = power(p, static_cast<unsigned>(e / 2));
    root = cyc_mul(root, {{0, scalar}}, n);
    if (e % 2 == 0) continue;
    Cyclotomic sq;
    if (p == 2) {
      sq = {{n / 8, 1}, {7 * n / 8, 1}};
    } else {
      const std::int64_t pi = to_int64(p);
      for (std::int64_t x = 0; x < pi; ++x) sq[(x * x % pi) * (n / pi)] += 1;
      if (pi % 4 == 3) sq = cyc_mul(sq, {{3 * n / 4, 1}}, n);  // times -i
    }
    root = cyc_mul(root, sq, n);
  }

  const auto phi = cyclotomic_polynomial(n);
  if (cyc_is_zero(sum, n, phi)) throw Error("brown_invariant: Gauss sum vanishes (degenerate form)");
  for (int k = 0; k < 8; ++k) {
    Cyclotomic diff = sum;
    for (const auto& [e, c] : root) diff[(e + k * n / 8) % n] -= c;
    if (cyc_is_zero(diff, n, phi)) return k;
  }
  throw Error("brown_invariant: Gauss sum is not an eighth root of unity times sqrt|D|");
}

// Large moduli: the Gauss sum is zeta_8^k * sqrt|D| for some k, and distinct
// candidates are 0.76 sqrt|D| apart, so rounding a long double evaluation is
// decisive. A margin check guards against anything unexpected.
inline int brown_rounded(const FiniteQuadraticForm& d) {
  const std::int64_t m2 = 2 * d.scale_denominator();
  const long double tau = 6.283185307179586476925286766559L;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(m2), 0);
  for (const auto& x : d.elements()) ++counts[static_cast<std::size_t>(d.q_scaled(x))];
  long double re = 0, im = 0;
  for (std::int64_t s = 0; s < m2; ++s) {
    if (!counts[static_cast<std::size_t>(s)]) continue;
    const long double angle = tau * static_cast<long double>(s) / static_cast<long double>(m2);
    re += static_cast<long double>(counts[static_cast<std::size_t>(s)]) * std::cos(angle);
    im += static_cast<long double>(counts[static_cast<std::size_t>(s)]) * std::sin(angle);
  }
  const long double norm = std::sqrt(static_cast<long double>(d.size()));
  for (int k = 0; k < 8; ++k) {
    const long double dr = re / norm - std::cos(tau * k / 8), di = im / norm - std::sin(tau * k / 8);
    if (dr * dr + di * di < 1e-6L) return k;
  }
  throw Error("brown_invariant: Gauss sum is not an eighth root of unity times sqrt|D|");
}

inline int brown_primary(const FiniteQuadraticForm& d, const Integer& p) {
  const std::int64_t m2 = 2 * d.scale_denominator();
  const std::int64_t n = std::lcm(std::lcm(m2, std::int64_t{8}), 4 * to_int64(p));
  return n <= kExactGaussModulus ? brown_exact(d, n) : brown_rounded(d);
}

}  // namespace detail

// Brown invariant in [0, 8), additive over the primary parts.
inline int brown_invariant(const FiniteQuadraticForm& d) {
  int total = 0;
  for (const auto& p : d.primes()) total += detail::brown_primary(d.p_part(p).form, p);
  return total % 8;
}

inline std::ostream& operator<<(std::ostream& os, const FiniteQuadraticForm& d) {
  os << "orders [";
  for (std::size_t i = 0; i < d.generator_count(); ++i) os << (i ? "," : "") << d.order_of_generator(i);
  os << "] q [";
  for (std::size_t i = 0; i < d.generator_count(); ++i) os << (i ? "," : "") << to_string(d.q_value(i));
  return os << "]";
}

}  // namespace k3lines
