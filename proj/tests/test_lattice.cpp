#include "k3lines/fqf.hpp"
#include "k3lines/lattice.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace k3lines;
using k3test::uniform;

namespace {

const std::vector<std::string> kBuiltins = {"U",      "U(2)",   "2U(3)", "A1",    "A2",       "A3",     "D4",
                                            "D5",     "E6",     "E7",    "E8",    "[8,4,8]",  "[2]",    "[-2]",
                                            "[2,1,4]", "U+A2",  "E8+A1", "3*A2",  "A2(-1)",   "U(2)+[-2]"};

IntegerMatrix block4(const IntegerMatrix& a, const IntegerMatrix& b) {
  IntegerMatrix m(4, 4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      m(i, j) = a(i, j);
      m(i + 2, j + 2) = b(i, j);
    }
  return m;
}

// Eichler transvection x -> x + (x.e) a - (x.a) e - (a.a / 2)(x.e) e on 2U.
IntegerMatrix eichler(const Lattice& l, const std::vector<Integer>& e, const std::vector<Integer>& a) {
  const std::size_t n = l.rank();
  IntegerMatrix m(n, n);
  Integer half = l.product(a, a) / 2;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<Integer> x(n, 0);
    x[c] = 1;
    Integer xe = l.product(x, e), xa = l.product(x, a);
    for (std::size_t i = 0; i < n; ++i) m(i, c) = x[i] + xe * a[i] - xa * e[i] - half * xe * e[i];
  }
  return m;
}

std::vector<IntegerMatrix> two_u_generators(const Lattice& l) {
  const IntegerMatrix id{{1, 0}, {0, 1}}, neg{{-1, 0}, {0, -1}}, sw{{0, 1}, {1, 0}};
  IntegerMatrix summand_swap(4, 4);
  for (std::size_t i = 0; i < 2; ++i) summand_swap(i, i + 2) = summand_swap(i + 2, i) = 1;
  return {block4(sw, id),        block4(id, neg),  summand_swap,
          eichler(l, {1, 0, 0, 0}, {0, 0, 1, 1}), eichler(l, {0, 1, 0, 0}, {0, 0, 1, -2}),
          eichler(l, {0, 0, 1, 0}, {1, 3, 0, 0})};
}

}  // namespace

TEST(BuildLattice, SpecExamples) {
  EXPECT_EQ(build_lattice("U(2)").gram(), (IntegerMatrix{{0, 2}, {2, 0}}));
  EXPECT_EQ(build_lattice("[8,4,8]").gram(), (IntegerMatrix{{8, 4}, {4, 8}}));
  IntegerMatrix two_u3(4, 4);
  two_u3(0, 1) = two_u3(1, 0) = two_u3(2, 3) = two_u3(3, 2) = 3;
  EXPECT_EQ(build_lattice("2U(3)").gram(), two_u3);
  EXPECT_EQ(build_lattice(" 2 * U ( 3 ) ").gram(), two_u3);
  EXPECT_EQ(build_lattice("(U+U)(3)").gram(), two_u3);
}

TEST(BuildLattice, RootLatticesAreNegativeDefinite) {
  EXPECT_EQ(build_lattice("A2").gram(), (IntegerMatrix{{-2, 1}, {1, -2}}));
  for (std::string s : {"A1", "A4", "D4", "D6", "E6", "E7", "E8"}) {
    Lattice l = build_lattice(s);
    EXPECT_TRUE(l.negative_definite()) << s;
  }
  // Determinants of the negative definite root lattices: (-1)^n det(positive).
  EXPECT_EQ(build_lattice("A4").det(), 5);
  EXPECT_EQ(build_lattice("D5").det(), -4);
  EXPECT_EQ(build_lattice("E6").det(), 3);
  EXPECT_EQ(build_lattice("E7").det(), -2);
  EXPECT_EQ(build_lattice("E8").det(), 1);
}

TEST(BuildLattice, Errors) {
  EXPECT_THROW(build_lattice("[3,1,2]"), InputError);
  EXPECT_THROW(build_lattice("[1]"), InputError);
  EXPECT_THROW(build_lattice("Q7"), InputError);
  EXPECT_THROW(build_lattice("U("), InputError);
  EXPECT_THROW(build_lattice("U(0)"), InputError);
  EXPECT_THROW(build_lattice(""), InputError);
  EXPECT_THROW(Lattice(IntegerMatrix{{1, 0}, {0, 2}}), InputError);
  EXPECT_THROW(Lattice(IntegerMatrix{{2, 1}, {0, 2}}), InputError);
}

TEST(Discriminant, SpecExamples) {
  EXPECT_TRUE(discriminant_form(build_lattice("E8")).trivial());
  auto u2 = discriminant_form(build_lattice("U(2)"));
  ASSERT_EQ(u2.orders(), (std::vector<std::int64_t>{2, 2}));
  EXPECT_EQ(u2.q_value(0), 0);
  EXPECT_EQ(u2.q_value(1), 0);
  EXPECT_EQ(u2.pairing(0, 1), Rational(1, 2));
  auto s = discriminant_form(build_lattice("[8,4,8]"));
  EXPECT_EQ(s.orders(), (std::vector<std::int64_t>{4, 12}));
}

TEST(Discriminant, GeneratorsAreDualVectors) {
  for (const auto& spec : kBuiltins) {
    Lattice l = build_lattice(spec);
    auto d = discriminant(l);
    RationalMatrix g = matrix_cast<Rational>(l.gram());
    for (std::size_t i = 0; i < d.generators.size(); ++i) {
      auto gx = g * d.generators[i].values();
      for (const auto& c : gx) EXPECT_EQ(denominator(c), 1) << spec;
      // Order of the class equals the invariant factor.
      EXPECT_EQ(d.generators[i].denominator(), d.form.order_of_generator(i)) << spec;
      EXPECT_EQ(d.element_of(d.generators[i].values()), d.form.generator(i));
    }
  }
}

TEST(Discriminant, PropertiesOnBuiltinsAndRandomLattices) {
  std::vector<Lattice> lattices;
  for (const auto& s : kBuiltins) lattices.push_back(build_lattice(s));
  for (int i = 0; i < 100; ++i) lattices.push_back(k3test::random_even_lattice(6, 10));
  for (std::size_t i = 0; i < lattices.size(); ++i) {
    const Lattice& l = lattices[i];
    auto d = discriminant_form(l);
    EXPECT_EQ(d.size(), abs(l.det())) << l.gram();
    if (d.size() > Integer(400)) continue;
    EXPECT_TRUE(isometric(discriminant_form(l.rescaled(-1)), d.negated())) << l.gram();
    const Lattice& other = lattices[(i * 7 + 3) % lattices.size()];
    auto d2 = discriminant_form(other);
    if (d.size() * d2.size() > Integer(400)) continue;
    EXPECT_TRUE(isometric(discriminant_form(direct_sum(l, other)), direct_sum(d, d2))) << l.gram() << other.gram();
  }
}

TEST(OrthogonalGroup, SpecExamples) {
  EXPECT_EQ(orthogonal_group_definite(build_lattice("[2]")).size(), 2u);
  EXPECT_EQ(orthogonal_group_definite(build_lattice("[8,4,8]")).size(), 12u);
  EXPECT_EQ(orthogonal_group_definite(build_lattice("A2")).size(), 12u);
  EXPECT_EQ(orthogonal_group_definite(build_lattice("[2,0,2]")).size(), 8u);
  EXPECT_THROW(orthogonal_group_definite(build_lattice("U")), InputError);
  EXPECT_THROW(orthogonal_group_definite(build_lattice("A5")), InputError);
}

TEST(OrthogonalGroup, NormEightVectorsOfSchurLattice) {
  // Oracle: scan the box |x|, |y| <= 10 directly.
  Lattice l = build_lattice("[8,4,8]");
  std::size_t count = 0;
  for (int x = -10; x <= 10; ++x)
    for (int y = -10; y <= 10; ++y)
      if (8 * x * x + 8 * x * y + 8 * y * y == 8) ++count;
  EXPECT_EQ(count, 6u);
  EXPECT_EQ(vectors_of_norm(l, 8).size(), count);
}

TEST(OrthogonalGroup, GroupAxioms) {
  for (std::string spec : {"[8,4,8]", "A2", "[2,0,2]", "[2,1,2]", "A1+A1+A1", "D4", "[4,2,6]"}) {
    Lattice l = build_lattice(spec);
    auto group = orthogonal_group_definite(l);
    std::set<IntegerMatrix, std::less<>> elems;
    for (const auto& g : group) {
      EXPECT_TRUE(is_isometry(l, g.matrix)) << spec;
      elems.insert(g.matrix);
    }
    const std::size_t n = l.rank();
    EXPECT_TRUE(elems.count(IntegerMatrix::identity(n))) << spec;
    EXPECT_TRUE(elems.count(IntegerMatrix(-IntegerMatrix::identity(n)))) << spec;
    for (const auto& a : group)
      for (const auto& b : group) EXPECT_TRUE(elems.count(a.matrix * b.matrix)) << spec;
  }
}

TEST(SignStructure, SpecExamples) {
  Lattice u = build_lattice("U");
  EXPECT_EQ(sign_structure_action(u, IntegerMatrix(-IntegerMatrix::identity(2))), -1);
  for (const auto& spec : kBuiltins) {
    Lattice l = build_lattice(spec);
    EXPECT_EQ(sign_structure_action(l, IntegerMatrix::identity(l.rank())), 1) << spec;
  }
  Lattice two_u = build_lattice("2U");
  IntegerMatrix summand_swap(4, 4);
  for (std::size_t i = 0; i < 2; ++i) summand_swap(i, i + 2) = summand_swap(i + 2, i) = 1;
  EXPECT_EQ(sign_structure_action(two_u, summand_swap), -1);
  EXPECT_THROW(sign_structure_action(build_lattice("[0,1,0]+[0]"), IntegerMatrix::identity(3)), InputError);
}

TEST(SignStructure, IsAHomomorphismOnTwoU) {
  Lattice l = build_lattice("2U");
  auto gens = two_u_generators(l);
  for (const auto& g : gens) ASSERT_TRUE(is_isometry(l, g)) << g;
  auto random_element = [&] {
    IntegerMatrix m = IntegerMatrix::identity(4);
    for (int k = uniform(0, 6); k > 0; --k) m = m * gens[uniform(0, gens.size() - 1)];
    return m;
  };
  for (int trial = 0; trial < 200; ++trial) {
    IntegerMatrix g = random_element(), h = random_element();
    EXPECT_EQ(sign_structure_action(l, g * h), sign_structure_action(l, g) * sign_structure_action(l, h));
  }
}

TEST(InvariantSublattice, SpecExamples) {
  Lattice u = build_lattice("U");
  EXPECT_EQ(invariant_sublattice(u, IntegerMatrix::identity(2)).lattice.gram(), u.gram());
  auto swapped = invariant_sublattice(u, IntegerMatrix{{0, 1}, {1, 0}});
  EXPECT_EQ(swapped.lattice.gram(), (IntegerMatrix{{2}}));
  Lattice two_u = build_lattice("2U");
  IntegerMatrix summand_swap(4, 4);
  for (std::size_t i = 0; i < 2; ++i) summand_swap(i, i + 2) = summand_swap(i + 2, i) = 1;
  auto diag = invariant_sublattice(two_u, summand_swap).lattice;
  EXPECT_EQ(diag.rank(), 2u);
  EXPECT_EQ(diag.det(), -4);
  EXPECT_TRUE(isometric(discriminant_form(diag), discriminant_form(build_lattice("U(2)"))));
  EXPECT_THROW(invariant_sublattice(u, IntegerMatrix{{1, 1}, {0, 1}}), InputError);
}

TEST(InvariantSublattice, RankAdditivityForInvolutions) {
  Lattice l = build_lattice("2U");
  auto gens = two_u_generators(l);
  std::size_t checked = 0;
  for (int trial = 0; trial < 400 && checked < 60; ++trial) {
    IntegerMatrix g = IntegerMatrix::identity(4);
    for (int k = uniform(1, 5); k > 0; --k) g = g * gens[uniform(0, gens.size() - 1)];
    if (g * g != IntegerMatrix::identity(4)) continue;
    // Conjugate involutions stay involutions.
    ++checked;
    auto plus = invariant_sublattice(l, g);
    auto minus = invariant_sublattice(l, IntegerMatrix(-g));
    EXPECT_EQ(plus.lattice.rank() + minus.lattice.rank(), 4u) << g;
    IntegerMatrix both(4, 4);
    for (std::size_t c = 0; c < plus.embedding.cols(); ++c) both.set_column(c, plus.embedding.column(c));
    for (std::size_t c = 0; c < minus.embedding.cols(); ++c)
      both.set_column(plus.embedding.cols() + c, minus.embedding.column(c));
    EXPECT_NE(determinant(both), 0) << g;
  }
  EXPECT_GE(checked, 10u);
}
