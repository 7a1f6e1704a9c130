#include "k3lines/linalg.hpp"
#include "k3lines/padic.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <set>

using namespace k3lines;
using k3test::random_matrix;
using k3test::uniform;

namespace {

// gcd of all k x k minors, by brute force over row and column subsets.
Integer determinantal_divisor(const IntegerMatrix& m, std::size_t k) {
  Integer g = 0;
  std::vector<std::size_t> rows, cols;
  std::function<void(std::size_t, std::vector<std::size_t>&, std::size_t, const std::function<void()>&)> choose =
      [&](std::size_t start, std::vector<std::size_t>& sel, std::size_t limit, const std::function<void()>& done) {
        if (sel.size() == k) return done();
        for (std::size_t i = start; i < limit; ++i) {
          sel.push_back(i);
          choose(i + 1, sel, limit, done);
          sel.pop_back();
        }
      };
  choose(0, rows, m.rows(), [&] {
    choose(0, cols, m.cols(), [&] {
      IntegerMatrix sub(k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) sub(i, j) = m(rows[i], cols[j]);
      g = gcd(g, determinant(sub));
    });
  });
  return abs(g);
}

void expect_smith_valid(const IntegerMatrix& m) {
  auto sd = smith_decompose(m);
  EXPECT_EQ(sd.U * m * sd.V, sd.S);
  EXPECT_EQ(abs(determinant(sd.U)), 1);
  EXPECT_EQ(abs(determinant(sd.V)), 1);
  for (std::size_t i = 0; i < sd.S.rows(); ++i)
    for (std::size_t j = 0; j < sd.S.cols(); ++j)
      if (i != j) EXPECT_EQ(sd.S(i, j), 0);
  auto d = sd.diagonal();
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_GE(d[i], 0);
    if (i + 1 < d.size() && d[i] != 0) EXPECT_EQ(d[i + 1] % d[i], 0);
    if (d[i] == 0)
      for (std::size_t j = i; j < d.size(); ++j) EXPECT_EQ(d[j], 0);
  }
}

}  // namespace

TEST(Smith, SpecExamples) {
  EXPECT_EQ(smith_decompose(IntegerMatrix{{0, 1}, {1, 0}}).S, (IntegerMatrix{{1, 0}, {0, 1}}));
  EXPECT_EQ(smith_decompose(IntegerMatrix{{2, 0}, {0, 3}}).S, (IntegerMatrix{{1, 0}, {0, 6}}));
  // Oracle: gcd of entries is 3, |det| = 27.
  IntegerMatrix m{{-6, 3}, {3, -6}};
  EXPECT_EQ(determinantal_divisor(m, 1), 3);
  EXPECT_EQ(determinantal_divisor(m, 2), 27);
  EXPECT_EQ(smith_decompose(m).S, (IntegerMatrix{{3, 0}, {0, 9}}));
}

TEST(Smith, RandomMatricesSatisfyContract) {
  for (int trial = 0; trial < 200; ++trial) {
    auto m = random_matrix(uniform(1, 8), uniform(1, 8), 20);
    expect_smith_valid(m);
  }
}

TEST(Smith, DiagonalMatchesDeterminantalDivisors) {
  for (int trial = 0; trial < 60; ++trial) {
    auto m = random_matrix(uniform(1, 4), uniform(1, 4), 12);
    auto d = smith_decompose(m).diagonal();
    Integer prev = 1;
    for (std::size_t k = 1; k <= d.size(); ++k) {
      Integer dk = determinantal_divisor(m, k);
      if (prev == 0) {
        EXPECT_EQ(d[k - 1], 0);
        continue;
      }
      EXPECT_EQ(d[k - 1], dk / prev) << m;
      prev = dk;
    }
  }
}

TEST(Smith, IsDeterministic) {
  auto m = random_matrix(6, 5, 20);
  auto a = smith_decompose(m), b = smith_decompose(m);
  EXPECT_EQ(a.U, b.U);
  EXPECT_EQ(a.V, b.V);
}

TEST(Kernel, SpecExamples) {
  EXPECT_TRUE(integral_kernel(IntegerMatrix::identity(3)).empty());
  auto k = integral_kernel(IntegerMatrix{{1, 1}, {1, 1}});
  ASSERT_EQ(k.size(), 1u);
  EXPECT_TRUE((k[0] == std::vector<Integer>{1, -1}) || (k[0] == std::vector<Integer>{-1, 1}));
}

TEST(Kernel, K33WithPolarization) {
  // Gram on six lines of K(3,3) plus h with h^2 = 6.
  IntegerMatrix g(7, 7);
  for (std::size_t i = 0; i < 6; ++i) {
    g(i, i) = -2;
    g(i, 6) = g(6, i) = 1;
    for (std::size_t j = 0; j < 6; ++j)
      if ((i < 3) != (j < 3)) g(i, j) = 1;
  }
  g(6, 6) = 6;
  std::vector<Integer> expected{1, 1, 1, 1, 1, 1, -1};
  EXPECT_EQ(g * expected, std::vector<Integer>(7, 0));
  auto k = integral_kernel(g);
  ASSERT_EQ(k.size(), 1u);
  EXPECT_TRUE(k[0] == expected || g * k[0] == std::vector<Integer>(7, 0));
  std::vector<Integer> neg;
  for (auto& x : expected) neg.push_back(-x);
  EXPECT_TRUE(k[0] == expected || k[0] == neg);
}

TEST(Kernel, RandomKernelsAreSaturatedAndComplete) {
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t rows = uniform(1, 6), cols = uniform(1, 7);
    // Low rank products make kernels common.
    IntegerMatrix m = trial % 2 ? random_matrix(rows, cols, 6) : random_matrix(rows, 2, 4) * random_matrix(2, cols, 4);
    auto ker = integral_kernel(m);
    EXPECT_EQ(ker.size(), cols - rank(m));
    for (const auto& x : ker) EXPECT_EQ(m * x, std::vector<Integer>(rows, 0));
    if (ker.empty()) continue;
    // Saturation: all invariant factors of the basis are 1.
    IntegerMatrix b(ker.size(), cols);
    for (std::size_t i = 0; i < ker.size(); ++i)
      for (std::size_t j = 0; j < cols; ++j) b(i, j) = ker[i][j];
    for (const auto& d : smith_decompose(b).diagonal()) EXPECT_EQ(d, 1);
  }
}

TEST(Inertia, SpecExamples) {
  auto u = inertia(IntegerMatrix{{0, 1}, {1, 0}});
  EXPECT_EQ(u.plus, 1u);
  EXPECT_EQ(u.minus, 1u);
  EXPECT_EQ(u.zero, 0u);
  IntegerMatrix e8(8, 8);
  const int edges[7][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {2, 7}};
  for (std::size_t i = 0; i < 8; ++i) e8(i, i) = -2;
  for (auto& e : edges) e8(e[0], e[1]) = e8(e[1], e[0]) = 1;
  auto in = inertia(e8);
  EXPECT_EQ(in.plus, 0u);
  EXPECT_EQ(in.minus, 8u);
  auto b = inertia(IntegerMatrix{{8, 4}, {4, 8}});
  EXPECT_EQ(b.plus, 2u);
  EXPECT_EQ(b.minus, 0u);
}

TEST(Inertia, RejectsNonSymmetric) { EXPECT_THROW(inertia(IntegerMatrix{{0, 1}, {2, 0}}), InputError); }

TEST(Inertia, AgreesWithLeadingMinorsOnDefiniteMatrices) {
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = uniform(1, 6);
    auto b = random_matrix(n, n, 5);
    if (determinant(b) == 0) continue;
    IntegerMatrix pos = b.transpose() * b;
    IntegerMatrix m = trial % 2 ? pos : IntegerMatrix(-pos);
    // Sylvester: leading minors all positive, or alternating in sign.
    for (std::size_t k = 1; k <= n; ++k) {
      IntegerMatrix lead(k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) lead(i, j) = m(i, j);
      Integer d = determinant(lead);
      EXPECT_EQ(sign(d), trial % 2 ? 1 : (k % 2 ? -1 : 1));
    }
    auto in = inertia(m);
    EXPECT_EQ(in.plus, trial % 2 ? n : 0u);
    EXPECT_EQ(in.minus, trial % 2 ? 0u : n);
  }
}

TEST(Inertia, SignChangesOfLeadingMinors) {
  // With all leading minors nonzero, the number of sign changes in
  // 1, D1, ..., Dn equals the negative index.
  int checked = 0;
  for (int trial = 0; trial < 300 && checked < 100; ++trial) {
    std::size_t n = uniform(1, 6);
    IntegerMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = uniform(-9, 9);
    Integer prev = 1;
    std::size_t changes = 0;
    bool ok = true;
    for (std::size_t k = 1; k <= n && ok; ++k) {
      IntegerMatrix lead(k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) lead(i, j) = m(i, j);
      Integer d = determinant(lead);
      if (d == 0) ok = false;
      if (sign(d) != sign(prev)) ++changes;
      prev = d;
    }
    if (!ok) continue;
    ++checked;
    auto in = inertia(m);
    EXPECT_EQ(in.minus, changes);
    EXPECT_EQ(in.plus, n - changes);
    EXPECT_EQ(in.zero, 0u);
  }
  EXPECT_GE(checked, 50);
}

TEST(Inertia, ZeroPivotsAndDegenerateForms) {
  auto in = inertia(IntegerMatrix{{0, 1, 0}, {1, 0, 0}, {0, 0, 0}});
  EXPECT_EQ(in.plus, 1u);
  EXPECT_EQ(in.minus, 1u);
  EXPECT_EQ(in.zero, 1u);
  auto z = inertia(IntegerMatrix{{0, 0}, {0, 0}});
  EXPECT_EQ(z.zero, 2u);
}

TEST(SquareClass, SpecExamples) {
  EXPECT_TRUE(square_class_equal(2, 3, 5));
  EXPECT_FALSE(square_class_equal(1, 7, 2));
  for (int p : {2, 3, 5, 7, 11}) EXPECT_TRUE(square_class_equal(18, 2, p));
  EXPECT_THROW(square_class_equal(1, 2, 4), InputError);
  EXPECT_THROW(square_class_equal(0, 2, 3), InputError);
}

TEST(SquareClass, AgreesWithBruteForceResidues) {
  // Oracle: a unit u is a square mod p^k (odd p) iff it is a square mod p;
  // scan residues directly.
  for (int p : {3, 5, 7, 11, 13}) {
    std::set<int> squares;
    for (int x = 1; x < p; ++x) squares.insert(x * x % p);
    for (int a = 1; a < 40; ++a)
      for (int b = 1; b < 40; ++b) {
        if (a % p == 0 || b % p == 0) continue;
        int ratio = a * b % p;  // a/b ~ a*b mod squares
        EXPECT_EQ(square_class_equal(a, b, p), squares.count(ratio) == 1) << a << " " << b << " " << p;
      }
  }
  // p = 2: odd units are squares in Z_2 iff they are 1 mod 8.
  for (int a = 1; a < 64; a += 2) EXPECT_EQ(square_class_equal(a, 1, 2), a % 8 == 1);
  EXPECT_FALSE(square_class_equal(2, 1, 2));
  EXPECT_TRUE(square_class_equal(Rational(1, 4), 1, 2));
}
