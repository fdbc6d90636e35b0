#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "zeig/symtensor.hpp"

using namespace zeig;

TEST(FromEntries, SingleDiagonalEntry) {
  const auto t = SymmetricTensor::from_entries({3, 2, {{{0, 0, 0}, 1.0}}});
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(t.at({i, j, k}), (i + j + k == 0) ? 1.0 : 0.0);
}

TEST(FromEntries, Example1PermutedEntry) {
  const auto t = fixtures::example1();
  EXPECT_EQ(t.at({0, 1, 2}), -0.1790);
  EXPECT_EQ(t.at({2, 0, 1}), -0.1790);
  EXPECT_EQ(t.at({1, 2, 0}), -0.1790);
}

TEST(FromEntries, Example2AllPermutations) {
  const auto t = fixtures::example2();
  std::vector<std::size_t> idx{1, 1, 2, 2};
  int count = 0;
  do {
    EXPECT_EQ(t(idx), 0.2127);
    ++count;
  } while (std::next_permutation(idx.begin(), idx.end()));
  EXPECT_EQ(count, 6);
}

TEST(FromEntries, Rejections) {
  EXPECT_THROW(SymmetricTensor::from_entries({3, 2, {{{0, 0, 1}, 1.0}, {{0, 0, 1}, 2.0}}}), std::invalid_argument);
  EXPECT_THROW(SymmetricTensor::from_entries({3, 2, {{{0, 0, 2}, 1.0}}}), std::out_of_range);
  EXPECT_THROW(SymmetricTensor::from_entries({3, 2, {{{1, 0, 0}, 1.0}}}), std::invalid_argument);
  EXPECT_THROW(SymmetricTensor::from_entries({3, 2, {{{0, 0, 0}, std::nan("")}}}), std::invalid_argument);
  EXPECT_THROW(SymmetricTensor(3, 4000), std::length_error);
}

TEST(FromEntries, PermutedReadBackIsExact) {
  std::mt19937_64 rng(3);
  const auto t = fixtures::random_tensor(4, 3, rng);
  for (const auto& e : t.to_entries().entries) {
    auto idx = e.index;
    do EXPECT_EQ(t(idx), e.value);
    while (std::next_permutation(idx.begin(), idx.end()));
  }
  EXPECT_EQ(t.symmetry_defect(), 0.0);
}

TEST(Contract, OneNonzeroEntry) {
  const auto t = SymmetricTensor::from_entries({3, 2, {{{0, 0, 0}, 1.0}}});
  const std::vector<double> x{1.0, 0.0};
  const auto c = t.contract_all(x);
  EXPECT_EQ(c.matrix(0, 0), 1.0);
  EXPECT_EQ(c.matrix(0, 1), 0.0);
  EXPECT_EQ(c.matrix(1, 1), 0.0);
  EXPECT_EQ(c.vector, (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(c.scalar, 1.0);
}

TEST(Contract, DiagonalOrderFour) {
  const auto t = fixtures::diagonal4(3);
  const std::vector<double> e1{1.0, 0.0, 0.0};
  const auto c = t.contract_all(e1);
  EXPECT_EQ(c.vector, e1);
  EXPECT_EQ(c.scalar, 1.0);
}

TEST(Contract, Example1MatchesBruteForce) {
  const auto t = fixtures::example1();
  const std::vector<double> x{-0.402911, 0.903051, -0.148865};
  const auto b = oracle::contract(t.values(), 3, 3, x);
  EXPECT_NEAR(t.contract_all(x).scalar, b.s, 1e-15);
}

TEST(Contract, RandomMatchesBruteForce) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int m = 2; m <= 4; ++m)
    for (std::size_t n = 1; n <= 5; ++n) {
      const auto t = fixtures::random_tensor(m, n, rng);
      std::vector<double> x(n);
      for (double& v : x) v = g(rng);
      const auto c = t.contract_all(x);
      const auto b = oracle::contract(t.values(), m, n, x);
      double scale = 0.0;
      for (double v : b.v) scale = std::max(scale, std::abs(v));
      for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(c.vector[i], b.v[i], 1e-13 * std::max(1.0, scale));
      EXPECT_NEAR(c.scalar, b.s, 1e-13 * std::max(1.0, std::abs(b.s)));
      EXPECT_LE(asymmetry(c.matrix.matrix()), 1e-14);
    }
}

TEST(Contract, Homogeneity) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int m = 2; m <= 4; ++m) {
    const auto t = fixtures::random_tensor(m, 4, rng);
    std::vector<double> x(4);
    for (double& v : x) v = g(rng);
    const double s = t.contract_all(x).scalar;
    const double c = 1.7;
    std::vector<double> cx = x;
    for (double& v : cx) v *= c;
    EXPECT_NEAR(t.contract_all(cx).scalar, std::pow(c, m) * s, 1e-12 * std::abs(std::pow(c, m) * s));
  }
}

TEST(Contract, OrderTwoIsTheMatrix) {
  const auto t = SymmetricTensor::from_entries({2, 2, {{{0, 0}, 2.0}, {{0, 1}, 1.0}, {{1, 1}, 3.0}}});
  const std::vector<double> x{0.3, -0.2};
  const auto c = t.contract_all(x);
  EXPECT_EQ(c.matrix(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(c.vector[0], 2.0 * 0.3 - 0.2);
}

TEST(Contract, LengthMismatch) {
  const auto t = fixtures::example1();
  const std::vector<double> x{1.0, 0.0};
  EXPECT_THROW(t.contract_all(x), std::invalid_argument);
}

TEST(TextFormat, RoundTrip) {
  const auto t = fixtures::example2();
  std::stringstream ss;
  write_tensor(ss, t);
  const auto back = SymmetricTensor::from_entries(parse_entries(ss));
  ASSERT_EQ(back.values().size(), t.values().size());
  for (std::size_t i = 0; i < t.values().size(); ++i) EXPECT_EQ(back.values()[i], t.values()[i]);
}

TEST(TextFormat, CommentsAndOneBasedIndices) {
  std::istringstream in("# a comment\n3 2\n1 1 2 0.5  # trailing\n\n2 2 2 -1\n");
  const auto e = parse_entries(in);
  ASSERT_EQ(e.entries.size(), 2u);
  EXPECT_EQ(e.entries[0].index, (std::vector<std::size_t>{0, 0, 1}));
  const auto t = SymmetricTensor::from_entries(e);
  EXPECT_EQ(t.at({1, 0, 0}), 0.5);
}

TEST(TextFormat, BadInput) {
  std::istringstream zero("3 2\n0 1 1 1.0\n");
  EXPECT_THROW(SymmetricTensor::from_entries(parse_entries(zero)), std::exception);
  std::istringstream junk("3 2\n1 1 x 1.0\n");
  EXPECT_THROW(parse_entries(junk), std::exception);
  EXPECT_THROW(read_tensor("/nonexistent/file.tns"), std::exception);
}
