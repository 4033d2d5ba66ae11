#include <gtest/gtest.h>

#include "fivebar/marching_squares.hpp"
#include "fivebar/union_find.hpp"

using namespace fivebar;

TEST(DisjointSet, UnionsAndSizes) {
  DisjointSet s(6);
  EXPECT_TRUE(s.unite(0, 1));
  EXPECT_TRUE(s.unite(2, 3));
  EXPECT_FALSE(s.unite(1, 0));
  EXPECT_TRUE(s.unite(1, 3));
  EXPECT_EQ(s.find(0), s.find(2));
  EXPECT_NE(s.find(0), s.find(4));
  EXPECT_EQ(s.size_of(3), 4u);
  EXPECT_EQ(s.size_of(5), 1u);
}

TEST(ZeroIsolines, CircleIsOneClosedLoop) {
  const int n = 41;
  std::vector<double> v(n * n);
  std::vector<std::uint8_t> valid(n * n, 1);
  auto pos = [&](int i, int j) { return Point2(-2.0 + 4.0 * i / (n - 1), -2.0 + 4.0 * j / (n - 1)); };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) v[j * n + i] = pos(i, j).squaredNorm() - 1.0;
  const auto lines = zero_isolines(v, valid, n, n, pos);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_EQ(lines[0].front(), lines[0].back());
  for (const auto& p : lines[0]) EXPECT_NEAR(p.norm(), 1.0, 0.01);
}

TEST(ZeroIsolines, UniformSignGivesNothing) {
  const int n = 8;
  std::vector<double> v(n * n, 3.0);
  std::vector<std::uint8_t> valid(n * n, 1);
  EXPECT_TRUE(zero_isolines(v, valid, n, n, [](int i, int j) { return Point2(i, j); }).empty());
}

TEST(ZeroIsolines, InvalidNodesCutTheLine) {
  // Field x - 2.5 has a vertical zero line; an invalid row splits it in two.
  const int n = 6;
  std::vector<double> v(n * n);
  std::vector<std::uint8_t> valid(n * n, 1);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) v[j * n + i] = i - 2.5;
  for (int i = 0; i < n; ++i) valid[3 * n + i] = 0;
  const auto lines = zero_isolines(v, valid, n, n, [](int i, int j) { return Point2(i, j); });
  ASSERT_EQ(lines.size(), 2u);
  for (const auto& line : lines)
    for (const auto& p : line) EXPECT_DOUBLE_EQ(p.x(), 2.5);
}
