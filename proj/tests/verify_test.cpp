#include <gtest/gtest.h>

#include <regex>

#include "example_tables.hpp"
#include "msr/error.hpp"
#include "msr/verify.hpp"
#include "test_util.hpp"

namespace msr {
namespace {

using testing::all_valid_k;

TEST(TypeVectors, EnumerationIsCompleteAndValid) {
  // brute force over a box for comparison
  for (int r : {1, 2, 3, 4, 6}) {
    for (int groups : {1, 2, 3, 4}) {
      const auto got = enumerate_type_vectors(r, groups);
      std::size_t brute = 0;
      TypeCounts z{};
      std::function<void(std::size_t)> rec = [&](std::size_t t) {
        if (t == 7) {
          int tot = 0;
          for (int c : z) tot += c;
          if (weighted_count(z) == r && tot <= groups) ++brute;
          return;
        }
        for (int c = 0; c <= r; ++c) {
          z[t] = c;
          rec(t + 1);
        }
        z[t] = 0;
      };
      rec(0);
      EXPECT_EQ(got.size(), brute) << r << " " << groups;
      for (const auto& v : got) EXPECT_EQ(weighted_count(v), r);
    }
  }
}

TEST(BuildM, CornerMatchesExampleForTwoFullGroups) {
  // r = 6 with two fully erased groups; k = 3 keeps the instance valid.
  const auto params = make_params(9, 3);
  const auto blocks = build_parity_blocks(params);
  const Matrix m = build_M(params, blocks, {2, 0, 0, 0, 0, 0, 0});
  ASSERT_EQ(m.rows(), 24u);
  ASSERT_EQ(m.cols(), 24u);
  // Rebuild the expected entries from the tag strings.
  const std::regex term(R"((-?)L(\d+))");
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t c = 0; c < 24; ++c) {
      std::vector<Symbol> want(6, 0);
      const std::string& s = kCornerZ2[a][c];
      for (auto it = std::sregex_iterator(s.begin(), s.end(), term); it != std::sregex_iterator(); ++it) {
        const auto l = column_L(params.lambda(std::stoi((*it)[2])), 6, params.field);
        for (std::size_t t = 0; t < 6; ++t)
          want[t] = (*it)[1] == "-" ? params.field.sub(want[t], l[t]) : params.field.add(want[t], l[t]);
      }
      for (std::size_t t = 0; t < 6; ++t) EXPECT_EQ(m(a * 6 + t, c), want[t]) << a << "," << c << " " << s;
    }
  }
}

TEST(BuildM, TwoNodeCornersSideBySide) {
  const auto params = make_params(6, 4);
  const auto blocks = build_parity_blocks(params);
  const Matrix m = build_M(params, blocks, {0, 1, 0, 0, 0, 0, 0});
  const std::vector<Matrix> parts{submatrix_A(params, blocks, 0, 2), submatrix_A(params, blocks, 1, 2)};
  EXPECT_EQ(m, hconcat(parts));
  EXPECT_THROW(build_M(params, blocks, {1, 0, 0, 0, 0, 0, 0}), InvalidParams);
}

TEST(BuildM, DeterminantsNonzero) {
  for (int n : {3, 6, 9, 12}) {
    for (int k : all_valid_k(n)) {
      const auto rep = sweep_block_determinants(make_params(n, k));
      EXPECT_TRUE(rep.all_passed()) << "n=" << n << " k=" << k;
      EXPECT_GT(rep.total, 0u);
    }
  }
}

TEST(Polys, MulAndEval) {
  const PrimeField f(7);
  const Poly a{1, 1};  // 1 + x
  const Poly b{6, 1};  // x - 1
  EXPECT_EQ(poly_mul(f, a, b), (Poly{6, 0, 1}));
  EXPECT_EQ(poly_eval(f, Poly{6, 0, 1}, 3), 1u);
  EXPECT_EQ(poly_eval(f, Poly{}, 3), 0u);
}

TEST(FilterPolys, FactorsAndRoots) {
  const auto params = make_params(9, 3);
  const auto fp = build_filter_polys(params, 2);
  ASSERT_EQ(fp.f.size(), 4u);
  const PrimeField& f = params.field;
  for (std::size_t a = 0; a < 4; ++a) {
    EXPECT_EQ(fp.f[a].size(), 5u);
    EXPECT_EQ(fp.f[a].back(), 1u);
    for (int i = 0; i < 2; ++i) {
      const int b = 6 * i;
      const bool low = digit_of(a, i) == 0;
      EXPECT_EQ(poly_eval(f, fp.f[a], params.lambda(b + (low ? 0 : 3))), 0u);
      EXPECT_EQ(poly_eval(f, fp.f[a], params.lambda(b + (low ? 4 : 5))), 0u);
      EXPECT_NE(poly_eval(f, fp.f[a], params.lambda(b + 1)), 0u);
      EXPECT_NE(poly_eval(f, fp.f[a], params.lambda(b + 2)), 0u);
    }
  }
}

TEST(FilterF, ShapeAndAnnihilation) {
  const auto params = make_params(9, 3);
  const Matrix F = build_filter_F(params, 2);
  EXPECT_EQ(F.rows(), 8u);
  EXPECT_EQ(F.cols(), 24u);
  EXPECT_THROW(build_filter_F(make_params(9, 4), 2), Case1Only);
}

TEST(FilterQ, MatchesExampleTable) {
  const auto params = make_params(9, 3);
  const auto blocks = build_parity_blocks(params);
  const Matrix q = build_Q(params, blocks, 2);
  ASSERT_EQ(q.rows(), 8u);
  ASSERT_EQ(q.cols(), 8u);
  const auto fp = build_filter_polys(params, 2);
  const PrimeField& f = params.field;
  const std::regex entry(R"((-?)f(\d)\(l(\d+)\))");
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t c = 0; c < 8; ++c) {
      const std::string& s = kFilteredZ2[a][c];
      Symbol scale = 0;
      Symbol lambda = 0;
      std::smatch m;
      if (std::regex_match(s, m, entry)) {
        ASSERT_EQ(static_cast<std::size_t>(std::stoi(m[2])), a);
        lambda = params.lambda(std::stoi(m[3]));
        scale = poly_eval(f, fp.f[a], lambda);
        if (m[1] == "-") scale = f.neg(scale);
      } else {
        ASSERT_EQ(s, "0");
      }
      EXPECT_EQ(q(2 * a, c), scale) << s;
      EXPECT_EQ(q(2 * a + 1, c), f.mul(scale, lambda)) << s;
    }
  }
}

TEST(FilterQ, BlockPatternAndInvertibility) {
  // r = 3 z1 in each case
  const std::vector<std::pair<int, int>> cases{{6, 3}, {9, 3}, {12, 3}};
  for (const auto& [n, k] : cases) {
    const auto params = make_params(n, k);
    const auto blocks = build_parity_blocks(params);
    const int z1 = params.r / 3;
    EXPECT_TRUE(filtered_blocks_match(params, blocks, z1)) << "z1=" << z1;
    const Matrix q = build_Q(params, blocks, z1);
    EXPECT_EQ(q.rows(), (std::size_t{1} << z1) * static_cast<std::size_t>(z1));
    EXPECT_TRUE(q.is_square());
    EXPECT_NE(determinant(params.field, q), 0u) << "z1=" << z1;
  }
}

TEST(FilterQ, DroppedColumnsAreZero) {
  const auto params = make_params(9, 3);
  const auto blocks = build_parity_blocks(params);
  const Matrix fm = multiply(params.field, build_filter_F(params, 2), build_M(params, blocks, {2, 0, 0, 0, 0, 0, 0}));
  std::size_t nonzero = 0;
  for (std::size_t c = 0; c < fm.cols(); ++c) {
    const auto col = fm.column(c);
    if (std::any_of(col.begin(), col.end(), [](Symbol v) { return v != 0; })) ++nonzero;
  }
  EXPECT_EQ(nonzero, 8u);
}

TEST(Case2Filter, KillsItsRoots) {
  for (const auto& [n, k] : std::vector<std::pair<int, int>>{{6, 2}, {9, 4}, {12, 5}}) {
    const auto params = make_params(n, k);
    for (int z = 1; z <= params.groups(); ++z) {
      const Matrix F0 = build_case2_filter(params, z);
      EXPECT_EQ(F0.rows(), static_cast<std::size_t>(params.r - 2));
      const std::size_t u = std::size_t{1} << z;
      const Matrix F = kron_identity(u, F0);
      for (int off : {6 * z - 6, 6 * z - 3}) {
        const auto l = column_L(params.lambda(off), params.r, params.field);
        const Matrix lcol(l.size(), 1, l);
        EXPECT_TRUE(multiply(params.field, F, kron_identity(u, lcol)).is_zero());
      }
      const auto other = column_L(params.lambda(6 * z - 5), params.r, params.field);
      EXPECT_FALSE(multiply(params.field, F0, Matrix(other.size(), 1, other)).is_zero());
    }
  }
}

TEST(Combinations, CountsAndOrder) {
  EXPECT_EQ(combinations(9, 4).size(), 126u);
  EXPECT_EQ(combinations(4, 0).size(), 1u);
  EXPECT_TRUE(combinations(3, 4).empty());
  EXPECT_EQ(combinations(4, 2).front(), (std::vector<int>{0, 1}));
  EXPECT_EQ(combinations(4, 2).back(), (std::vector<int>{2, 3}));
}

TEST(Sweeps, WorkedExampleCounts) {
  const auto params = make_params(9, 5);
  const auto mds = sweep_mds(params);
  EXPECT_EQ(mds.total, 126u);
  EXPECT_TRUE(mds.all_passed());
  const auto rep = sweep_repair(params);
  EXPECT_EQ(rep.total, 252u);
  EXPECT_TRUE(rep.all_passed());
  EXPECT_EQ(rep.lines.front(), "repair 0:1,2,3,4,5,6 pass 24");
  EXPECT_EQ(mds.lines.front(), "mds 0,1,2,3 pass -");
  EXPECT_EQ(sweep_mds(make_params(6, 4)).total, 15u);
}

TEST(Sweeps, GuardRejectsLargeInstances) {
  const auto params = make_params(15, 5);
  EXPECT_THROW(sweep_mds(params), InstanceTooLarge);
  EXPECT_THROW(sweep_repair(params), InstanceTooLarge);
  EXPECT_THROW(sweep_block_determinants(params), InstanceTooLarge);
}

}  // namespace
}  // namespace msr
