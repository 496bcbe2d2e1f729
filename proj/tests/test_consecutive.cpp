#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "cyclicflag/classical_code.hpp"
#include "cyclicflag/consecutive.hpp"
#include "cyclicflag/css_code.hpp"

using namespace cyclicflag;

namespace {

CssCode cyclic_css(const char* h, std::size_t n) {
  const auto c = ClassicalCode::from_check_polynomial(BinaryPolynomial::parse(h), n);
  return build_css(c, c);
}

// quadratic pairwise comparison, independent of the hashing oracle
bool pairwise_distinct(const CssCode& code, const ConsecutiveSet& set) {
  std::vector<Bits> keys;
  for (const auto& e : set.elements) keys.push_back(code.syndrome(e).key());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    for (std::size_t j = i + 1; j < keys.size(); ++j) {
      if (keys[i] == keys[j]) return false;
    }
  }
  return true;
}

std::vector<std::pair<BinaryPolynomial, std::size_t>> cyclic_family(std::size_t max_n) {
  std::vector<std::pair<BinaryPolynomial, std::size_t>> out;
  for (std::size_t n = 3; n <= max_n; ++n) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); mask += 2) {
      std::vector<std::size_t> e;
      for (std::size_t j = 0; j < n; ++j) {
        if (mask >> j & 1) e.push_back(j);
      }
      const auto p = BinaryPolynomial::from_exponents(e);
      if (p.degree() >= 1 && divides_x_pow_minus_one(p, n)) out.emplace_back(p, n);
    }
  }
  return out;
}

}  // namespace

TEST(ConsecutiveSet, ElementsAreShiftedSuffixBlocks) {
  // I^{n-p} Z^p shifted left by l
  EXPECT_EQ(consecutive_element(PauliKind::Z, 0, 0, 5).to_dense(), "IIIII");
  EXPECT_EQ(consecutive_element(PauliKind::Z, 2, 0, 5).to_dense(), "IIIZZ");
  EXPECT_EQ(consecutive_element(PauliKind::X, 3, 1, 5).to_dense(), "IXXXI");
  EXPECT_EQ(consecutive_element(PauliKind::Z, 2, 4, 5).to_dense(), "ZIIIZ");
  EXPECT_THROW(consecutive_element(PauliKind::Z, 5, 0, 5), std::out_of_range);
}

TEST(ConsecutiveSet, SizesAndOrder) {
  const auto z = consecutive_set(ConsecutiveKind::Z, 2, 7);
  EXPECT_EQ(z.elements.size(), 7u);
  const auto p = consecutive_set(ConsecutiveKind::Product, 2, 7);
  ASSERT_EQ(p.elements.size(), 49u);
  // x index outer, z index inner
  EXPECT_EQ(p.elements[1 * 7 + 3], consecutive_element(PauliKind::X, 1, 2, 7) * consecutive_element(PauliKind::Z, 3, 2, 7));
  EXPECT_THROW(consecutive_set(ConsecutiveKind::Z, 7, 7), std::out_of_range);
}

TEST(Distinguishability, OracleWitnessIsFirstCollision) {
  // Hx = 1100: Z4 and I look alike
  const auto code = CssCode::from_matrices(BitMatrix::from_strings({"1100"}), BitMatrix(0, 4));
  const auto rep = distinguishable_oracle(code, consecutive_set(ConsecutiveKind::Z, 0, 4));
  ASSERT_FALSE(rep.verdict);
  EXPECT_EQ(rep.witness->first.to_dense(), "IIII");
  EXPECT_EQ(rep.witness->second.to_dense(), "IIIZ");
  const auto l1 = lemma1_check_z(code.hx());
  ASSERT_FALSE(l1.verdict);
  EXPECT_EQ(l1.witness->first.to_dense(), "IIII");
  EXPECT_EQ(l1.witness->second.to_dense(), "IIIZ");
}

TEST(LemmaProperty, Lemma1AgreesWithOracleOnRandomMatrices) {
  std::mt19937_64 rng(4);
  int disagreements = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 2 + rng() % 9;
    const std::size_t r = 1 + rng() % 5;
    BitMatrix h(0, n);
    for (std::size_t i = 0; i < r; ++i) {
      Bits row(n);
      for (std::size_t j = 1; j <= n; ++j) row.set(j, rng() & 1);
      h.append_row(row);
    }
    const auto as_x = CssCode::from_matrices(h, BitMatrix(0, n));
    const auto as_z = CssCode::from_matrices(BitMatrix(0, n), h);
    const bool oz = pairwise_distinct(as_x, consecutive_set(ConsecutiveKind::Z, 0, n));
    const bool ox = pairwise_distinct(as_z, consecutive_set(ConsecutiveKind::X, 0, n));
    EXPECT_EQ(distinguishable_oracle(as_x, consecutive_set(ConsecutiveKind::Z, 0, n)).verdict, oz);
    if (lemma1_check_z(h).verdict != oz) ++disagreements;
    if (lemma1_check_x(h).verdict != ox) ++disagreements;
  }
  EXPECT_EQ(disagreements, 0);
}

TEST(LemmaProperty, Lemma3MatchesLemma1AndEveryShiftOnCyclicCodes) {
  const auto family = cyclic_family(12);
  ASSERT_GE(family.size(), 50u);
  for (const auto& [h, n] : family) {
    const auto hx = check_matrix_from_h(h, n);
    const auto code = CssCode::from_matrices(hx, BitMatrix(0, n));
    const bool l3 = lemma3_check(hx).verdict;
    EXPECT_EQ(l3, lemma1_check_z(hx).verdict) << h.to_string() << " n=" << n;
    for (std::size_t l = 0; l < n; ++l) {
      EXPECT_EQ(l3, pairwise_distinct(code, consecutive_set(ConsecutiveKind::Z, l, n)))
          << h.to_string() << " n=" << n << " l=" << l;
    }
  }
}

TEST(Lemma3, RejectsNonCyclicMatrix) {
  EXPECT_THROW(lemma3_check(BitMatrix::from_strings({"1100", "0010"})), std::invalid_argument);
}

TEST(Theorem2, BothFixtureCodesPassEveryShift) {
  for (auto [h, n] : {std::pair{"0,2,3,4", std::size_t{7}}, std::pair{"0,2,4,6,10,14,16,22", std::size_t{30}}}) {
    const auto code = cyclic_css(h, n);
    const auto rep = theorem2_check(code);
    EXPECT_EQ(rep.shifts.size(), n);
    EXPECT_TRUE(rep.all_pass());
    EXPECT_TRUE(rep.failing_shifts().empty());
  }
}

TEST(Theorem2, ProductSetHasNSquaredDistinctSyndromesOnCode30) {
  const auto code = cyclic_css("0,2,4,6,10,14,16,22", 30);
  for (std::size_t l : {0u, 13u, 29u}) {
    const auto set = consecutive_set(ConsecutiveKind::Product, l, 30);
    EXPECT_EQ(set.elements.size(), 900u);
    EXPECT_TRUE(pairwise_distinct(code, set));
  }
}

TEST(FindBySyndrome, ReturnsMatchingElement) {
  const auto code = cyclic_css("0,2,3,4", 7);
  const auto set = consecutive_set(ConsecutiveKind::Z, 3, 7);
  for (const auto& e : set.elements) {
    const auto got = find_by_syndrome(code, set, code.syndrome(e).key());
    ASSERT_TRUE(got.has_value());
    EXPECT_EQ(*got, e);
  }
}
