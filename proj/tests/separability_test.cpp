#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "sepkit/error.hpp"
#include "sepkit/factorization.hpp"
#include "sepkit/random.hpp"
#include "sepkit/separability.hpp"

using namespace sepkit;

namespace {

const double kR = 1.0 / std::sqrt(2.0);

// Sum of |minor|^2 by direct enumeration of ordered quadruples, counting each
// unordered pair of rows and columns once.
double brute_force_measure(const ComplexMatrix& c) {
  double e = 0.0;
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t a = 0; a < c.rows(); ++a)
      for (std::size_t j = 0; j < c.cols(); ++j)
        for (std::size_t b = 0; b < c.cols(); ++b) {
          if (i >= a || j >= b) continue;
          e += std::norm(c(i, j) * c(a, b) - c(i, b) * c(a, j));
        }
  return e;
}

std::uint64_t enumerate_conditions(std::uint64_t d1, std::uint64_t d2) {
  std::uint64_t n = 0;
  for (std::uint64_t i = 0; i < d1; ++i)
    for (std::uint64_t a = i + 1; a < d1; ++a)
      for (std::uint64_t j = 0; j < d2; ++j)
        for (std::uint64_t b = j + 1; b < d2; ++b) ++n;
  return n;
}

State two_qubit(Complex a, Complex b, Complex c, Complex d) {
  return State::normalized(ComplexVector{a, b, c, d});
}

}  // namespace

TEST(Separability, BellStateIsEntangledWithQuarterMeasure) {
  FactorStructure s({2, 2});
  State bell(ComplexVector{kR, 0.0, 0.0, kR});
  auto v = is_separable(bell, s, first_factor_split(s));
  EXPECT_FALSE(v.separable);
  EXPECT_NEAR(v.measure, 0.25, 1e-15);
  EXPECT_EQ(v.violation_count, 1u);
  ASSERT_TRUE(v.worst_violation.has_value());
  EXPECT_NEAR(v.worst_violation->magnitude, 0.5, 1e-15);
  EXPECT_EQ(v.schmidt_rank, 2u);
  EXPECT_FALSE(v.factors.has_value());
}

TEST(Separability, ComputationalStatesAreSeparable) {
  FactorStructure s({2, 3});
  for (std::size_t k = 0; k < 6; ++k) {
    auto v = is_separable(basis_state(s, k), s, first_factor_split(s));
    EXPECT_TRUE(v.separable);
    EXPECT_EQ(v.measure, 0.0);
    EXPECT_EQ(v.schmidt_rank, 1u);
  }
}

TEST(Separability, WitnessFactorsReproduceState) {
  FactorStructure s({3, 2, 2});
  for (const auto& b : all_bipartitions(s)) {
    State st = random_separable_state(s, b, 77);
    auto v = is_separable(st, s, b);
    ASSERT_TRUE(v.separable) << b.to_string();
    ASSERT_TRUE(v.factors.has_value());
    const auto& [psi, phi] = *v.factors;
    EXPECT_NEAR(psi.norm(), 1.0, 1e-12);
    ComplexVector back = product_amplitudes(psi, phi, s, b);
    back -= st.amplitudes();
    EXPECT_LT(back.norm(), 1e-12);
    // Largest-magnitude amplitude of psi is real positive.
    std::size_t arg = 0;
    for (std::size_t k = 1; k < psi.dim(); ++k)
      if (std::abs(psi[k]) > std::abs(psi[arg])) arg = k;
    EXPECT_EQ(psi[arg].imag(), 0.0);
    EXPECT_GT(psi[arg].real(), 0.0);
  }
}

TEST(Separability, TwoQubitDeterminantCriterion) {
  Rng rng(5);
  std::normal_distribution<double> g;
  for (int n = 0; n < 500; ++n) {
    Complex a{g(rng), g(rng)}, b{g(rng), g(rng)}, c{g(rng), g(rng)}, d{g(rng), g(rng)};
    if (n % 2 == 0) d = b * c / a;  // force a product state
    State st = two_qubit(a, b, c, d);
    FactorStructure s({2, 2});
    auto v = is_separable(st, s, first_factor_split(s));
    Complex det = st[0] * st[3] - st[1] * st[2];
    EXPECT_EQ(v.separable, std::abs(det) <= 1e-9);
    EXPECT_NEAR(v.measure, std::norm(det), 1e-15);
  }
}

TEST(Separability, MeasureMatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    FactorStructure s({3, 2, 2});
    for (const auto& b : all_bipartitions(s)) {
      auto c = coefficient_matrix(random_state(s, seed), s, b);
      EXPECT_NEAR(entanglement_measure(c), brute_force_measure(c.matrix), 1e-14);
    }
  }
}

TEST(Separability, ViolationsListEveryLargeMinor) {
  FactorStructure s({3, 3});
  auto c = coefficient_matrix(random_state(s, 8), s, first_factor_split(s));
  auto all = microsingularity_violations(c, 0.0);
  EXPECT_EQ(all.size(), condition_count(3, 3));
  for (const auto& m : all) {
    EXPECT_LT(m.i, m.a);
    EXPECT_LT(m.j, m.b);
    const auto& C = c.matrix;
    EXPECT_NEAR(m.magnitude, std::abs(C(m.i, m.j) * C(m.a, m.b) - C(m.i, m.b) * C(m.a, m.j)), 1e-15);
  }
  auto few = microsingularity_violations(c, 1.0);
  EXPECT_TRUE(few.empty());
}

TEST(Separability, SplitDependence) {
  // (|00> + |11>)/sqrt2 (x) |+>: separable across {0,1}|{2}, entangled across {0}|{1,2}.
  FactorStructure s({2, 2, 2});
  ComplexVector amps(8);
  amps[0] = amps[1] = amps[6] = amps[7] = 0.5;
  State st(amps);
  EXPECT_TRUE(is_separable(st, s, Bipartition::parse("0,1/2", s)).separable);
  EXPECT_FALSE(is_separable(st, s, Bipartition::parse("0/1,2", s)).separable);
  EXPECT_FALSE(is_separable(st, s, Bipartition::parse("1/0,2", s)).separable);
}

TEST(Separability, SingleRowMatrixIsSeparable) {
  ComplexMatrix row{{1.0, 2.0, 3.0}};
  EXPECT_TRUE(microsingularity_violations(row, 1e-9).empty());
  EXPECT_EQ(entanglement_measure(row), 0.0);
}

TEST(ConditionCount, MatchesEnumeration) {
  for (std::uint64_t d1 = 1; d1 <= 6; ++d1)
    for (std::uint64_t d2 = 1; d2 <= 6; ++d2)
      EXPECT_EQ(condition_count(d1, d2), enumerate_conditions(d1, d2)) << d1 << "," << d2;
  EXPECT_EQ(condition_count(2, 2), 1u);
}

TEST(ConditionCount, OverflowThrows) {
  EXPECT_THROW(condition_count(std::uint64_t{1} << 32, std::uint64_t{1} << 32), InvalidInput);
}

TEST(ConditionCount, Log2AgreesWithExactForSmallDims) {
  for (std::uint64_t d1 = 2; d1 <= 20; ++d1)
    for (std::uint64_t d2 = 2; d2 <= 20; ++d2) {
      double exact = std::log2(static_cast<double>(condition_count(d1, d2)));
      EXPECT_NEAR(condition_count_log2(std::log2(double(d1)), std::log2(double(d2))), exact, 1e-12);
    }
}

TEST(ConditionCount, Log2HugeExponents) {
  // log2 N_C ~ 2 (x1 + x2) - 2 when both dimensions are enormous.
  double l = condition_count_log2(1e180, 1e180);
  EXPECT_DOUBLE_EQ(l, 4e180);
  EXPECT_NEAR(condition_count_log2(60, 60), 238.0, 1e-9);
  EXPECT_EQ(condition_count_log2(0.0, 5.0), -std::numeric_limits<double>::infinity());
}

TEST(LocalUnitary, PreservesLabelsAndSchmidtCoefficients) {
  FactorStructure s({2, 3});
  Bipartition b = first_factor_split(s);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    State st = seed % 2 ? random_state(s, seed) : random_separable_state(s, b, seed);
    State moved = apply_local_unitary(st, random_unitary(2, seed + 100), random_unitary(3, seed + 200), s, b);
    auto v0 = is_separable(st, s, b);
    auto v1 = is_separable(moved, s, b);
    EXPECT_EQ(v0.separable, v1.separable);
    EXPECT_EQ(v0.schmidt_rank, v1.schmidt_rank);
    for (std::size_t k = 0; k < v0.schmidt_coefficients.size(); ++k)
      EXPECT_NEAR(v0.schmidt_coefficients[k], v1.schmidt_coefficients[k], 1e-12);
  }
}

TEST(LocalUnitary, RejectsBadInputs) {
  FactorStructure s({2, 2});
  Bipartition b = first_factor_split(s);
  State st = basis_state(s, 0);
  ComplexMatrix not_unitary{{1.0, 1.0}, {0.0, 1.0}};
  EXPECT_THROW(apply_local_unitary(st, not_unitary, ComplexMatrix::identity(2), s, b), NotUnitary);
  EXPECT_THROW(apply_local_unitary(st, ComplexMatrix::identity(3), ComplexMatrix::identity(2), s, b),
               DimensionMismatch);
}

TEST(Separability, SchmidtCoefficientsSquaresSumToOne) {
  FactorStructure s({3, 3});
  auto v = is_separable(random_state(s, 4), s, first_factor_split(s));
  double sum = 0.0;
  for (double x : v.schmidt_coefficients) sum += x * x;
  EXPECT_NEAR(sum, 1.0, 1e-13);
  EXPECT_EQ(v.schmidt_rank, 3u);
}
