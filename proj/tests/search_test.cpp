#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "sepkit/error.hpp"
#include "sepkit/nelder_mead.hpp"
#include "sepkit/random.hpp"
#include "sepkit/search.hpp"

using namespace sepkit;

namespace {

const FactorStructure kTwoQubits({2, 2});

Bipartition split() { return first_factor_split(kTwoQubits); }

// Minimum over every choice of which q elements count as separable.
double exhaustive_residual(const std::vector<double>& m, const BasisType& t, double tau) {
  const std::size_t d = m.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != t.q) continue;
    double r = 0.0;
    for (std::size_t k = 0; k < d; ++k) r += (mask >> k & 1) ? m[k] : std::max(0.0, tau - m[k]);
    best = std::min(best, r);
  }
  return best;
}

SearchConfig config_for(BasisType target, std::size_t restarts, std::uint64_t seed) {
  SearchConfig c;
  c.target = target;
  c.restarts = restarts;
  c.master_seed = seed;
  c.threads = 1;
  return c;
}

}  // namespace

TEST(Parametrization, CountAndLayout) {
  EXPECT_EQ(parameter_count(4), 16u);
  // d = 3: 3 diagonal, 3 real upper, 3 imaginary upper.
  std::vector<double> theta{1, 2, 3, 4, 5, 6, 7, 8, 9};
  ComplexMatrix h = hermitian_from_parameters(theta, 3);
  EXPECT_EQ(h(0, 0), Complex(1));
  EXPECT_EQ(h(2, 2), Complex(3));
  EXPECT_EQ(h(0, 1), Complex(4, 7));
  EXPECT_EQ(h(0, 2), Complex(5, 8));
  EXPECT_EQ(h(1, 2), Complex(6, 9));
  EXPECT_EQ(h(1, 0), Complex(4, -7));
  EXPECT_EQ(hermiticity_deviation(h), 0.0);
  std::vector<double> wrong(8);
  EXPECT_THROW(hermitian_from_parameters(wrong, 3), DimensionMismatch);
}

TEST(Parametrization, ZeroIsIdentity) {
  std::vector<double> theta(16, 0.0);
  EXPECT_LT((unitary_from_parameters(theta, 4) - ComplexMatrix::identity(4)).max_abs(), 1e-15);
}

TEST(Parametrization, UnitaryForRandomParameters) {
  Rng rng(3);
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  for (std::size_t d : {2u, 4u, 6u}) {
    std::vector<double> theta(d * d);
    for (auto& t : theta) t = u(rng);
    EXPECT_LT(unitarity_deviation(unitary_from_parameters(theta, d)), 1e-12);
  }
}

TEST(Parametrization, LogarithmRoundTrips) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ComplexMatrix u = random_unitary(4, seed);
    std::vector<double> theta = parameters_from_unitary(u);
    EXPECT_LT((unitary_from_parameters(theta, 4) - u).max_abs(), 1e-10) << seed;
  }
  // Degenerate spectrum and phases at the branch cut.
  ComplexMatrix minus_identity = Complex(-1.0) * ComplexMatrix::identity(4);
  auto theta = parameters_from_unitary(minus_identity);
  EXPECT_LT((unitary_from_parameters(theta, 4) - minus_identity).max_abs(), 1e-10);
  auto bell = canonical_basis(CanonicalBasis::kBell, kTwoQubits).as_matrix();
  auto from_log = basis_from_parameters(parameters_from_unitary(bell), kTwoQubits);
  EXPECT_EQ(classify_basis(from_log, split()).type, (BasisType{4, 0}));
  auto b31 = canonical_basis(CanonicalBasis::kB31, kTwoQubits).as_matrix();
  EXPECT_LT((unitary_from_parameters(parameters_from_unitary(b31), 4) - b31).max_abs(), 1e-10);
}

TEST(Residual, SortedAssignmentMatchesExhaustiveEnumeration) {
  Rng rng(9);
  std::uniform_real_distribution<double> m01(0.0, 0.03);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = 2 + trial % 5;
    std::vector<double> m(d);
    for (auto& x : m) x = m01(rng);
    for (std::size_t p = 0; p <= d; ++p) {
      BasisType t{p, d - p};
      EXPECT_NEAR(residual_from_measures(m, t, 0.01), exhaustive_residual(m, t, 0.01), 1e-15);
    }
  }
}

TEST(Residual, ZeroOnCanonicalBases) {
  EXPECT_EQ(residual(canonical_basis(CanonicalBasis::kComputational, kTwoQubits), {0, 4}, split(), 0.01), 0.0);
  EXPECT_EQ(residual(canonical_basis(CanonicalBasis::kB22, kTwoQubits), {2, 2}, split(), 0.01), 0.0);
  EXPECT_EQ(residual(canonical_basis(CanonicalBasis::kB31, kTwoQubits), {3, 1}, split(), 0.01), 0.0);
  EXPECT_EQ(residual(canonical_basis(CanonicalBasis::kBell, kTwoQubits), {4, 0}, split(), 0.01), 0.0);
  // Computational basis against (4,0): every element misses tau entirely.
  EXPECT_NEAR(residual(canonical_basis(CanonicalBasis::kComputational, kTwoQubits), {4, 0}, split(), 0.01), 0.04,
              1e-15);
}

TEST(Residual, AssignmentOptimalOnRandomBases) {
  // tau at the median measure so the hinge is active on some elements.
  const FactorStructure structures[] = {kTwoQubits, FactorStructure({3, 2})};
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const FactorStructure& s = structures[seed % 2];
    const std::size_t d = s.total_dim();
    ComplexMatrix u = random_unitary(d, seed);
    if (seed % 3 == 0) u = ComplexMatrix::identity(d);
    if (seed % 3 == 1) {
      // Identity on the first half, a random unitary on the second half.
      ComplexMatrix w = random_unitary(d - d / 2, seed);
      u = ComplexMatrix::identity(d);
      for (std::size_t i = d / 2; i < d; ++i)
        for (std::size_t j = d / 2; j < d; ++j) u(i, j) = w(i - d / 2, j - d / 2);
    }
    auto basis = OrthonormalBasis::from_unitary(s, u);
    std::vector<double> m;
    for (const auto& e : basis.vectors())
      m.push_back(entanglement_measure(coefficient_matrix(e, s, first_factor_split(s))));
    std::vector<double> sorted = m;
    std::sort(sorted.begin(), sorted.end());
    const double tau = sorted[d / 2] + 1e-3;
    for (std::size_t p = 0; p <= d; ++p) {
      BasisType t{p, d - p};
      EXPECT_DOUBLE_EQ(residual(basis, t, first_factor_split(s), tau), exhaustive_residual(m, t, tau));
    }
  }
}

TEST(Residual, SizeMismatch) {
  std::vector<double> m{0.0, 0.0, 0.0};
  EXPECT_THROW(residual_from_measures(m, {1, 3}, 0.01), InvalidInput);
}

TEST(NelderMead, MinimizesRosenbrock) {
  Objective f = [](std::span<const double> x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
  };
  NelderMeadOptions o;
  o.f_rel_tol = 0.0;
  auto r = nelder_mead(f, {-1.2, 1.0}, o);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-6);
  EXPECT_NEAR(r.x[1], 1.0, 1e-6);
}

TEST(NelderMead, StopsAtTarget) {
  Objective f = [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; };
  NelderMeadOptions o;
  o.target_value = 1e-3;
  auto r = nelder_mead(f, {3.0, 4.0}, o);
  EXPECT_LE(r.value, 1e-3);
  EXPECT_TRUE(r.converged);
}

TEST(NelderMead, IterationCap) {
  Objective f = [](std::span<const double> x) { return std::abs(x[0] - 1e6); };
  NelderMeadOptions o;
  o.max_iterations = 10;
  auto r = nelder_mead(f, {0.0}, o);
  EXPECT_EQ(r.iterations, 10u);
  EXPECT_FALSE(r.converged);
}

TEST(NelderMead, NaNTreatedAsWorst) {
  Objective f = [](std::span<const double> x) { return x[0] < 0 ? std::nan("") : (x[0] - 2) * (x[0] - 2); };
  auto r = nelder_mead(f, {0.5});
  EXPECT_NEAR(r.x[0], 2.0, 1e-5);
}

TEST(Search, ConfigValidation) {
  EXPECT_THROW(search_basis_type(kTwoQubits, split(), config_for({1, 2}, 1, 0)), InvalidInput);
  EXPECT_THROW(search_basis_type(kTwoQubits, split(), config_for({1, 3}, 0, 0)), InvalidInput);
  auto c = config_for({1, 3}, 1, 0);
  c.tau = 1e-9;
  EXPECT_THROW(search_basis_type(kTwoQubits, split(), c), InvalidInput);
}

TEST(Search, FindsFeasibleTypesWithVerifiedClassification) {
  for (BasisType t : {BasisType{0, 4}, BasisType{2, 2}, BasisType{3, 1}, BasisType{4, 0}}) {
    SearchResult r = search_basis_type(kTwoQubits, split(), config_for(t, 20, 7));
    ASSERT_EQ(r.status, SearchStatus::kFound) << t.to_string();
    EXPECT_LE(r.best_residual, 1e-8);
    // The returned basis classifies as the target at the default tolerance.
    EXPECT_EQ(classify_basis(r.best_basis, split()).type, t);
    EXPECT_LT(unitarity_deviation(r.best_basis.as_matrix()), 1e-12);
    auto c = classify_basis(r.best_basis, split());
    for (std::size_t k = 0; k < 4; ++k)
      if (!c.separable[k]) EXPECT_GE(c.measures[k], 0.01 - 1e-8);
  }
}

TEST(Search, ProductBasisOnQutritQubit) {
  FactorStructure s({3, 2});
  SearchResult r = search_basis_type(s, first_factor_split(s), config_for({0, 6}, 20, 1));
  ASSERT_EQ(r.status, SearchStatus::kFound);
  EXPECT_EQ(classify_basis(r.best_basis, first_factor_split(s)).type, (BasisType{0, 6}));
}

TEST(Search, SingleEntangledTypeHasPositiveFloor) {
  SearchResult r = search_basis_type(kTwoQubits, split(), config_for({1, 3}, 10, 3));
  EXPECT_EQ(r.status, SearchStatus::kNotFound);
  EXPECT_GT(r.best_residual, 1e-3);
  EXPECT_EQ(r.per_restart_residuals.size(), 10u);
  EXPECT_EQ(r.seed_trace.restart_seeds.size(), 10u);
  EXPECT_EQ(*std::min_element(r.per_restart_residuals.begin(), r.per_restart_residuals.end()), r.best_residual);
  EXPECT_TRUE(verify_orthonormal(r.best_basis, 1e-9).orthonormal);
}

TEST(Search, SameSeedSameResult) {
  auto c = config_for({1, 3}, 4, 11);
  EXPECT_EQ(search_basis_type(kTwoQubits, split(), c), search_basis_type(kTwoQubits, split(), c));
}

TEST(Search, ParallelMatchesSerial) {
  for (BasisType t : {BasisType{1, 3}, BasisType{2, 2}}) {
    auto serial = config_for(t, 8, 5);
    auto parallel = serial;
    parallel.threads = 4;
    EXPECT_EQ(search_basis_type(kTwoQubits, split(), serial), search_basis_type(kTwoQubits, split(), parallel));
  }
}

TEST(Search, SeedTraceIsDerived) {
  SearchResult r = search_basis_type(kTwoQubits, split(), config_for({1, 3}, 3, 42));
  EXPECT_EQ(r.seed_trace.master_seed, 42u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(r.seed_trace.restart_seeds[i], restart_seed(42, i));
}

TEST(Search, StopAtFirstFoundTruncates) {
  auto c = config_for({2, 2}, 20, 7);
  SearchResult r = search_basis_type(kTwoQubits, split(), c);
  EXPECT_EQ(r.per_restart_residuals.size(), r.best_restart + 1);
  c.stop_at_first_found = false;
  c.restarts = 3;
  EXPECT_EQ(search_basis_type(kTwoQubits, split(), c).per_restart_residuals.size(), 3u);
}

TEST(Search, NonContiguousSplit) {
  FactorStructure s({2, 2, 2});
  Bipartition b = Bipartition::parse("0,2/1", s);
  auto c = config_for({0, 8}, 10, 1);
  SearchResult r = search_basis_type(s, b, c);
  ASSERT_EQ(r.status, SearchStatus::kFound);
  EXPECT_EQ(classify_basis(r.best_basis, b).type, (BasisType{0, 8}));
}

TEST(Conjecture, SweepsEveryType) {
  auto c = config_for({0, 4}, 3, 2);
  ConjectureReport rep = conjecture_report(kTwoQubits, split(), c);
  ASSERT_EQ(rep.rows.size(), 5u);
  for (std::size_t p = 0; p <= 4; ++p) EXPECT_EQ(rep.rows[p].target, (BasisType{p, 4 - p}));
  EXPECT_TRUE(rep.rows[1].single_entangled);
  EXPECT_TRUE(rep.rows[1].conjectured_infeasible);
  EXPECT_EQ(rep.rows[1].status, SearchStatus::kNotFound);
  for (std::size_t p : {0u, 2u, 3u, 4u}) {
    EXPECT_EQ(rep.rows[p].status, SearchStatus::kFound) << p;
    EXPECT_FALSE(rep.rows[p].conjectured_infeasible);
  }
}

TEST(Conjecture, DimensionCap) {
  FactorStructure big({3, 3, 2});
  EXPECT_THROW(conjecture_report(big, first_factor_split(big), config_for({0, 18}, 1, 0)), InvalidInput);
}
