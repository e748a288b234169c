#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sepkit/factorization.hpp"
#include "sepkit/linalg.hpp"

namespace sepkit {

inline constexpr double kDefaultSeparabilityTol = 1e-9;

// A 2x2 minor C_ij C_ab - C_ib C_aj with i < a, j < b.
struct MinorViolation {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t a = 0;
  std::size_t b = 0;
  double magnitude = 0.0;

  bool operator==(const MinorViolation&) const = default;
};

struct SeparabilityVerdict {
  bool separable = false;
  // Sum of squared 2x2 minor magnitudes.
  double measure = 0.0;
  std::size_t violation_count = 0;
  std::optional<MinorViolation> worst_violation;
  std::size_t schmidt_rank = 0;
  std::vector<double> schmidt_coefficients;
  // Set when separable: psi has unit norm with its largest-magnitude
  // amplitude real positive; phi carries the remaining norm and phase.
  std::optional<std::pair<ComplexVector, ComplexVector>> factors;

  bool operator==(const SeparabilityVerdict&) const = default;
};

// Every minor with magnitude above tol, ordered by (i, a, j, b).
std::vector<MinorViolation> microsingularity_violations(const CoefficientMatrix& c, double tol);
std::vector<MinorViolation> microsingularity_violations(const ComplexMatrix& c, double tol);

// E = sum over i<a, j<b of |C_ij C_ab - C_ib C_aj|^2.
double entanglement_measure(const CoefficientMatrix& c);
double entanglement_measure(const ComplexMatrix& c);

// Decides separability three ways (minor scan at tol, E <= tol^2, and SVD
// rank with threshold tol * sigma_max) and throws CriteriaDisagreement if
// they do not agree.
SeparabilityVerdict is_separable(const State& state, const FactorStructure& structure,
                                 const Bipartition& bipartition,
                                 double tol = kDefaultSeparabilityTol);
SeparabilityVerdict is_separable(const CoefficientMatrix& c, double tol = kDefaultSeparabilityTol);

// N_C = d1 (d1 - 1) d2 (d2 - 1) / 4. Throws InvalidInput on overflow.
std::uint64_t condition_count(std::uint64_t d1, std::uint64_t d2);

// log2 N_C from log2 d1 and log2 d2; -infinity when either dimension is 1.
double condition_count_log2(double d1_log2, double d2_log2);

inline constexpr double kUnitarityTol = 1e-10;

// Maps the coefficient matrix C to u_left * C * u_right^T.
State apply_local_unitary(const State& state, const ComplexMatrix& u_left,
                          const ComplexMatrix& u_right, const FactorStructure& structure,
                          const Bipartition& bipartition);

}  // namespace sepkit
