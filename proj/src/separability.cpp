#include "sepkit/separability.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sepkit/error.hpp"

namespace sepkit {

namespace {

Complex minor(const ComplexMatrix& c, std::size_t i, std::size_t j, std::size_t a, std::size_t b) {
  return c(i, j) * c(a, b) - c(i, b) * c(a, j);
}

std::uint64_t pairs(std::uint64_t d) { return d < 2 ? 0 : (d % 2 == 0 ? (d / 2) * (d - 1) : d * ((d - 1) / 2)); }

}  // namespace

std::vector<MinorViolation> microsingularity_violations(const ComplexMatrix& c, double tol) {
  std::vector<MinorViolation> out;
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t a = i + 1; a < c.rows(); ++a)
      for (std::size_t j = 0; j < c.cols(); ++j)
        for (std::size_t b = j + 1; b < c.cols(); ++b) {
          const double mag = std::abs(minor(c, i, j, a, b));
          if (mag > tol) out.push_back({i, j, a, b, mag});
        }
  return out;
}

std::vector<MinorViolation> microsingularity_violations(const CoefficientMatrix& c, double tol) {
  return microsingularity_violations(c.matrix, tol);
}

double entanglement_measure(const ComplexMatrix& c) {
  double sum = 0.0;
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t a = i + 1; a < c.rows(); ++a)
      for (std::size_t j = 0; j < c.cols(); ++j)
        for (std::size_t b = j + 1; b < c.cols(); ++b) sum += std::norm(minor(c, i, j, a, b));
  return sum;
}

double entanglement_measure(const CoefficientMatrix& c) { return entanglement_measure(c.matrix); }

SeparabilityVerdict is_separable(const CoefficientMatrix& c, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("tol must be positive");
  SeparabilityVerdict verdict;

  const auto violations = microsingularity_violations(c.matrix, tol);
  verdict.violation_count = violations.size();
  for (const auto& v : violations)
    if (!verdict.worst_violation || v.magnitude > verdict.worst_violation->magnitude)
      verdict.worst_violation = v;
  const bool by_minors = violations.empty();

  verdict.measure = entanglement_measure(c.matrix);
  const bool by_measure = verdict.measure <= tol * tol;

  const SvdResult s = svd(c.matrix);
  verdict.schmidt_coefficients = s.singular_values;
  verdict.schmidt_rank = s.rank(tol);
  const bool by_rank = verdict.schmidt_rank == 1;

  if (by_minors != by_rank || by_minors != by_measure) {
    throw CriteriaDisagreement(
        "separability criteria disagree at tol " + std::to_string(tol) + ": minors say " +
        (by_minors ? "separable" : "entangled") + ", measure " + std::to_string(verdict.measure) +
        " says " + (by_measure ? "separable" : "entangled") + ", Schmidt rank " +
        std::to_string(verdict.schmidt_rank));
  }
  verdict.separable = by_minors;

  if (verdict.separable) {
    ComplexVector psi = s.left_vectors.column(0);
    const Complex phase = canonical_phase(psi);
    fix_phase(psi);
    ComplexVector phi = s.right_vectors.column(0);
    for (auto& z : phi) z = std::conj(z) * s.singular_values.front() * std::conj(phase);
    verdict.factors.emplace(std::move(psi), std::move(phi));
  }
  return verdict;
}

SeparabilityVerdict is_separable(const State& state, const FactorStructure& structure,
                                 const Bipartition& bipartition, double tol) {
  return is_separable(coefficient_matrix(state, structure, bipartition), tol);
}

std::uint64_t condition_count(std::uint64_t d1, std::uint64_t d2) {
  const std::uint64_t p1 = pairs(d1);
  const std::uint64_t p2 = pairs(d2);
  if (p1 != 0 && p2 > std::numeric_limits<std::uint64_t>::max() / p1) {
    throw InvalidInput("condition_count: result overflows 64 bits; use the log2 form");
  }
  return p1 * p2;
}

double condition_count_log2(double d1_log2, double d2_log2) {
  if (!(d1_log2 >= 0.0) || !(d2_log2 >= 0.0)) {
    throw InvalidInput("condition_count_log2: exponents must be non-negative");
  }
  // log2(d - 1) = log2 d + log2(1 - 2^-log2 d)
  auto log2_pred = [](double x) { return x + std::log1p(-std::exp2(-x)) / std::log(2.0); };
  if (d1_log2 == 0.0 || d2_log2 == 0.0) return -std::numeric_limits<double>::infinity();
  return d1_log2 + log2_pred(d1_log2) + d2_log2 + log2_pred(d2_log2) - 2.0;
}

State apply_local_unitary(const State& state, const ComplexMatrix& u_left,
                          const ComplexMatrix& u_right, const FactorStructure& structure,
                          const Bipartition& bipartition) {
  if (u_left.rows() != bipartition.d_left() || u_left.cols() != bipartition.d_left() ||
      u_right.rows() != bipartition.d_right() || u_right.cols() != bipartition.d_right()) {
    throw DimensionMismatch("apply_local_unitary: unitary shapes do not match the bipartition");
  }
  if (unitarity_deviation(u_left) > kUnitarityTol) throw NotUnitary("apply_local_unitary: u_left is not unitary");
  if (unitarity_deviation(u_right) > kUnitarityTol) throw NotUnitary("apply_local_unitary: u_right is not unitary");
  CoefficientMatrix c = coefficient_matrix(state, structure, bipartition);
  c.matrix = u_left * c.matrix * u_right.transpose();
  return State(flatten_amplitudes(c));
}

}  // namespace sepkit
