#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sepkit/factorization.hpp"
#include "sepkit/linalg.hpp"
#include "sepkit/separability.hpp"

namespace sepkit {

// d unit vectors over a factor structure. Construction checks shape only;
// orthonormality is checked by verify_orthonormal and by the classifiers.
class OrthonormalBasis {
 public:
  OrthonormalBasis(FactorStructure structure, std::vector<State> vectors);

  // Columns of a d x d unitary.
  static OrthonormalBasis from_unitary(FactorStructure structure, const ComplexMatrix& u);

  const FactorStructure& structure() const { return structure_; }
  const std::vector<State>& vectors() const { return vectors_; }
  std::size_t size() const { return vectors_.size(); }
  const State& operator[](std::size_t i) const { return vectors_[i]; }

  ComplexMatrix as_matrix() const;

  bool operator==(const OrthonormalBasis&) const = default;

 private:
  FactorStructure structure_;
  std::vector<State> vectors_;
};

// (p, q): p entangled elements, q separable elements.
struct BasisType {
  std::size_t p = 0;
  std::size_t q = 0;

  std::size_t total() const { return p + q; }
  std::string to_string() const;
  bool operator==(const BasisType&) const = default;
};

// Parses "P,Q".
BasisType parse_basis_type(std::string_view text);

struct BasisClassification {
  BasisType type;
  // Per element, in basis order.
  std::vector<bool> separable;
  std::vector<double> measures;

  bool operator==(const BasisClassification&) const = default;
};

struct OrthonormalityCheck {
  bool orthonormal = false;
  // max_ij |<v_i, v_j> - delta_ij|
  double max_deviation = 0.0;
};

OrthonormalityCheck verify_orthonormal(std::span<const ComplexVector> vectors, double tol);
OrthonormalityCheck verify_orthonormal(const OrthonormalBasis& basis, double tol);

// Labels each element with is_separable at tol. Throws NotOrthonormal when
// the Gram matrix deviates from the identity by more than tol.
BasisClassification classify_basis(const OrthonormalBasis& basis, const Bipartition& bipartition,
                                   double tol = kDefaultSeparabilityTol);

enum class CanonicalBasis { kComputational, kBell, kB22, kB31 };

CanonicalBasis parse_canonical_basis(std::string_view name);
std::string_view to_string(CanonicalBasis kind);

// The two-qubit bases of type (0,4), (4,0), (2,2) and (3,1). Any structure
// supports kComputational (the product basis in flat-index order); the
// others require dims [2,2].
OrthonormalBasis canonical_basis(CanonicalBasis kind, const FactorStructure& structure);

struct TripleCompletion {
  State fourth;
  SeparabilityVerdict verdict;
};

// Completes three orthonormal separable two-qubit vectors to a basis. The
// fourth vector spans the orthogonal complement, phase-fixed so its
// largest-magnitude amplitude is real positive. On two qubits the result is
// always separable; callers check verdict.separable.
TripleCompletion complete_separable_triple(const State& eta1, const State& eta2,
                                           const State& eta3,
                                           double tol = kDefaultSeparabilityTol);

// Orthonormal separable triples on [2,2] in the normal form
// psi1 (x) (c phi2 + d phi3), psi2 (x) phi2, psi2 (x) phi3 with psi1 _|_ psi2 and
// phi2 _|_ phi3, then randomly mirrored across the two qubits and permuted.
std::array<State, 3> sample_separable_triple(std::uint64_t seed);

// Orthonormal separable triples built from random discrete choices of
// factor vectors, rejected until valid. Covers the orthogonality patterns
// independently of the normal form.
std::array<State, 3> sample_separable_triple_by_rejection(std::uint64_t seed);

inline constexpr double kHermiticityTol = 1e-10;
inline constexpr double kDefaultDegeneracyTol = 1e-8;

class HermitianOperator {
 public:
  // Throws NotHermitian when ||A - A^dagger||_max > kHermiticityTol.
  explicit HermitianOperator(ComplexMatrix matrix);

  const ComplexMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return matrix_.rows(); }

 private:
  ComplexMatrix matrix_;
};

struct OperatorClassification {
  BasisClassification classification;
  // Eigenbasis ordered lexicographically by eigenvalue tuple.
  std::vector<State> basis;
  // One tuple per basis element, one entry per operator.
  std::vector<std::vector<double>> eigenvalues;
};

// Classifies the eigenbasis of a non-degenerate operator. Throws
// DegenerateSpectrum when some eigenvalue gap is <= degeneracy_tol times
// the spectral range.
OperatorClassification classify_operator(const HermitianOperator& op,
                                         const FactorStructure& structure,
                                         const Bipartition& bipartition,
                                         double tol = kDefaultSeparabilityTol,
                                         double degeneracy_tol = kDefaultDegeneracyTol);

// Joint eigenbasis by sequential eigenspace refinement. Throws NotCommuting
// when some ||[A, B]||_max > tol and IncompleteSet when a joint eigenspace
// of dimension > 1 remains.
OperatorClassification classify_commuting_set(std::span<const HermitianOperator> ops,
                                              const FactorStructure& structure,
                                              const Bipartition& bipartition,
                                              double tol = kDefaultSeparabilityTol,
                                              double degeneracy_tol = kDefaultDegeneracyTol);

}  // namespace sepkit
