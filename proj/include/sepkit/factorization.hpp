#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "sepkit/linalg.hpp"

namespace sepkit {

// Ordered factor dimensions d_1 ... d_N of a tensor-product space.
// Every factor has dimension >= 2.
class FactorStructure {
 public:
  explicit FactorStructure(std::vector<std::size_t> dims);

  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t factor_count() const { return dims_.size(); }
  std::size_t total_dim() const { return total_dim_; }
  std::size_t dim(std::size_t factor) const { return dims_.at(factor); }

  bool operator==(const FactorStructure&) const = default;

 private:
  std::vector<std::size_t> dims_;
  std::size_t total_dim_ = 1;
};

// Parses "2x3x2" style dimension lists.
FactorStructure parse_dims(std::string_view text);

// Split of the factor indices into two non-empty complementary blocks.
// Both blocks are stored in ascending factor order; blocks need not be
// contiguous.
class Bipartition {
 public:
  Bipartition(const FactorStructure& structure, std::vector<std::size_t> left,
              std::vector<std::size_t> right);

  // "i,j,.../k,l,..." with zero-based factor indices, left block first.
  static Bipartition parse(std::string_view text, const FactorStructure& structure);

  const std::vector<std::size_t>& left() const { return left_; }
  const std::vector<std::size_t>& right() const { return right_; }
  std::size_t d_left() const { return d_left_; }
  std::size_t d_right() const { return d_right_; }

  std::string to_string() const;

  bool operator==(const Bipartition&) const = default;

 private:
  std::vector<std::size_t> left_;
  std::vector<std::size_t> right_;
  std::size_t d_left_ = 1;
  std::size_t d_right_ = 1;
};

// The split {0}|{1} of a two-factor structure, or more generally the first
// factor against the rest.
Bipartition first_factor_split(const FactorStructure& structure);

// Every ordered split (left, right) with both blocks non-empty, ordered by
// the bitmask of the left block.
std::vector<Bipartition> all_bipartitions(const FactorStructure& structure);

inline constexpr double kStateNormTol = 1e-9;

// Unit-norm amplitude vector.
class State {
 public:
  // Throws InvalidInput when |norm - 1| > norm_tol.
  explicit State(ComplexVector amplitudes, double norm_tol = kStateNormTol);

  // Scales a non-zero vector to unit norm.
  static State normalized(ComplexVector amplitudes);

  const ComplexVector& amplitudes() const { return amplitudes_; }
  std::size_t dim() const { return amplitudes_.dim(); }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

  bool operator==(const State&) const = default;

 private:
  ComplexVector amplitudes_;
};

// |multi> basis state of the structure, as a flat index.
State basis_state(const FactorStructure& structure, std::size_t flat);

struct Rational {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;

  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
  bool operator==(const Rational&) const = default;
};

// Each factor replaced in place by its ascending prime factorization.
FactorStructure primordial_factorization(const FactorStructure& structure);

// N / dim of the primordial factorization, in lowest terms.
Rational factorizability(const FactorStructure& structure);

// Mixed-radix maps, zero-based, last factor fastest.
std::size_t flat_index(std::span<const std::size_t> multi, const FactorStructure& structure);
std::vector<std::size_t> multi_index(std::size_t flat, const FactorStructure& structure);

// Amplitudes of a state arranged as a d_left x d_right matrix.
struct CoefficientMatrix {
  ComplexMatrix matrix;
  FactorStructure structure;
  Bipartition bipartition;
};

// C[i][j] is the amplitude whose left-block digits encode i and whose
// right-block digits encode j.
CoefficientMatrix coefficient_matrix(const ComplexVector& amplitudes,
                                     const FactorStructure& structure,
                                     const Bipartition& bipartition);
CoefficientMatrix coefficient_matrix(const State& state, const FactorStructure& structure,
                                     const Bipartition& bipartition);

// Inverse of coefficient_matrix. Returns raw amplitudes; use State to
// enforce unit norm.
ComplexVector flatten_amplitudes(const CoefficientMatrix& c);
State flatten(const CoefficientMatrix& c);

// psi (x) phi placed according to the bipartition; psi lives on the left
// block, phi on the right block.
ComplexVector product_amplitudes(const ComplexVector& psi, const ComplexVector& phi,
                                 const FactorStructure& structure,
                                 const Bipartition& bipartition);

// Haar-random pure state.
State random_state(const FactorStructure& structure, std::uint64_t seed);

// psi (x) phi with independent Haar-random unit factors.
State random_separable_state(const FactorStructure& structure, const Bipartition& bipartition,
                             std::uint64_t seed);

}  // namespace sepkit
