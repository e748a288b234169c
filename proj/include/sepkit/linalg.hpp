#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace sepkit {

using Complex = std::complex<double>;

// Dense complex vector. Value type; dim() is fixed at construction.
class ComplexVector {
 public:
  ComplexVector() = default;
  explicit ComplexVector(std::size_t dim) : entries_(dim) {}
  explicit ComplexVector(std::vector<Complex> entries) : entries_(std::move(entries)) {}
  ComplexVector(std::initializer_list<Complex> entries) : entries_(entries) {}

  std::size_t dim() const { return entries_.size(); }

  Complex& operator[](std::size_t i) { return entries_[i]; }
  const Complex& operator[](std::size_t i) const { return entries_[i]; }

  std::span<Complex> entries() { return entries_; }
  std::span<const Complex> entries() const { return entries_; }

  auto begin() { return entries_.begin(); }
  auto end() { return entries_.end(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  double norm() const;
  double squared_norm() const;

  ComplexVector& operator+=(const ComplexVector& other);
  ComplexVector& operator-=(const ComplexVector& other);
  ComplexVector& operator*=(Complex scale);

  bool operator==(const ComplexVector&) const = default;

 private:
  std::vector<Complex> entries_;
};

ComplexVector operator+(ComplexVector a, const ComplexVector& b);
ComplexVector operator-(ComplexVector a, const ComplexVector& b);
ComplexVector operator*(Complex scale, ComplexVector v);

// Row-major dense complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> values);
  // Columns of the result are the given vectors.
  static ComplexMatrix from_columns(std::span<const ComplexVector> columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  std::span<Complex> entries() { return entries_; }
  std::span<const Complex> entries() const { return entries_; }

  ComplexVector column(std::size_t c) const;
  void set_column(std::size_t c, const ComplexVector& v);

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;

  double frobenius_norm() const;
  double max_abs() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex scale, ComplexMatrix m);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& v);

// (u, v) = sum conj(u_i) v_i, conjugate-linear in the first argument.
Complex inner_product(const ComplexVector& u, const ComplexVector& v);

// Matrix with entries u_i * v_j (no conjugation).
ComplexMatrix outer(const ComplexVector& u, const ComplexVector& v);

// Kronecker product a (x) b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);

// max_ij |(A^dagger A - I)_ij|
double unitarity_deviation(const ComplexMatrix& u);
// max_ij |A_ij - conj(A_ji)|
double hermiticity_deviation(const ComplexMatrix& a);

// Multiplies v by the phase that makes its largest-magnitude entry real and
// positive. Ties resolve to the lowest index.
void fix_phase(ComplexVector& v);
// The unit-modulus factor fix_phase applies (1 for the zero vector).
Complex canonical_phase(const ComplexVector& v);

struct SvdResult {
  // Descending, non-negative; length min(rows, cols).
  std::vector<double> singular_values;
  // rows x k and cols x k with orthonormal columns, A = U diag(s) V^dagger.
  ComplexMatrix left_vectors;
  ComplexMatrix right_vectors;

  // Number of singular values strictly above rel_tol * sigma_max.
  std::size_t rank(double rel_tol) const;
  ComplexMatrix reconstruct() const;
};

inline constexpr int kMaxJacobiSweeps = 100;

// One-sided (Hestenes) Jacobi SVD. Throws NotConverged after
// kMaxJacobiSweeps sweeps.
SvdResult svd(const ComplexMatrix& m);

struct HermitianEigen {
  // Ascending.
  std::vector<double> values;
  // Column k is the unit eigenvector for values[k].
  ComplexMatrix vectors;
};

// Cyclic Jacobi diagonalization of the Hermitian part (A + A^dagger) / 2.
HermitianEigen hermitian_eigen(const ComplexMatrix& a);

// exp(i H) for Hermitian H, via its eigendecomposition.
ComplexMatrix exp_i_hermitian(const ComplexMatrix& h);

// Orthonormalizes the columns in order (modified Gram-Schmidt with one
// reorthogonalization pass). Columns whose residual norm falls below
// drop_tol are removed from the result.
std::vector<ComplexVector> orthonormalize(std::span<const ComplexVector> vectors,
                                          double drop_tol = 1e-12);

// Standard complex Gaussian entries: real and imaginary parts N(0, 1/2).
ComplexVector random_gaussian_vector(std::size_t dim, std::uint64_t seed);

// Haar-distributed unitary: Gram-Schmidt QR of a complex Gaussian matrix,
// which leaves R with a positive real diagonal.
ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed);

}  // namespace sepkit
