#include "sepkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "sepkit/error.hpp"
#include "sepkit/random.hpp"

namespace sepkit {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                            " vs " + std::to_string(b) + ")");
  }
}

// Root of t^2 + 2 zeta t - 1 = 0 with the smaller magnitude.
double jacobi_tangent(double zeta) {
  const double sign = zeta >= 0.0 ? 1.0 : -1.0;
  return sign / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
}

}  // namespace

double ComplexVector::squared_norm() const {
  double sum = 0.0;
  for (const auto& z : entries_) sum += std::norm(z);
  return sum;
}

double ComplexVector::norm() const { return std::sqrt(squared_norm()); }

ComplexVector& ComplexVector::operator+=(const ComplexVector& other) {
  require_same_dim(dim(), other.dim(), "vector addition");
  for (std::size_t i = 0; i < dim(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

ComplexVector& ComplexVector::operator-=(const ComplexVector& other) {
  require_same_dim(dim(), other.dim(), "vector subtraction");
  for (std::size_t i = 0; i < dim(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

ComplexVector& ComplexVector::operator*=(Complex scale) {
  for (auto& z : entries_) z *= scale;
  return *this;
}

ComplexVector operator+(ComplexVector a, const ComplexVector& b) { return a += b; }
ComplexVector operator-(ComplexVector a, const ComplexVector& b) { return a -= b; }
ComplexVector operator*(Complex scale, ComplexVector v) { return v *= scale; }

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw DimensionMismatch("matrix: " + std::to_string(entries_.size()) +
                            " entries for shape " + std::to_string(rows_) + "x" +
                            std::to_string(cols_));
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  entries_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    require_same_dim(row.size(), cols_, "matrix literal row");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::from_columns(std::span<const ComplexVector> columns) {
  if (columns.empty()) return {};
  ComplexMatrix m(columns.front().dim(), columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) m.set_column(c, columns[c]);
  return m;
}

ComplexVector ComplexMatrix::column(std::size_t c) const {
  ComplexVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void ComplexMatrix::set_column(std::size_t c, const ComplexVector& v) {
  require_same_dim(v.dim(), rows_, "set_column");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
  return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix m = *this;
  for (auto& z : m.entries_) z = std::conj(z);
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (const auto& z : entries_) sum += std::norm(z);
  return std::sqrt(sum);
}

double ComplexMatrix::max_abs() const {
  double best = 0.0;
  for (const auto& z : entries_) best = std::max(best, std::abs(z));
  return best;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_dim(rows_, other.rows_, "matrix addition (rows)");
  require_same_dim(cols_, other.cols_, "matrix addition (cols)");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_dim(rows_, other.rows_, "matrix subtraction (rows)");
  require_same_dim(cols_, other.cols_, "matrix subtraction (cols)");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& z : entries_) z *= scale;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex scale, ComplexMatrix m) { return m *= scale; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a.cols(), b.rows(), "matrix product");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& v) {
  require_same_dim(a.cols(), v.dim(), "matrix-vector product");
  ComplexVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex sum{};
    for (std::size_t k = 0; k < a.cols(); ++k) sum += a(i, k) * v[k];
    out[i] = sum;
  }
  return out;
}

Complex inner_product(const ComplexVector& u, const ComplexVector& v) {
  require_same_dim(u.dim(), v.dim(), "inner_product");
  Complex sum{};
  for (std::size_t i = 0; i < u.dim(); ++i) sum += std::conj(u[i]) * v[i];
  return sum;
}

ComplexMatrix outer(const ComplexVector& u, const ComplexVector& v) {
  ComplexMatrix m(u.dim(), v.dim());
  for (std::size_t i = 0; i < u.dim(); ++i)
    for (std::size_t j = 0; j < v.dim(); ++j) m(i, j) = u[i] * v[j];
  return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix m(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          m(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return m;
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector v(a.dim() * b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) v[i * b.dim() + j] = a[i] * b[j];
  return v;
}

double unitarity_deviation(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return INFINITY;
  const ComplexMatrix gram = u.adjoint() * u;
  double worst = 0.0;
  for (std::size_t i = 0; i < gram.rows(); ++i)
    for (std::size_t j = 0; j < gram.cols(); ++j)
      worst = std::max(worst, std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

double hermiticity_deviation(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) return INFINITY;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j)
      worst = std::max(worst, std::abs(a(i, j) - std::conj(a(j, i))));
  return worst;
}

namespace {

std::size_t dominant_index(const ComplexVector& v) {
  std::size_t best = 0;
  double best_abs = -1.0;
  for (std::size_t i = 0; i < v.dim(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  return best;
}

}  // namespace

Complex canonical_phase(const ComplexVector& v) {
  if (v.dim() == 0) return 1.0;
  const Complex z = v[dominant_index(v)];
  const double a = std::abs(z);
  return a > 0.0 ? std::conj(z) / a : Complex(1.0);
}

void fix_phase(ComplexVector& v) {
  if (v.dim() == 0) return;
  const std::size_t k = dominant_index(v);
  v *= canonical_phase(v);
  v[k] = Complex(v[k].real(), 0.0);
}

std::size_t SvdResult::rank(double rel_tol) const {
  if (singular_values.empty()) return 0;
  const double threshold = rel_tol * singular_values.front();
  return static_cast<std::size_t>(std::count_if(singular_values.begin(), singular_values.end(),
                                                [&](double s) { return s > threshold; }));
}

ComplexMatrix SvdResult::reconstruct() const {
  ComplexMatrix scaled = left_vectors;
  for (std::size_t r = 0; r < scaled.rows(); ++r)
    for (std::size_t c = 0; c < scaled.cols(); ++c) scaled(r, c) *= singular_values[c];
  return scaled * right_vectors.adjoint();
}

std::vector<ComplexVector> orthonormalize(std::span<const ComplexVector> vectors,
                                          double drop_tol) {
  std::vector<ComplexVector> basis;
  for (const auto& input : vectors) {
    ComplexVector v = input;
    const double original = v.norm();
    if (original == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) v -= inner_product(b, v) * b;
    }
    const double n = v.norm();
    if (n <= drop_tol * original) continue;
    v *= 1.0 / n;
    basis.push_back(std::move(v));
  }
  return basis;
}

namespace {

// Completes a set of orthonormal columns ordered by importance. Entries of
// `candidates` may be empty (dim 0), meaning "no candidate for this slot".
// Each candidate is re-orthogonalized against the earlier slots; weak or
// missing candidates are replaced by vectors from the orthogonal complement.
ComplexMatrix complete_orthonormal(std::size_t dim, std::vector<ComplexVector> candidates) {
  std::vector<ComplexVector> accepted;
  std::vector<bool> filled(candidates.size(), false);
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    ComplexVector v = candidates[k];
    if (v.dim() == 0) continue;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : accepted) v -= inner_product(b, v) * b;
    const double n = v.norm();
    if (n < 0.5) {
      candidates[k] = ComplexVector{};
      continue;
    }
    v *= 1.0 / n;
    candidates[k] = v;
    accepted.push_back(std::move(v));
    filled[k] = true;
  }
  std::size_t next_axis = 0;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (filled[k]) continue;
    while (next_axis < dim) {
      ComplexVector v(dim);
      v[next_axis++] = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : accepted) v -= inner_product(b, v) * b;
      const double n = v.norm();
      if (n < 0.5) continue;
      v *= 1.0 / n;
      candidates[k] = v;
      accepted.push_back(std::move(v));
      filled[k] = true;
      break;
    }
  }
  return ComplexMatrix::from_columns(candidates);
}

// Tall case: rows >= cols.
SvdResult svd_tall(const ComplexMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  ComplexMatrix w = a;
  ComplexMatrix v = ComplexMatrix::identity(n);
  constexpr double kOrthTol = 1e-15;

  bool converged = false;
  for (int sweep = 0; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        double alpha = 0.0, beta = 0.0;
        Complex gamma{};
        for (std::size_t r = 0; r < m; ++r) {
          alpha += std::norm(w(r, j));
          beta += std::norm(w(r, k));
          gamma += std::conj(w(r, j)) * w(r, k);
        }
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= kOrthTol * std::sqrt(alpha * beta)) continue;
        converged = false;
        const double t = jacobi_tangent((beta - alpha) / (2.0 * g));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Complex phase = std::conj(gamma) / g;
        for (std::size_t r = 0; r < m; ++r) {
          const Complex x = w(r, j), y = w(r, k);
          w(r, j) = c * x - s * phase * y;
          w(r, k) = s * x + c * phase * y;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const Complex x = v(r, j), y = v(r, k);
          v(r, j) = c * x - s * phase * y;
          v(r, k) = s * x + c * phase * y;
        }
      }
    }
  }
  if (!converged) {
    throw NotConverged("svd: no convergence after " + std::to_string(kMaxJacobiSweeps) +
                       " sweeps");
  }

  std::vector<double> norms(n);
  for (std::size_t c = 0; c < n; ++c) norms[c] = w.column(c).norm();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  SvdResult result;
  result.singular_values.resize(n);
  std::vector<ComplexVector> left(n), right(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t c = order[k];
    result.singular_values[k] = norms[c];
    right[k] = v.column(c);
    if (norms[c] > 0.0) {
      ComplexVector u = w.column(c);
      u *= 1.0 / norms[c];
      left[k] = std::move(u);
    }
  }
  result.left_vectors = complete_orthonormal(m, std::move(left));
  result.right_vectors = ComplexMatrix::from_columns(right);
  return result;
}

}  // namespace

SvdResult svd(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) throw InvalidInput("svd: empty matrix");
  if (m.rows() >= m.cols()) return svd_tall(m);
  SvdResult t = svd_tall(m.adjoint());
  std::swap(t.left_vectors, t.right_vectors);
  return t;
}

HermitianEigen hermitian_eigen(const ComplexMatrix& input) {
  if (input.rows() != input.cols()) throw DimensionMismatch("hermitian_eigen: matrix not square");
  const std::size_t n = input.rows();
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = input(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex z = 0.5 * (input(i, j) + std::conj(input(j, i)));
      a(i, j) = z;
      a(j, i) = std::conj(z);
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double scale = a.frobenius_norm();

  auto off_norm = [&] {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) sum += std::norm(a(i, j));
    return std::sqrt(2.0 * sum);
  };

  int sweep = 0;
  while (off_norm() > 1e-15 * scale) {
    if (sweep++ >= kMaxJacobiSweeps) {
      throw NotConverged("hermitian_eigen: no convergence after " +
                         std::to_string(kMaxJacobiSweeps) + " sweeps");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex b = a(p, q);
        const double g = std::abs(b);
        if (g == 0.0) continue;
        const double t = jacobi_tangent((a(q, q).real() - a(p, p).real()) / (2.0 * g));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Complex phase = std::conj(b) / g;
        const Complex phase_conj = std::conj(phase);
        for (std::size_t r = 0; r < n; ++r) {
          const Complex x = a(r, p), y = a(r, q);
          a(r, p) = c * x - s * phase * y;
          a(r, q) = s * x + c * phase * y;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex x = a(p, k), y = a(q, k);
          a(p, k) = c * x - s * phase_conj * y;
          a(q, k) = s * x + c * phase_conj * y;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const Complex x = v(r, p), y = v(r, q);
          v(r, p) = c * x - s * phase * y;
          v(r, q) = s * x + c * phase * y;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  HermitianEigen result;
  result.values.resize(n);
  result.vectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    result.values[k] = a(order[k], order[k]).real();
    result.vectors.set_column(k, v.column(order[k]));
  }
  return result;
}

ComplexMatrix exp_i_hermitian(const ComplexMatrix& h) {
  const HermitianEigen eig = hermitian_eigen(h);
  const std::size_t n = h.rows();
  ComplexMatrix scaled = eig.vectors;
  for (std::size_t c = 0; c < n; ++c) {
    const Complex phase = std::polar(1.0, eig.values[c]);
    for (std::size_t r = 0; r < n; ++r) scaled(r, c) *= phase;
  }
  return scaled * eig.vectors.adjoint();
}

ComplexVector random_gaussian_vector(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexVector v(dim);
  for (auto& z : v) {
    const double re = normal(rng);
    const double im = normal(rng);
    z = Complex(re, im);
  }
  return v;
}

ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw InvalidInput("random_unitary: dim must be >= 1");
  std::vector<ComplexVector> columns;
  columns.reserve(dim);
  for (std::size_t c = 0; c < dim; ++c)
    columns.push_back(random_gaussian_vector(dim, derive_seed(seed, c)));
  std::vector<ComplexVector> q = orthonormalize(columns, 1e-10);
  // Gaussian columns are independent with probability one; guard anyway.
  if (q.size() != dim) {
    return random_unitary(dim, mix_seed(seed));
  }
  return ComplexMatrix::from_columns(q);
}

}  // namespace sepkit
