#include "sepkit/basis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <numbers>
#include <random>

#include "sepkit/error.hpp"
#include "sepkit/random.hpp"

namespace sepkit {

namespace {

const FactorStructure& two_qubits() {
  static const FactorStructure s({2, 2});
  return s;
}

ComplexVector unit(ComplexVector v) {
  v *= 1.0 / v.norm();
  return v;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

}  // namespace

OrthonormalBasis::OrthonormalBasis(FactorStructure structure, std::vector<State> vectors)
    : structure_(std::move(structure)), vectors_(std::move(vectors)) {
  if (vectors_.size() != structure_.total_dim()) {
    throw DimensionMismatch("basis: expected " + std::to_string(structure_.total_dim()) +
                            " vectors, got " + std::to_string(vectors_.size()));
  }
  for (const auto& v : vectors_) {
    if (v.dim() != structure_.total_dim()) {
      throw DimensionMismatch("basis: vector of dimension " + std::to_string(v.dim()) +
                              " in a space of dimension " + std::to_string(structure_.total_dim()));
    }
  }
}

OrthonormalBasis OrthonormalBasis::from_unitary(FactorStructure structure, const ComplexMatrix& u) {
  std::vector<State> vectors;
  vectors.reserve(u.cols());
  for (std::size_t c = 0; c < u.cols(); ++c) vectors.emplace_back(u.column(c));
  return OrthonormalBasis(std::move(structure), std::move(vectors));
}

ComplexMatrix OrthonormalBasis::as_matrix() const {
  ComplexMatrix m(structure_.total_dim(), vectors_.size());
  for (std::size_t c = 0; c < vectors_.size(); ++c) m.set_column(c, vectors_[c].amplitudes());
  return m;
}

std::string BasisType::to_string() const {
  return "(" + std::to_string(p) + "," + std::to_string(q) + ")";
}

BasisType parse_basis_type(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) throw InvalidInput("target: expected 'P,Q', got '" + std::string(text) + "'");
  auto parse = [&](std::string_view token) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
      throw InvalidInput("target: cannot parse '" + std::string(token) + "'");
    }
    return value;
  };
  return {parse(text.substr(0, comma)), parse(text.substr(comma + 1))};
}

OrthonormalityCheck verify_orthonormal(std::span<const ComplexVector> vectors, double tol) {
  OrthonormalityCheck check;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i; j < vectors.size(); ++j) {
      if (vectors[i].dim() != vectors[j].dim()) throw DimensionMismatch("verify_orthonormal: unequal dimensions");
      const Complex g = inner_product(vectors[i], vectors[j]);
      check.max_deviation = std::max(check.max_deviation, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  check.orthonormal = check.max_deviation <= tol;
  return check;
}

OrthonormalityCheck verify_orthonormal(const OrthonormalBasis& basis, double tol) {
  std::vector<ComplexVector> vectors;
  for (const auto& v : basis.vectors()) vectors.push_back(v.amplitudes());
  return verify_orthonormal(vectors, tol);
}

BasisClassification classify_basis(const OrthonormalBasis& basis, const Bipartition& bipartition,
                                   double tol) {
  const auto check = verify_orthonormal(basis, tol);
  if (!check.orthonormal) {
    throw NotOrthonormal("basis: Gram matrix deviates from identity by " +
                         std::to_string(check.max_deviation));
  }
  BasisClassification out;
  for (const auto& v : basis.vectors()) {
    const auto verdict = is_separable(v, basis.structure(), bipartition, tol);
    out.separable.push_back(verdict.separable);
    out.measures.push_back(verdict.measure);
    ++(verdict.separable ? out.type.q : out.type.p);
  }
  return out;
}

CanonicalBasis parse_canonical_basis(std::string_view name) {
  if (name == "computational") return CanonicalBasis::kComputational;
  if (name == "bell") return CanonicalBasis::kBell;
  if (name == "b22") return CanonicalBasis::kB22;
  if (name == "b31") return CanonicalBasis::kB31;
  throw UnsupportedBasis("unknown canonical basis '" + std::string(name) + "'");
}

std::string_view to_string(CanonicalBasis kind) {
  switch (kind) {
    case CanonicalBasis::kComputational: return "computational";
    case CanonicalBasis::kBell: return "bell";
    case CanonicalBasis::kB22: return "b22";
    case CanonicalBasis::kB31: return "b31";
  }
  return "unknown";
}

OrthonormalBasis canonical_basis(CanonicalBasis kind, const FactorStructure& structure) {
  if (kind == CanonicalBasis::kComputational) {
    std::vector<State> vectors;
    for (std::size_t k = 0; k < structure.total_dim(); ++k) vectors.push_back(basis_state(structure, k));
    return OrthonormalBasis(structure, std::move(vectors));
  }
  if (structure != two_qubits()) {
    throw UnsupportedBasis("canonical basis '" + std::string(to_string(kind)) +
                           "' is only defined on dims [2,2]");
  }
  const double r = 1.0 / std::sqrt(2.0);
  // Amplitude order |00>, |01>, |10>, |11>.
  std::vector<ComplexVector> v;
  switch (kind) {
    case CanonicalBasis::kBell:
      v = {{r, 0, 0, r}, {r, 0, 0, -r}, {0, r, r, 0}, {0, r, -r, 0}};
      break;
    case CanonicalBasis::kB22:
      v = {{1, 0, 0, 0}, {0, 0, 0, 1}, {0, r, r, 0}, {0, r, -r, 0}};
      break;
    case CanonicalBasis::kB31:
      v = {{1, 0, 0, 0}, {0, 0.5, 0.5, r}, {0, -0.5, -0.5, r}, {0, r, -r, 0}};
      break;
    case CanonicalBasis::kComputational:
      break;
  }
  std::vector<State> vectors;
  for (auto& x : v) vectors.emplace_back(std::move(x));
  return OrthonormalBasis(structure, std::move(vectors));
}

TripleCompletion complete_separable_triple(const State& eta1, const State& eta2,
                                           const State& eta3, double tol) {
  const std::array<const State*, 3> eta = {&eta1, &eta2, &eta3};
  for (const auto* e : eta) {
    if (e->dim() != 4) throw DimensionMismatch("complete_separable_triple: inputs must be two-qubit states");
  }
  ComplexMatrix gram(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) gram(i, j) = inner_product(eta[i]->amplitudes(), eta[j]->amplitudes());
  const auto gram_eig = hermitian_eigen(gram);
  if (gram_eig.values.front() <= tol) {
    throw InputsDependent("complete_separable_triple: inputs span fewer than 3 dimensions");
  }
  double deviation = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) deviation = std::max(deviation, std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)));
  if (deviation > tol) {
    throw InputsNotOrthogonal("complete_separable_triple: Gram deviation " + std::to_string(deviation));
  }
  const Bipartition split = first_factor_split(two_qubits());
  for (std::size_t i = 0; i < 3; ++i) {
    if (!is_separable(*eta[i], two_qubits(), split, tol).separable) {
      throw InputsNotSeparable("complete_separable_triple: input " + std::to_string(i + 1) + " is entangled");
    }
  }

  ComplexVector best;
  double best_norm = -1.0;
  for (std::size_t k = 0; k < 4; ++k) {
    ComplexVector v(4);
    v[k] = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto* e : eta) v -= inner_product(e->amplitudes(), v) * e->amplitudes();
    const double n = v.norm();
    if (n > best_norm) {
      best_norm = n;
      best = std::move(v);
    }
  }
  best *= 1.0 / best_norm;
  fix_phase(best);
  State fourth(std::move(best));
  SeparabilityVerdict verdict = is_separable(fourth, two_qubits(), split, tol);
  return {std::move(fourth), std::move(verdict)};
}

namespace {

std::array<State, 3> finish_triple(std::array<std::pair<ComplexVector, ComplexVector>, 3> factors,
                                   Rng& rng, bool mirror) {
  std::array<std::size_t, 3> order = {0, 1, 2};
  std::shuffle(order.begin(), order.end(), rng);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<State> out;
  for (std::size_t k : order) {
    auto& [psi, phi] = factors[k];
    ComplexVector v = mirror ? kron(phi, psi) : kron(psi, phi);
    v *= std::polar(1.0, angle(rng));
    out.push_back(State::normalized(std::move(v)));
  }
  return {out[0], out[1], out[2]};
}

}  // namespace

std::array<State, 3> sample_separable_triple(std::uint64_t seed) {
  Rng rng(seed);
  const ComplexMatrix a = random_unitary(2, derive_seed(seed, 1));
  const ComplexMatrix b = random_unitary(2, derive_seed(seed, 2));
  const ComplexVector psi1 = a.column(0), psi2 = a.column(1);
  const ComplexVector phi2 = b.column(0), phi3 = b.column(1);
  const ComplexVector cd = random_gaussian_vector(2, derive_seed(seed, 3));
  const ComplexVector phi1 = unit(cd[0] * phi2 + cd[1] * phi3);
  std::bernoulli_distribution coin(0.5);
  const bool mirror = coin(rng);
  return finish_triple({{{psi1, phi1}, {psi2, phi2}, {psi2, phi3}}}, rng, mirror);
}

std::array<State, 3> sample_separable_triple_by_rejection(std::uint64_t seed) {
  Rng rng(seed);
  for (std::uint64_t attempt = 0;; ++attempt) {
    const std::uint64_t s = derive_seed(seed, attempt);
    const ComplexMatrix a = random_unitary(2, derive_seed(s, 1));
    const ComplexMatrix b = random_unitary(2, derive_seed(s, 2));
    const std::array<ComplexVector, 3> left = {a.column(0), a.column(1),
                                               unit(random_gaussian_vector(2, derive_seed(s, 3)))};
    const std::array<ComplexVector, 3> right = {b.column(0), b.column(1),
                                                unit(random_gaussian_vector(2, derive_seed(s, 4)))};
    std::uniform_int_distribution<std::size_t> pick(0, 2);
    std::array<std::pair<ComplexVector, ComplexVector>, 3> factors;
    std::array<ComplexVector, 3> eta;
    for (std::size_t i = 0; i < 3; ++i) {
      factors[i] = {left[pick(rng)], right[pick(rng)]};
      eta[i] = kron(factors[i].first, factors[i].second);
    }
    if (!verify_orthonormal(eta, 1e-12).orthonormal) continue;
    return finish_triple(std::move(factors), rng, false);
  }
}

HermitianOperator::HermitianOperator(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw DimensionMismatch("operator: matrix must be square and non-empty");
  }
  const double dev = hermiticity_deviation(matrix_);
  if (dev > kHermiticityTol) throw NotHermitian("operator: ||A - A^dagger||_max = " + std::to_string(dev));
}

namespace {

OperatorClassification classify_joint_basis(std::vector<ComplexVector> vectors,
                                            std::vector<std::vector<double>> eigenvalues,
                                            const FactorStructure& structure,
                                            const Bipartition& bipartition, double tol) {
  OperatorClassification out;
  for (auto& v : vectors) {
    fix_phase(v);
    out.basis.push_back(State::normalized(std::move(v)));
  }
  out.eigenvalues = std::move(eigenvalues);
  out.classification = classify_basis(OrthonormalBasis(structure, out.basis), bipartition, tol);
  return out;
}

void check_operator_dim(const HermitianOperator& op, const FactorStructure& structure) {
  if (op.dim() != structure.total_dim()) {
    throw DimensionMismatch("operator: dimension " + std::to_string(op.dim()) + " does not match structure dimension " +
                            std::to_string(structure.total_dim()));
  }
}

}  // namespace

OperatorClassification classify_operator(const HermitianOperator& op,
                                         const FactorStructure& structure,
                                         const Bipartition& bipartition, double tol,
                                         double degeneracy_tol) {
  check_operator_dim(op, structure);
  const HermitianEigen eig = hermitian_eigen(op.matrix());
  const double range = eig.values.back() - eig.values.front();
  for (std::size_t k = 0; k + 1 < eig.values.size(); ++k) {
    const double gap = eig.values[k + 1] - eig.values[k];
    if (gap <= degeneracy_tol * range) {
      throw DegenerateSpectrum("operator: eigenvalue gap " + std::to_string(gap) + " between " +
                               std::to_string(eig.values[k]) + " and " + std::to_string(eig.values[k + 1]) +
                               " is within the degeneracy tolerance; supply a complete commuting set");
    }
  }
  std::vector<ComplexVector> vectors;
  std::vector<std::vector<double>> values;
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    vectors.push_back(eig.vectors.column(k));
    values.push_back({eig.values[k]});
  }
  return classify_joint_basis(std::move(vectors), std::move(values), structure, bipartition, tol);
}

OperatorClassification classify_commuting_set(std::span<const HermitianOperator> ops,
                                              const FactorStructure& structure,
                                              const Bipartition& bipartition, double tol,
                                              double degeneracy_tol) {
  if (ops.empty()) throw InvalidInput("commuting set: no operators given");
  for (const auto& op : ops) check_operator_dim(op, structure);
  for (std::size_t i = 0; i < ops.size(); ++i) {
    for (std::size_t j = i + 1; j < ops.size(); ++j) {
      const double c = commutator(ops[i].matrix(), ops[j].matrix()).max_abs();
      if (c > tol) {
        throw NotCommuting("commuting set: ||[A" + std::to_string(i) + ", A" + std::to_string(j) +
                           "]||_max = " + std::to_string(c));
      }
    }
  }

  struct Block {
    std::vector<double> key;
    std::vector<ComplexVector> columns;
  };
  const std::size_t d = structure.total_dim();
  std::vector<Block> blocks(1);
  for (std::size_t k = 0; k < d; ++k) {
    ComplexVector e(d);
    e[k] = 1.0;
    blocks[0].columns.push_back(std::move(e));
  }

  for (const auto& op : ops) {
    const HermitianEigen full = hermitian_eigen(op.matrix());
    const double scale = std::max(full.values.back() - full.values.front(), op.matrix().max_abs());
    const double threshold = degeneracy_tol * scale;
    std::vector<Block> refined;
    for (const auto& block : blocks) {
      const ComplexMatrix q = ComplexMatrix::from_columns(block.columns);
      const HermitianEigen local = hermitian_eigen(q.adjoint() * op.matrix() * q);
      std::size_t start = 0;
      while (start < local.values.size()) {
        std::size_t end = start + 1;
        while (end < local.values.size() && local.values[end] - local.values[end - 1] <= threshold) ++end;
        Block child;
        child.key = block.key;
        double mean = 0.0;
        std::vector<ComplexVector> raw;
        for (std::size_t k = start; k < end; ++k) {
          mean += local.values[k];
          raw.push_back(q * local.vectors.column(k));
        }
        child.key.push_back(mean / static_cast<double>(end - start));
        child.columns = orthonormalize(raw);
        refined.push_back(std::move(child));
        start = end;
      }
    }
    blocks = std::move(refined);
  }

  std::stable_sort(blocks.begin(), blocks.end(), [](const Block& x, const Block& y) { return x.key < y.key; });
  std::vector<ComplexVector> vectors;
  std::vector<std::vector<double>> values;
  for (auto& block : blocks) {
    if (block.columns.size() != 1) {
      std::string key;
      for (double v : block.key) key += (key.empty() ? "" : ", ") + std::to_string(v);
      throw IncompleteSet("commuting set: joint eigenspace (" + key + ") has dimension " +
                          std::to_string(block.columns.size()));
    }
    vectors.push_back(std::move(block.columns.front()));
    values.push_back(std::move(block.key));
  }
  return classify_joint_basis(std::move(vectors), std::move(values), structure, bipartition, tol);
}

}  // namespace sepkit
