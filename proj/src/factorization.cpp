#include "sepkit/factorization.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <string>

#include "sepkit/error.hpp"
#include "sepkit/random.hpp"

namespace sepkit {

namespace {

std::size_t parse_index(std::string_view token, std::string_view what) {
  std::size_t value = 0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (token.empty() || ec != std::errc{} || ptr != last) {
    throw InvalidInput(std::string(what) + ": cannot parse '" + std::string(token) +
                       "' as a non-negative integer");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::vector<std::size_t> prime_factors(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      out.push_back(p);
      n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// For each flat index, the (row, col) it occupies in the coefficient matrix.
std::vector<std::pair<std::size_t, std::size_t>> block_positions(
    const FactorStructure& structure, const Bipartition& bipartition) {
  std::vector<std::pair<std::size_t, std::size_t>> positions(structure.total_dim());
  for (std::size_t flat = 0; flat < structure.total_dim(); ++flat) {
    const auto multi = multi_index(flat, structure);
    std::size_t row = 0, col = 0;
    for (std::size_t f : bipartition.left()) row = row * structure.dim(f) + multi[f];
    for (std::size_t f : bipartition.right()) col = col * structure.dim(f) + multi[f];
    positions[flat] = {row, col};
  }
  return positions;
}

void check_bipartition_fits(const FactorStructure& structure, const Bipartition& bipartition) {
  if (bipartition.d_left() * bipartition.d_right() != structure.total_dim() ||
      bipartition.left().size() + bipartition.right().size() != structure.factor_count()) {
    throw InvalidBipartition("bipartition " + bipartition.to_string() +
                             " does not match the factor structure");
  }
  for (auto f : bipartition.left())
    if (f >= structure.factor_count()) throw InvalidBipartition("bipartition index out of range");
  for (auto f : bipartition.right())
    if (f >= structure.factor_count()) throw InvalidBipartition("bipartition index out of range");
}

}  // namespace

FactorStructure::FactorStructure(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw InvalidInput("dims: at least one factor is required");
  for (std::size_t d : dims_) {
    if (d < 2) throw InvalidInput("dims: every factor dimension must be >= 2, got " + std::to_string(d));
    if (total_dim_ > (std::size_t{1} << 40) / d) throw InvalidInput("dims: total dimension too large");
    total_dim_ *= d;
  }
}

FactorStructure parse_dims(std::string_view text) {
  std::vector<std::size_t> dims;
  for (auto token : split(text, 'x')) dims.push_back(parse_index(token, "dims"));
  return FactorStructure(std::move(dims));
}

Bipartition::Bipartition(const FactorStructure& structure, std::vector<std::size_t> left,
                         std::vector<std::size_t> right)
    : left_(std::move(left)), right_(std::move(right)) {
  if (left_.empty() || right_.empty()) throw InvalidBipartition("split: both blocks must be non-empty");
  std::sort(left_.begin(), left_.end());
  std::sort(right_.begin(), right_.end());
  std::vector<int> seen(structure.factor_count(), 0);
  for (auto* block : {&left_, &right_}) {
    for (std::size_t f : *block) {
      if (f >= structure.factor_count()) {
        throw InvalidBipartition("split: factor index " + std::to_string(f) + " out of range for " +
                                 std::to_string(structure.factor_count()) + " factors");
      }
      if (seen[f]++) throw InvalidBipartition("split: factor index " + std::to_string(f) + " repeated");
    }
  }
  for (std::size_t f = 0; f < seen.size(); ++f) {
    if (!seen[f]) throw InvalidBipartition("split: factor index " + std::to_string(f) + " missing");
  }
  for (std::size_t f : left_) d_left_ *= structure.dim(f);
  for (std::size_t f : right_) d_right_ *= structure.dim(f);
}

Bipartition Bipartition::parse(std::string_view text, const FactorStructure& structure) {
  const auto halves = split(text, '/');
  if (halves.size() != 2) throw InvalidBipartition("split: expected 'i,j,.../k,l,...', got '" + std::string(text) + "'");
  std::vector<std::size_t> blocks[2];
  for (int b = 0; b < 2; ++b) {
    if (halves[b].empty()) throw InvalidBipartition("split: empty block in '" + std::string(text) + "'");
    for (auto token : split(halves[b], ',')) {
      try {
        blocks[b].push_back(parse_index(token, "split"));
      } catch (const InvalidInput& e) {
        throw InvalidBipartition(e.what());
      }
    }
  }
  return Bipartition(structure, std::move(blocks[0]), std::move(blocks[1]));
}

std::string Bipartition::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < left_.size(); ++i) out += (i ? "," : "") + std::to_string(left_[i]);
  out += "/";
  for (std::size_t i = 0; i < right_.size(); ++i) out += (i ? "," : "") + std::to_string(right_[i]);
  return out;
}

Bipartition first_factor_split(const FactorStructure& structure) {
  if (structure.factor_count() < 2) throw InvalidBipartition("split: need at least two factors");
  std::vector<std::size_t> right(structure.factor_count() - 1);
  std::iota(right.begin(), right.end(), 1);
  return Bipartition(structure, {0}, std::move(right));
}

std::vector<Bipartition> all_bipartitions(const FactorStructure& structure) {
  const std::size_t n = structure.factor_count();
  std::vector<Bipartition> out;
  if (n < 2) return out;
  for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> left, right;
    for (std::size_t f = 0; f < n; ++f) ((mask >> (n - 1 - f)) & 1 ? left : right).push_back(f);
    out.emplace_back(structure, std::move(left), std::move(right));
  }
  return out;
}

State::State(ComplexVector amplitudes, double norm_tol) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.dim() == 0) throw InvalidInput("state: no amplitudes");
  const double n = amplitudes_.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > norm_tol) {
    throw InvalidInput("state: norm " + std::to_string(n) + " is not 1");
  }
}

State State::normalized(ComplexVector amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidInput("state: cannot normalize a zero vector");
  amplitudes *= 1.0 / n;
  return State(std::move(amplitudes));
}

State basis_state(const FactorStructure& structure, std::size_t flat) {
  if (flat >= structure.total_dim()) throw IndexOutOfRange("basis_state: flat index out of range");
  ComplexVector v(structure.total_dim());
  v[flat] = 1.0;
  return State(std::move(v));
}

FactorStructure primordial_factorization(const FactorStructure& structure) {
  std::vector<std::size_t> dims;
  for (std::size_t d : structure.dims()) {
    const auto primes = prime_factors(d);
    dims.insert(dims.end(), primes.begin(), primes.end());
  }
  return FactorStructure(std::move(dims));
}

Rational factorizability(const FactorStructure& structure) {
  const FactorStructure primordial = primordial_factorization(structure);
  const std::uint64_t n = primordial.factor_count();
  const std::uint64_t d = primordial.total_dim();
  const std::uint64_t g = std::gcd(n, d);
  return {n / g, d / g};
}

std::size_t flat_index(std::span<const std::size_t> multi, const FactorStructure& structure) {
  if (multi.size() != structure.factor_count()) {
    throw DimensionMismatch("flat_index: expected " + std::to_string(structure.factor_count()) +
                            " indices, got " + std::to_string(multi.size()));
  }
  std::size_t flat = 0;
  for (std::size_t f = 0; f < multi.size(); ++f) {
    if (multi[f] >= structure.dim(f)) {
      throw IndexOutOfRange("flat_index: index " + std::to_string(multi[f]) + " out of range for factor " +
                            std::to_string(f) + " of dimension " + std::to_string(structure.dim(f)));
    }
    flat = flat * structure.dim(f) + multi[f];
  }
  return flat;
}

std::vector<std::size_t> multi_index(std::size_t flat, const FactorStructure& structure) {
  if (flat >= structure.total_dim()) {
    throw IndexOutOfRange("multi_index: flat index " + std::to_string(flat) + " out of range");
  }
  std::vector<std::size_t> multi(structure.factor_count());
  for (std::size_t f = structure.factor_count(); f-- > 0;) {
    multi[f] = flat % structure.dim(f);
    flat /= structure.dim(f);
  }
  return multi;
}

CoefficientMatrix coefficient_matrix(const ComplexVector& amplitudes,
                                     const FactorStructure& structure,
                                     const Bipartition& bipartition) {
  if (amplitudes.dim() != structure.total_dim()) {
    throw DimensionMismatch("coefficient_matrix: state has " + std::to_string(amplitudes.dim()) +
                            " amplitudes, structure needs " + std::to_string(structure.total_dim()));
  }
  check_bipartition_fits(structure, bipartition);
  ComplexMatrix m(bipartition.d_left(), bipartition.d_right());
  const auto positions = block_positions(structure, bipartition);
  for (std::size_t flat = 0; flat < positions.size(); ++flat)
    m(positions[flat].first, positions[flat].second) = amplitudes[flat];
  return {std::move(m), structure, bipartition};
}

CoefficientMatrix coefficient_matrix(const State& state, const FactorStructure& structure,
                                     const Bipartition& bipartition) {
  return coefficient_matrix(state.amplitudes(), structure, bipartition);
}

ComplexVector flatten_amplitudes(const CoefficientMatrix& c) {
  check_bipartition_fits(c.structure, c.bipartition);
  if (c.matrix.rows() != c.bipartition.d_left() || c.matrix.cols() != c.bipartition.d_right()) {
    throw DimensionMismatch("flatten: matrix shape does not match the bipartition");
  }
  ComplexVector v(c.structure.total_dim());
  const auto positions = block_positions(c.structure, c.bipartition);
  for (std::size_t flat = 0; flat < positions.size(); ++flat)
    v[flat] = c.matrix(positions[flat].first, positions[flat].second);
  return v;
}

State flatten(const CoefficientMatrix& c) { return State(flatten_amplitudes(c)); }

ComplexVector product_amplitudes(const ComplexVector& psi, const ComplexVector& phi,
                                 const FactorStructure& structure,
                                 const Bipartition& bipartition) {
  if (psi.dim() != bipartition.d_left() || phi.dim() != bipartition.d_right()) {
    throw DimensionMismatch("product: factor dimensions do not match the bipartition");
  }
  return flatten_amplitudes({outer(psi, phi), structure, bipartition});
}

State random_state(const FactorStructure& structure, std::uint64_t seed) {
  return State::normalized(random_gaussian_vector(structure.total_dim(), seed));
}

State random_separable_state(const FactorStructure& structure, const Bipartition& bipartition,
                             std::uint64_t seed) {
  ComplexVector psi = random_gaussian_vector(bipartition.d_left(), derive_seed(seed, 0));
  ComplexVector phi = random_gaussian_vector(bipartition.d_right(), derive_seed(seed, 1));
  psi *= 1.0 / psi.norm();
  phi *= 1.0 / phi.norm();
  return State::normalized(product_amplitudes(psi, phi, structure, bipartition));
}

}  // namespace sepkit
