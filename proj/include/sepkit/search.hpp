#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sepkit/basis.hpp"
#include "sepkit/factorization.hpp"
#include "sepkit/linalg.hpp"

namespace sepkit {

// Number of real parameters of U(d): d^2.
std::size_t parameter_count(std::size_t dim);

// Hermitian H with theta[0..d) on the diagonal, then the real parts and
// then the imaginary parts of the strict upper triangle in row-major order.
ComplexMatrix hermitian_from_parameters(std::span<const double> theta, std::size_t dim);

// exp(i H(theta)).
ComplexMatrix unitary_from_parameters(std::span<const double> theta, std::size_t dim);

// Columns of exp(i H(theta)).
OrthonormalBasis basis_from_parameters(std::span<const double> theta,
                                       const FactorStructure& structure);

// A theta with unitary_from_parameters(theta) == u: the principal matrix
// logarithm of a unitary, eigenphases in (-pi, pi].
std::vector<double> parameters_from_unitary(const ComplexMatrix& u);

// Assignment-minimized penalty for target (p, q): the q smallest measures
// count against separability, the remaining p are hinged at tau.
double residual_from_measures(std::span<const double> measures, const BasisType& target, double tau);

double residual(const OrthonormalBasis& basis, const BasisType& target,
                const Bipartition& bipartition, double tau);

struct SearchConfig {
  BasisType target;
  std::size_t restarts = 100;
  std::size_t max_iters = 20000;
  std::uint64_t master_seed = 0;
  // Entangled elements must reach E >= tau.
  double tau = 0.01;
  double success_tol = 1e-8;
  double initial_step = 0.5;
  bool adaptive_simplex = true;
  // Gauss-Newton refinement of the separable-element minors after the
  // simplex phase.
  bool polish = true;
  // Only restarts up to the first successful one count toward the result.
  bool stop_at_first_found = true;
  // 0 selects std::thread::hardware_concurrency().
  std::size_t threads = 0;
};

// Throws InvalidInput when the config does not fit the structure.
void validate(const SearchConfig& config, const FactorStructure& structure);

enum class SearchStatus { kFound, kNotFound };

std::string_view to_string(SearchStatus status);

struct SeedTrace {
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> restart_seeds;

  bool operator==(const SeedTrace&) const = default;
};

struct SearchResult {
  SearchStatus status = SearchStatus::kNotFound;
  OrthonormalBasis best_basis;
  double best_residual = 0.0;
  std::size_t best_restart = 0;
  std::vector<double> best_measures;
  std::vector<double> per_restart_residuals;
  SeedTrace seed_trace;

  bool operator==(const SearchResult&) const = default;
};

// Seed of restart i.
std::uint64_t restart_seed(std::uint64_t master_seed, std::size_t restart);

SearchResult search_basis_type(const FactorStructure& structure, const Bipartition& bipartition,
                               const SearchConfig& config);

struct ConjectureRow {
  BasisType target;
  SearchStatus status = SearchStatus::kNotFound;
  double best_residual = 0.0;
  std::size_t restarts_run = 0;
  bool conjectured_infeasible = false;
  // p == 1, q == d - 1.
  bool single_entangled = false;

  bool operator==(const ConjectureRow&) const = default;
};

struct ConjectureReport {
  std::vector<std::size_t> dims;
  std::string split;
  double tau = 0.0;
  double success_tol = 0.0;
  std::uint64_t master_seed = 0;
  std::vector<ConjectureRow> rows;

  bool operator==(const ConjectureReport&) const = default;
};

inline constexpr std::size_t kConjectureDimCap = 16;

// Runs search_basis_type for every target (p, d - p). config.target is
// ignored. Rows whose best residual exceeds 100 * success_tol are flagged as
// conjectured infeasible.
ConjectureReport conjecture_report(const FactorStructure& structure, const Bipartition& bipartition,
                                   const SearchConfig& config);

}  // namespace sepkit
