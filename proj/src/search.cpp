#include "sepkit/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <optional>
#include <numbers>
#include <random>
#include <thread>

#include "sepkit/error.hpp"
#include "sepkit/nelder_mead.hpp"
#include "sepkit/random.hpp"
#include "sepkit/separability.hpp"

namespace sepkit {

std::size_t parameter_count(std::size_t dim) { return dim * dim; }

ComplexMatrix hermitian_from_parameters(std::span<const double> theta, std::size_t dim) {
  if (theta.size() != parameter_count(dim)) {
    throw DimensionMismatch("theta: expected " + std::to_string(parameter_count(dim)) + " parameters, got " +
                       std::to_string(theta.size()));
  }
  const std::size_t pairs = dim * (dim - 1) / 2;
  ComplexMatrix h(dim, dim);
  for (std::size_t k = 0; k < dim; ++k) h(k, k) = theta[k];
  std::size_t idx = 0;
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t k = j + 1; k < dim; ++k, ++idx) {
      const Complex z(theta[dim + idx], theta[dim + pairs + idx]);
      h(j, k) = z;
      h(k, j) = std::conj(z);
    }
  }
  return h;
}

ComplexMatrix unitary_from_parameters(std::span<const double> theta, std::size_t dim) {
  return exp_i_hermitian(hermitian_from_parameters(theta, dim));
}

OrthonormalBasis basis_from_parameters(std::span<const double> theta, const FactorStructure& structure) {
  return OrthonormalBasis::from_unitary(structure, unitary_from_parameters(theta, structure.total_dim()));
}

std::vector<double> parameters_from_unitary(const ComplexMatrix& u) {
  const std::size_t d = u.rows();
  if (d == 0 || u.cols() != d || unitarity_deviation(u) > kUnitarityTol) {
    throw NotUnitary("parameters_from_unitary: input is not unitary");
  }
  const ComplexMatrix ud = u.adjoint();
  const Complex half_i(0.0, 0.5);
  // A generic real combination of the commuting Hermitian parts shares the
  // eigenvectors of u; retry with another mix if eigenphases collide.
  for (double mix : {0.6180339887498949, 0.4142135623730951, 1.7320508075688772, 0.2679491924311227}) {
    ComplexMatrix a = 0.5 * (u + ud);
    a += (-half_i * mix) * (u - ud);
    const HermitianEigen eig = hermitian_eigen(a);
    const ComplexMatrix diag = eig.vectors.adjoint() * u * eig.vectors;
    double off = 0.0;
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c)
        if (r != c) off = std::max(off, std::abs(diag(r, c)));
    if (off > 1e-10) continue;
    std::vector<double> phases(d);
    for (std::size_t k = 0; k < d; ++k) phases[k] = std::arg(diag(k, k));
    const ComplexMatrix h = eig.vectors * ComplexMatrix::diagonal(phases) * eig.vectors.adjoint();
    std::vector<double> theta(parameter_count(d));
    const std::size_t pairs = d * (d - 1) / 2;
    for (std::size_t k = 0; k < d; ++k) theta[k] = h(k, k).real();
    std::size_t idx = 0;
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = j + 1; k < d; ++k, ++idx) {
        theta[d + idx] = h(j, k).real();
        theta[d + pairs + idx] = h(j, k).imag();
      }
    }
    return theta;
  }
  throw NotConverged("parameters_from_unitary: could not separate the eigenphases");
}

double residual_from_measures(std::span<const double> measures, const BasisType& target, double tau) {
  if (target.total() != measures.size()) {
    throw InvalidInput("target " + target.to_string() + " does not sum to the basis size " +
                       std::to_string(measures.size()));
  }
  std::vector<double> sorted(measures.begin(), measures.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (std::size_t k = 0; k < target.q; ++k) sum += sorted[k];
  for (std::size_t k = target.q; k < sorted.size(); ++k) sum += std::max(0.0, tau - sorted[k]);
  return sum;
}

double residual(const OrthonormalBasis& basis, const BasisType& target, const Bipartition& bipartition,
                double tau) {
  std::vector<double> measures;
  for (const auto& v : basis.vectors())
    measures.push_back(entanglement_measure(coefficient_matrix(v, basis.structure(), bipartition)));
  return residual_from_measures(measures, target, tau);
}

void validate(const SearchConfig& config, const FactorStructure& structure) {
  if (config.target.total() != structure.total_dim()) {
    throw InvalidInput("target " + config.target.to_string() + ": p + q must equal " +
                       std::to_string(structure.total_dim()));
  }
  if (config.restarts == 0) throw InvalidInput("restarts must be positive");
  if (!(config.success_tol > 0.0)) throw InvalidInput("success_tol must be positive");
  if (!(config.tau > config.success_tol)) throw InvalidInput("tau must exceed success_tol");
  if (!(config.initial_step > 0.0)) throw InvalidInput("initial step must be positive");
}

std::string_view to_string(SearchStatus status) {
  return status == SearchStatus::kFound ? "Found" : "NotFound";
}

std::uint64_t restart_seed(std::uint64_t master_seed, std::size_t restart) {
  return derive_seed(master_seed, restart);
}

namespace {

// Objective pieces with the bipartition reshape precomputed.
class ResidualModel {
 public:
  ResidualModel(const FactorStructure& structure, const Bipartition& bipartition, BasisType target,
                double tau)
      : dim_(structure.total_dim()),
        rows_(bipartition.d_left()),
        cols_(bipartition.d_right()),
        target_(target),
        tau_(tau) {
    for (std::size_t flat = 0; flat < dim_; ++flat) {
      ComplexVector e(dim_);
      e[flat] = 1.0;
      const ComplexMatrix c = coefficient_matrix(e, structure, bipartition).matrix;
      for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = 0; k < cols_; ++k)
          if (c(r, k) != Complex{}) positions_.emplace_back(r, k);
    }
  }

  std::size_t dim() const { return dim_; }

  ComplexMatrix coefficients(const ComplexMatrix& u, std::size_t column) const {
    ComplexMatrix c(rows_, cols_);
    for (std::size_t flat = 0; flat < dim_; ++flat)
      c(positions_[flat].first, positions_[flat].second) = u(flat, column);
    return c;
  }

  std::vector<double> measures(const ComplexMatrix& u) const {
    std::vector<double> out(dim_);
    for (std::size_t k = 0; k < dim_; ++k) out[k] = entanglement_measure(coefficients(u, k));
    return out;
  }

  double residual(std::span<const double> theta) const {
    const auto m = measures(unitary_from_parameters(theta, dim_));
    return residual_from_measures(m, target_, tau_);
  }

  // Columns that the optimal assignment labels separable.
  std::vector<bool> separable_assignment(std::span<const double> theta) const {
    const auto m = measures(unitary_from_parameters(theta, dim_));
    std::vector<std::size_t> order(dim_);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return m[a] < m[b]; });
    std::vector<bool> sep(dim_, false);
    for (std::size_t k = 0; k < target_.q; ++k) sep[order[k]] = true;
    return sep;
  }

  // Real residual vector for a fixed assignment: real and imaginary parts of
  // every minor of the separable columns, plus the active hinge terms.
  std::vector<double> residual_vector(std::span<const double> theta, const std::vector<bool>& sep) const {
    const ComplexMatrix u = unitary_from_parameters(theta, dim_);
    std::vector<double> out;
    for (std::size_t k = 0; k < dim_; ++k) {
      const ComplexMatrix c = coefficients(u, k);
      if (sep[k]) {
        for (std::size_t i = 0; i < rows_; ++i)
          for (std::size_t a = i + 1; a < rows_; ++a)
            for (std::size_t j = 0; j < cols_; ++j)
              for (std::size_t b = j + 1; b < cols_; ++b) {
                const Complex m = c(i, j) * c(a, b) - c(i, b) * c(a, j);
                out.push_back(m.real());
                out.push_back(m.imag());
              }
      } else {
        out.push_back(std::max(0.0, tau_ - entanglement_measure(c)));
      }
    }
    return out;
  }

 private:
  std::size_t dim_;
  std::size_t rows_;
  std::size_t cols_;
  BasisType target_;
  double tau_;
  std::vector<std::pair<std::size_t, std::size_t>> positions_;
};

// Solves (A) x = b for symmetric positive definite A by Cholesky; returns
// nullopt if A is not numerically positive definite.
std::optional<std::vector<double>> cholesky_solve(std::vector<double> a, std::vector<double> b, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) diag -= a[j * n + k] * a[j * n + k];
    if (!(diag > 0.0)) return std::nullopt;
    const double l = std::sqrt(diag);
    a[j * n + j] = l;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / l;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= a[i * n + k] * b[k];
    b[i] = s / a[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[k * n + i] * b[k];
    b[i] = s / a[i * n + i];
  }
  return b;
}

// Levenberg-Marquardt on the fixed-assignment residual vector with a
// central-difference Jacobian. Steps are accepted only when the true
// (assignment-minimized) residual decreases.
void polish(const ResidualModel& model, std::vector<double>& theta, double& value) {
  constexpr int kMaxIterations = 200;
  constexpr double kStep = 1e-6;
  const std::size_t n = theta.size();
  const std::vector<bool> sep = model.separable_assignment(theta);
  double lambda = -1.0;

  for (int iter = 0; iter < kMaxIterations && value > 0.0; ++iter) {
    const std::vector<double> r = model.residual_vector(theta, sep);
    const std::size_t m = r.size();
    std::vector<double> jac(m * n);
    std::vector<double> probe = theta;
    for (std::size_t p = 0; p < n; ++p) {
      probe[p] = theta[p] + kStep;
      const auto plus = model.residual_vector(probe, sep);
      probe[p] = theta[p] - kStep;
      const auto minus = model.residual_vector(probe, sep);
      probe[p] = theta[p];
      for (std::size_t i = 0; i < m; ++i) jac[i * n + p] = (plus[i] - minus[i]) / (2.0 * kStep);
    }
    std::vector<double> jtj(n * n, 0.0), grad(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t p = 0; p < n; ++p) {
        const double jp = jac[i * n + p];
        if (jp == 0.0) continue;
        grad[p] += jp * r[i];
        for (std::size_t q = 0; q < n; ++q) jtj[p * n + q] += jp * jac[i * n + q];
      }
    }
    double max_diag = 0.0;
    for (std::size_t p = 0; p < n; ++p) max_diag = std::max(max_diag, jtj[p * n + p]);
    if (max_diag == 0.0) return;
    if (lambda < 0.0) lambda = 1e-3 * max_diag;

    bool accepted = false;
    while (lambda <= 1e8 * max_diag) {
      std::vector<double> damped = jtj;
      for (std::size_t p = 0; p < n; ++p) damped[p * n + p] += lambda;
      std::vector<double> rhs(n);
      for (std::size_t p = 0; p < n; ++p) rhs[p] = -grad[p];
      const auto step = cholesky_solve(std::move(damped), std::move(rhs), n);
      if (step) {
        std::vector<double> candidate = theta;
        for (std::size_t p = 0; p < n; ++p) candidate[p] += (*step)[p];
        const double v = model.residual(candidate);
        if (v < value) {
          theta = std::move(candidate);
          value = v;
          lambda = std::max(lambda / 3.0, 1e-15 * max_diag);
          accepted = true;
          break;
        }
      }
      lambda *= 4.0;
    }
    if (!accepted) return;
  }
}

struct RestartOutcome {
  std::vector<double> theta;
  double value = std::numeric_limits<double>::infinity();
};

RestartOutcome run_restart(const ResidualModel& model, const SearchConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  RestartOutcome out;
  out.theta.resize(parameter_count(model.dim()));
  for (auto& t : out.theta) t = angle(rng);
  out.value = model.residual(out.theta);

  const Objective objective = [&model](std::span<const double> theta) { return model.residual(theta); };
  NelderMeadOptions options;
  options.initial_step = config.initial_step;
  options.adaptive = config.adaptive_simplex;
  options.target_value = config.polish ? 1e-2 * config.success_tol : 0.0;

  // Re-seed the simplex at the incumbent until a pass stops improving.
  std::size_t used = 0;
  while (used < config.max_iters) {
    options.max_iterations = config.max_iters - used;
    NelderMeadResult nm = nelder_mead(objective, out.theta, options);
    used += std::max<std::size_t>(nm.iterations, 1);
    const bool improved = nm.value < out.value;
    if (improved) {
      out.theta = std::move(nm.x);
      out.value = nm.value;
    }
    if (!improved || out.value <= options.target_value) break;
  }
  if (config.polish) polish(model, out.theta, out.value);
  return out;
}

}  // namespace

SearchResult search_basis_type(const FactorStructure& structure, const Bipartition& bipartition,
                               const SearchConfig& config) {
  validate(config, structure);
  const ResidualModel model(structure, bipartition, config.target, config.tau);

  const std::size_t restarts = config.restarts;
  std::vector<std::optional<RestartOutcome>> outcomes(restarts);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> first_found{restarts};

  auto worker = [&] {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= restarts) return;
      if (config.stop_at_first_found && idx > first_found.load()) continue;
      outcomes[idx] = run_restart(model, config, restart_seed(config.master_seed, idx));
      if (outcomes[idx]->value <= config.success_tol) {
        std::size_t current = first_found.load();
        while (idx < current && !first_found.compare_exchange_weak(current, idx)) {
        }
      }
    }
  };

  std::size_t threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, restarts);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  const std::size_t limit =
      config.stop_at_first_found && first_found.load() < restarts ? first_found.load() + 1 : restarts;
  std::size_t best = 0;
  std::vector<double> per_restart;
  SeedTrace trace{config.master_seed, {}};
  for (std::size_t idx = 0; idx < limit; ++idx) {
    per_restart.push_back(outcomes[idx]->value);
    trace.restart_seeds.push_back(restart_seed(config.master_seed, idx));
    if (outcomes[idx]->value < outcomes[best]->value) best = idx;
  }

  OrthonormalBasis basis = basis_from_parameters(outcomes[best]->theta, structure);
  SearchResult result{
      .status = outcomes[best]->value <= config.success_tol ? SearchStatus::kFound : SearchStatus::kNotFound,
      .best_basis = basis,
      .best_residual = outcomes[best]->value,
      .best_restart = best,
      .best_measures = model.measures(basis.as_matrix()),
      .per_restart_residuals = std::move(per_restart),
      .seed_trace = std::move(trace),
  };
  return result;
}

ConjectureReport conjecture_report(const FactorStructure& structure, const Bipartition& bipartition,
                                   const SearchConfig& config) {
  const std::size_t d = bipartition.d_left() * bipartition.d_right();
  if (d > kConjectureDimCap) {
    throw InvalidInput("conjecture report: d_left * d_right = " + std::to_string(d) + " exceeds the cap of " +
                       std::to_string(kConjectureDimCap));
  }
  ConjectureReport report;
  report.dims = structure.dims();
  report.split = bipartition.to_string();
  report.tau = config.tau;
  report.success_tol = config.success_tol;
  report.master_seed = config.master_seed;
  for (std::size_t p = 0; p <= d; ++p) {
    SearchConfig row_config = config;
    row_config.target = {p, d - p};
    const SearchResult r = search_basis_type(structure, bipartition, row_config);
    report.rows.push_back({
        .target = row_config.target,
        .status = r.status,
        .best_residual = r.best_residual,
        .restarts_run = r.per_restart_residuals.size(),
        .conjectured_infeasible = r.best_residual > 100.0 * config.success_tol,
        .single_entangled = p == 1,
    });
  }
  return report;
}

}  // namespace sepkit
