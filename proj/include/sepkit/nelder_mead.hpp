#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace sepkit {

struct NelderMeadOptions {
  // Edge length of the initial axis-aligned simplex.
  double initial_step = 0.5;
  std::size_t max_iterations = 20000;
  // Converged when f_worst - f_best <= f_tol and every vertex lies within
  // x_tol (max norm) of the best vertex.
  double f_tol = 1e-18;
  double x_tol = 1e-12;
  // Also converged when f_worst - f_best <= f_rel_tol * |f_best|. Needed for
  // objectives with flat directions, where the simplex never collapses.
  double f_rel_tol = 1e-10;
  // Stop as soon as the best value drops to or below this.
  double target_value = -std::numeric_limits<double>::infinity();
  // Dimension-dependent reflection/expansion/contraction/shrink
  // coefficients (Gao and Han, 2012); standard 1, 2, 1/2, 1/2 otherwise.
  bool adaptive = true;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             const NelderMeadOptions& options = {});

}  // namespace sepkit
