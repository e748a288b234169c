#include "sepkit/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sepkit/error.hpp"

namespace sepkit {

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  if (n == 0) throw InvalidInput("nelder_mead: empty parameter vector");
  const double dn = static_cast<double>(n);
  const double reflect = 1.0;
  const double expand = options.adaptive ? 1.0 + 2.0 / dn : 2.0;
  const double contract = options.adaptive ? 0.75 - 0.5 / dn : 0.5;
  const double shrink = options.adaptive ? 1.0 - 1.0 / dn : 0.5;

  NelderMeadResult result;
  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += options.initial_step;
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  auto along = [&](std::vector<double>& out, const std::vector<double>& from, double t) {
    // out = centroid + t * (from - centroid)
    for (std::size_t k = 0; k < n; ++k) out[k] = centroid[k] + t * (from[k] - centroid[k]);
  };

  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[n - 1];

    if (values[best] <= options.target_value) {
      result.converged = true;
      break;
    }
    const double f_spread = values[worst] - values[best];
    if (f_spread <= options.f_rel_tol * std::abs(values[best])) {
      result.converged = true;
      break;
    }
    if (f_spread <= options.f_tol) {
      double spread = 0.0;
      for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t k = 0; k < n; ++k) spread = std::max(spread, std::abs(simplex[i][k] - simplex[best][k]));
      if (spread <= options.x_tol) {
        result.converged = true;
        break;
      }
    }
    if (result.iterations >= options.max_iterations) break;
    ++result.iterations;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[order[i]][k];
    for (auto& c : centroid) c /= dn;

    along(xr, simplex[worst], -reflect);
    const double fr = eval(xr);
    if (fr < values[best]) {
      along(xe, xr, expand);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        values[worst] = fe;
      } else {
        simplex[worst] = xr;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second_worst]) {
      simplex[worst] = xr;
      values[worst] = fr;
      continue;
    }
    if (fr < values[worst]) {
      along(xc, xr, contract);
      const double fc = eval(xc);
      if (fc <= fr) {
        simplex[worst] = xc;
        values[worst] = fc;
        continue;
      }
    } else {
      along(xc, simplex[worst], contract);
      const double fc = eval(xc);
      if (fc < values[worst]) {
        simplex[worst] = xc;
        values[worst] = fc;
        continue;
      }
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < n; ++k)
        simplex[i][k] = simplex[best][k] + shrink * (simplex[i][k] - simplex[best][k]);
      values[i] = eval(simplex[i]);
    }
  }

  const auto best_it = std::min_element(values.begin(), values.end());
  result.value = *best_it;
  result.x = simplex[static_cast<std::size_t>(best_it - values.begin())];
  return result;
}

}  // namespace sepkit
