#pragma once

// Derivative-free minimization of a smooth objective over measurement
// directions (theta, phi): a coarse sphere grid to localize the basin,
// then Nelder-Mead refinement from the best cells.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "qrealism/parallel.hpp"

namespace qrealism {

struct MinimizeOptions {
  int grid_theta = 64;
  int grid_phi = 128;
  int refine_starts = 3;
  double objective_tol = 1e-8;
  int max_refine_iter = 200;
  // When set, skip the grid and refine locally from this point (used for
  // bootstrap resamples where the basin is already known).
  std::optional<std::array<double, 2>> warm_start;
};

struct Minimum2d {
  double value = std::numeric_limits<double>::quiet_NaN();
  std::array<double, 2> arg{0.0, 0.0};
  long evaluations = 0;
  bool converged = false;
};

namespace detail {

// Standard Nelder-Mead on two variables. Stops when the objective spread of
// the simplex falls below tol. Angles are left unconstrained; callers pass
// objectives that are periodic on the sphere.
template <typename F>
Minimum2d nelder_mead_2d(F&& f, std::array<double, 2> start, double step_theta, double step_phi,
                         double tol, int max_iter) {
  struct Vertex {
    std::array<double, 2> x;
    double fx;
  };
  std::array<Vertex, 3> simplex;
  long evals = 0;
  auto eval = [&](std::array<double, 2> x) {
    ++evals;
    return f(x[0], x[1]);
  };
  simplex[0] = {start, eval(start)};
  simplex[1] = {{start[0] + step_theta, start[1]}, 0.0};
  simplex[1].fx = eval(simplex[1].x);
  simplex[2] = {{start[0], start[1] + step_phi}, 0.0};
  simplex[2].fx = eval(simplex[2].x);

  auto order = [&] {
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.fx < b.fx; });
  };
  order();

  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    if (simplex[2].fx - simplex[0].fx < tol) {
      converged = true;
      break;
    }
    const std::array<double, 2> centroid{0.5 * (simplex[0].x[0] + simplex[1].x[0]),
                                         0.5 * (simplex[0].x[1] + simplex[1].x[1])};
    auto along = [&](double coef) -> std::array<double, 2> {
      return {centroid[0] + coef * (centroid[0] - simplex[2].x[0]),
              centroid[1] + coef * (centroid[1] - simplex[2].x[1])};
    };
    const auto xr = along(1.0);
    const double fr = eval(xr);
    if (fr < simplex[0].fx) {
      const auto xe = along(2.0);
      const double fe = eval(xe);
      simplex[2] = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
    } else if (fr < simplex[1].fx) {
      simplex[2] = {xr, fr};
    } else {
      const auto xc = along(fr < simplex[2].fx ? 0.5 : -0.5);
      const double fc = eval(xc);
      if (fc < std::min(fr, simplex[2].fx)) {
        simplex[2] = {xc, fc};
      } else {
        for (int k = 1; k < 3; ++k) {
          simplex[k].x = {0.5 * (simplex[k].x[0] + simplex[0].x[0]),
                          0.5 * (simplex[k].x[1] + simplex[0].x[1])};
          simplex[k].fx = eval(simplex[k].x);
        }
      }
    }
    order();
  }
  return {simplex[0].fx, simplex[0].x, evals, converged};
}

}  // namespace detail

// Minimize f(theta, phi) over the sphere. The grid uses theta midpoints, so
// the two poles (where phi degenerates) are evaluated separately: objectives
// whose minimum sits exactly on the axis would otherwise be reported slightly
// high when the local refinement stalls in the degenerate phi direction.
template <typename F>
Minimum2d minimize_over_sphere(F&& f, const MinimizeOptions& opts = {}) {
  constexpr double pi = std::numbers::pi;
  Minimum2d best;

  const double dtheta = pi / opts.grid_theta;
  const double dphi = 2.0 * pi / opts.grid_phi;

  if (opts.warm_start) {
    best = detail::nelder_mead_2d(f, *opts.warm_start, 0.5 * dtheta, 0.5 * dphi,
                                  opts.objective_tol, opts.max_refine_iter);
    return best;
  }

  const std::size_t n_cells =
      static_cast<std::size_t>(opts.grid_theta) * static_cast<std::size_t>(opts.grid_phi);
  std::vector<double> values(n_cells);
  parallel_for(n_cells, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / opts.grid_phi;
    const int j = static_cast<int>(idx) % opts.grid_phi;
    values[idx] = f((i + 0.5) * dtheta, j * dphi);
  });

  // Best cells in fixed enumeration order; ties resolve by lower index.
  std::vector<std::size_t> idx_sorted(n_cells);
  for (std::size_t i = 0; i < n_cells; ++i) idx_sorted[i] = i;
  const std::size_t n_starts = std::min<std::size_t>(opts.refine_starts, n_cells);
  std::partial_sort(idx_sorted.begin(), idx_sorted.begin() + n_starts, idx_sorted.end(),
                    [&](std::size_t a, std::size_t b) {
                      return values[a] != values[b] ? values[a] < values[b] : a < b;
                    });

  long evals = static_cast<long>(n_cells);
  bool converged = false;

  // Seed with the exact pole values so an on-axis minimum is never missed.
  const double f_north = f(0.0, 0.0);
  const double f_south = f(pi, 0.0);
  evals += 2;
  if (f_north <= f_south) {
    best.value = f_north;
    best.arg = {0.0, 0.0};
  } else {
    best.value = f_south;
    best.arg = {pi, 0.0};
  }

  for (std::size_t k = 0; k < n_starts; ++k) {
    const std::size_t idx = idx_sorted[k];
    const int i = static_cast<int>(idx) / opts.grid_phi;
    const int j = static_cast<int>(idx) % opts.grid_phi;
    Minimum2d local = detail::nelder_mead_2d(f, {(i + 0.5) * dtheta, j * dphi}, dtheta, dphi,
                                             opts.objective_tol, opts.max_refine_iter);
    evals += local.evaluations;
    converged |= local.converged;
    if (local.value < best.value) {
      best.value = local.value;
      best.arg = local.arg;
    }
  }
  best.evaluations = evals;
  best.converged = converged;
  return best;
}

}  // namespace qrealism
