#pragma once

// Brute-force reference computations. They share no solver code with the
// bound engine and exist to check it: grid searches instead of root finding,
// quadrature instead of Monte Carlo.

#include <cstdint>
#include <span>

#include "amplicap/geometry.hpp"

namespace amplicap::oracle {

/// f(t) by direct summation.
double gen_f(const IntrinsicVolumes& iv, double t);

/// sup_t { theta t - f(t) } over a uniform grid of `points` nodes on
/// [t_lo, t_hi], followed by `zoom_rounds` regrids of the best node's
/// neighbourhood. The objective is concave in t, so zooming keeps the maximum
/// inside the window.
double grid_conjugate(const IntrinsicVolumes& iv, double theta, double t_lo = -60.0, double t_hi = 60.0,
                      int points = 100000, int zoom_rounds = 8);

/// sup over theta of the sphere-packing entropy objective by a theta x t grid
/// (`theta_points` x `t_points`) with zoom refinement in both directions.
/// theta = 1 uses the closed-form limit -(1/d) log V_d.
double grid_ell(const IntrinsicVolumes& iv, double sigma2, int theta_points = 2000, int t_points = 2000,
                double t_lo = -60.0, double t_hi = 60.0);

/// Perimeter of the ellipse with semi-axes a, b by composite Simpson quadrature.
double ellipse_perimeter(double a, double b, int intervals = 200000);

/// Largest sum_j 1/2 log(gain_j P_j + sigma2) over `trials` random feasible
/// allocations (uniform on the budget simplex).
double best_random_allocation(std::span<const double> gains, double budget, double sigma2, int trials,
                              std::uint64_t seed);

}  // namespace amplicap::oracle
