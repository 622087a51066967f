#pragma once

#include <cmath>
#include <utility>

#include "amplicap/errors.hpp"

namespace amplicap::detail {

struct Maximum {
    double x;
    double value;
};

/// Golden-section search for the maximum of a unimodal function on [a, b].
template <class F>
Maximum golden_section_max(F&& fn, double a, double b, double tol, int max_iterations) {
    constexpr double kInvPhi = 0.6180339887498949;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = fn(c);
    double fd = fn(d);
    for (int it = 0; b - a > tol; ++it) {
        if (it >= max_iterations) throw SolverError("golden-section search did not converge");
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = fn(d);
        }
    }
    return fc >= fd ? Maximum{c, fc} : Maximum{d, fd};
}

/// Grid pre-scan on [lo, hi] with `points` nodes followed by golden-section
/// refinement between the neighbours of the best node. Returns the best of
/// the grid and the refined point.
template <class F>
Maximum grid_golden_max(F&& fn, double lo, double hi, int points, double tol, int max_iterations) {
    if (hi <= lo || points < 2) {
        return {lo, fn(lo)};
    }
    const double step = (hi - lo) / (points - 1);
    Maximum best{lo, fn(lo)};
    int best_index = 0;
    for (int i = 1; i < points; ++i) {
        const double x = i == points - 1 ? hi : lo + i * step;
        const double v = fn(x);
        if (v > best.value || std::isnan(best.value)) {
            best = {x, v};
            best_index = i;
        }
    }
    const double a = best_index == 0 ? lo : lo + (best_index - 1) * step;
    const double b = best_index == points - 1 ? hi : lo + (best_index + 1) * step;
    const Maximum refined = golden_section_max(fn, a, b, tol, max_iterations);
    return refined.value > best.value ? refined : best;
}

}  // namespace amplicap::detail
