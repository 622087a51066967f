#include "amplicap/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "amplicap/errors.hpp"
#include "amplicap/parallel.hpp"
#include "line_search.hpp"

namespace amplicap {

WaterfillAllocation waterfill(std::span<const double> gains, double budget, double sigma2) {
    if (!(budget >= 0.0) || !std::isfinite(budget)) throw ContractViolation("budget must be >= 0");
    if (!(sigma2 > 0.0)) throw ContractViolation("noise variance must be positive");
    const std::size_t n = gains.size();
    for (double g : gains) {
        if (!(g > 0.0) || !std::isfinite(g)) throw ContractViolation("gains must be positive");
    }
    WaterfillAllocation out{std::vector<double>(n, 0.0), 0.0};
    if (n == 0) return out;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> floor(n);
    for (std::size_t i = 0; i < n; ++i) floor[i] = sigma2 / gains[i];
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return floor[a] < floor[b]; });

    if (budget == 0.0) {
        out.water_level = floor[order[0]];
        return out;
    }
    // Grow the active set until the water level stays below the next floor.
    double level = 0.0;
    double partial = 0.0;
    std::size_t active = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        partial += floor[order[k - 1]];
        level = (budget + partial) / double(k);
        active = k;
        if (k == n || level <= floor[order[k]]) break;
    }
    for (std::size_t k = 0; k < active; ++k) {
        out.powers[order[k]] = std::max(0.0, level - floor[order[k]]);
    }
    out.water_level = level;
    return out;
}

double gaussian_output_entropy(std::span<const double> gains, std::span<const double> powers, double sigma2) {
    if (gains.size() != powers.size()) throw ContractViolation("gains and powers differ in length");
    const double log_2pie = std::log(2.0 * std::numbers::pi * std::numbers::e);
    double h = 0.0;
    for (std::size_t j = 0; j < gains.size(); ++j) {
        h += 0.5 * (log_2pie + std::log(gains[j] * powers[j] + sigma2));
    }
    return h;
}

namespace {

std::vector<int> all_dims(int d) {
    std::vector<int> dims(static_cast<std::size_t>(d));
    std::iota(dims.begin(), dims.end(), 1);
    return dims;
}

}  // namespace

SplitGeometry::SplitGeometry(SpectralData spectrum, const EstimatorConfig& cfg)
    : spectrum_(std::move(spectrum)),
      unit_(ellipsoid_prefix_intrinsic_volumes(spectrum_.singular_values, all_dims(spectrum_.dim()), cfg)) {}

IntrinsicVolumes SplitGeometry::strong_volumes(int u, double radius) const {
    if (u < 1 || u > dim()) throw ContractViolation("split dimension out of range");
    return unit_[static_cast<std::size_t>(u - 1)].scaled(radius);
}

double ell_U(const SplitGeometry& geometry, int u, double alpha, double r, const NoiseLevel& noise,
             const SolverConfig& solver) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ContractViolation("alpha must lie in [0, 1]");
    if (!(r > 0.0)) throw ContractViolation("radius must be positive");
    return ell_general(geometry.strong_volumes(u, r * (1.0 - alpha)), noise, solver).value;
}

double ell_U(const SpectralData& spectrum, int u, double alpha, double r, const NoiseLevel& noise,
             const EstimatorConfig& cfg, const SolverConfig& solver) {
    if (u < 1 || u > spectrum.dim()) throw ContractViolation("split dimension out of range");
    const std::span<const double> strong(spectrum.singular_values.data(), static_cast<std::size_t>(u));
    const int dims[] = {u};
    const auto unit = ellipsoid_prefix_intrinsic_volumes(strong, dims, cfg).front();
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ContractViolation("alpha must lie in [0, 1]");
    return ell_general(unit.scaled(r * (1.0 - alpha)), noise, solver).value;
}

SplitOptimum split_entropy(const SplitGeometry& geometry, int u, double r, const NoiseLevel& noise,
                           const SolverConfig& solver) {
    const int d = geometry.dim();
    if (u < 0 || u > d) throw ContractViolation("split dimension out of range");
    const auto& sv = geometry.spectrum().singular_values;
    std::vector<double> strong_gains;
    std::vector<double> weak_gains;
    for (int j = 0; j < d; ++j) {
        const double g = sv[static_cast<std::size_t>(j)] * sv[static_cast<std::size_t>(j)];
        (j < u ? strong_gains : weak_gains).push_back(g);
    }
    auto gaussian = [&](const std::vector<double>& gains, double budget) {
        const auto alloc = waterfill(gains, budget, noise.sigma2());
        return gaussian_output_entropy(gains, alloc.powers, noise.sigma2());
    };

    if (u == 0) return {0, 1.0, gaussian(weak_gains, r * r)};

    // alpha^2 is the share of E|X|^2 spent on the weak part. The strong part
    // keeps its full support radius r and receives the remaining power.
    const double strong_support = ell_U(geometry, u, 0.0, r, noise, solver);
    auto objective = [&](double alpha) {
        const double p = std::clamp(alpha * alpha, 0.0, 1.0);
        const double strong = p < 1.0 ? std::min(strong_support, gaussian(strong_gains, r * r * (1.0 - p)))
                                      : -std::numeric_limits<double>::infinity();
        return strong + gaussian(weak_gains, r * r * p);
    };
    if (u == d) return {d, 0.0, objective(0.0)};

    const auto best = detail::grid_golden_max(objective, 0.0, 1.0, kAlphaGridPoints, solver.golden_tol,
                                              solver.max_iterations);
    return {u, best.x, best.value};
}

BoundValue psp_bound(const SplitGeometry& geometry, double r_max, const NoiseLevel& noise,
                     const SolverConfig& solver) {
    solver.validate();
    const int d = geometry.dim();
    std::vector<SplitOptimum> branches(static_cast<std::size_t>(d) + 1);
    parallel_for(branches.size(), [&](std::size_t u) {
        branches[u] = split_entropy(geometry, static_cast<int>(u), r_max, noise, solver);
    });
    const auto best = std::min_element(branches.begin(), branches.end(),
                                       [](const auto& a, const auto& b) { return a.entropy < b.entropy; });
    const double nats = best->entropy - noise_entropy(0.5 * d, noise);
    return {BoundFamily::PSP,
            nats / std::numbers::ln2,
            {{"sigma2", noise.sigma2()},
             {"N", 0.5 * d},
             {"u_star", double(best->u)},
             {"alpha_star", best->alpha},
             {"r_max", r_max}}};
}

BoundValue psp_bound(const SpectralData& spectrum, const ConstraintRegion& region, const NoiseLevel& noise,
                     const EstimatorConfig& cfg, const SolverConfig& solver) {
    if (spectrum.dim() != region.dim()) throw ContractViolation("spectrum and region dimensions differ");
    return psp_bound(SplitGeometry(spectrum, cfg), region.r_max(), noise, solver);
}

}  // namespace amplicap
