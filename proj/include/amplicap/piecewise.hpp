#pragma once

#include <span>
#include <vector>

#include "amplicap/bounds.hpp"
#include "amplicap/channel.hpp"
#include "amplicap/geometry.hpp"

namespace amplicap {

struct WaterfillAllocation {
    std::vector<double> powers;  // same order as the input gains
    double water_level;
};

/// Maximizes sum_j 1/2 log(gain_j P_j + sigma2) subject to sum_j P_j = budget,
/// P_j >= 0. Exact active-set solution; gains are squared singular values.
WaterfillAllocation waterfill(std::span<const double> gains, double budget, double sigma2);

/// sum_j 1/2 log(2 pi e (gain_j P_j + sigma2)) in nats.
double gaussian_output_entropy(std::span<const double> gains, std::span<const double> powers, double sigma2);

/// Unit-radius intrinsic volumes of diag(lambda_1..u) B^u for u = 1..2N,
/// estimated once per channel and rescaled analytically afterwards.
class SplitGeometry {
public:
    SplitGeometry(SpectralData spectrum, const EstimatorConfig& cfg);

    const SpectralData& spectrum() const { return spectrum_; }
    int dim() const { return spectrum_.dim(); }
    /// Intrinsic volumes of diag(lambda_1..u) B^u(radius).
    IntrinsicVolumes strong_volumes(int u, double radius) const;

private:
    SpectralData spectrum_;
    std::vector<IntrinsicVolumes> unit_;  // unit_[u - 1]
};

/// SP entropy bound (nats) on the u strongest subchannels with input radius
/// r (1 - alpha).
double ell_U(const SplitGeometry& geometry, int u, double alpha, double r, const NoiseLevel& noise,
             const SolverConfig& solver = {});
double ell_U(const SpectralData& spectrum, int u, double alpha, double r, const NoiseLevel& noise,
             const EstimatorConfig& cfg, const SolverConfig& solver = {});

struct SplitOptimum {
    int u;
    double alpha;
    double entropy;  // max over alpha of ell_U + weak-subchannel Gaussian entropy (nats)
};

/// Inner maximization over alpha for one split. A fraction alpha^2 of the
/// second moment r^2 goes to the weak subchannels (water-filled Gaussian
/// entropy); the strong part is bounded by the smaller of its SP entropy on
/// B^u(r) and the water-filled Gaussian entropy for the remaining power.
/// u = 0 is pure water-filling; u = 2N has alpha = 0.
SplitOptimum split_entropy(const SplitGeometry& geometry, int u, double r, const NoiseLevel& noise,
                           const SolverConfig& solver = {});

/// Piecewise sphere-packing bound on the enclosing ball of radius r_max.
BoundValue psp_bound(const SplitGeometry& geometry, double r_max, const NoiseLevel& noise,
                     const SolverConfig& solver = {});
BoundValue psp_bound(const SpectralData& spectrum, const ConstraintRegion& region, const NoiseLevel& noise,
                     const EstimatorConfig& cfg, const SolverConfig& solver = {});

/// Grid resolution of the alpha search.
inline constexpr int kAlphaGridPoints = 101;

}  // namespace amplicap
