#pragma once

#include <map>
#include <string>
#include <vector>

#include "amplicap/bounds.hpp"
#include "amplicap/channel.hpp"
#include "amplicap/geometry.hpp"
#include "amplicap/piecewise.hpp"

namespace amplicap {

/// All bounds for one (channel, constraint, noise) instance, in bpcu.
struct ConstraintBounds {
    ConstraintKind kind;
    std::map<std::string, BoundValue> upper;  // sp, gsp (PA), psp, dual_ball, dual_box
    BoundValue lower;                         // epi
    double c_upper;                           // reported upper bound for the constraint

    double gap() const { return c_upper - lower.bpcu; }
    double dual_min() const;
    double gap_dual() const { return dual_min() - lower.bpcu; }
};

/// Per-channel quantities shared by every amplitude and noise level: the
/// spectrum, the prefix-ellipsoid Monte Carlo volumes, and the unit
/// parallelepiped face sums of H.
class ChannelContext {
public:
    ChannelContext(RealChannel channel, const EstimatorConfig& cfg);

    const RealChannel& channel() const { return channel_; }
    const SpectralData& spectrum() const { return split_.spectrum(); }
    const SplitGeometry& split_geometry() const { return split_; }
    int n_antennas() const { return channel_.dim() / 2; }
    /// log |det H|.
    double log_abs_det() const { return spectrum().log_product(); }
    /// Euclidean norms of the rows of H.
    const std::vector<double>& row_norms() const { return row_norms_; }
    /// Face sums of the parallelepiped spanned by the columns of H.
    const std::vector<double>& log_unit_face_sums() const { return face_sums_; }

private:
    RealChannel channel_;
    SplitGeometry split_;
    std::vector<double> row_norms_;
    std::vector<double> face_sums_;
};

/// V_j(H B^{2N}(A)) from the ellipsoid estimator with Sigma = Lambda^2.
IntrinsicVolumes ta_intrinsic_volumes(const SpectralData& spectrum, double amplitude, const EstimatorConfig& cfg);

/// Per-index upper bounds on V_j(H X) for the per-antenna constraint: the
/// smaller of the parallelepiped face sum of 2A H and the ellipsoid
/// H B^{2N}(A sqrt N), with V_0 = 1 and the exact volume |det H| pi^N A^{2N}.
IntrinsicVolumes pa_iv_upper(const ChannelContext& ctx, double amplitude);
IntrinsicVolumes pa_iv_upper(const RealChannel& channel, double amplitude, const EstimatorConfig& cfg);

ConstraintBounds ta_bounds(const ChannelContext& ctx, double amplitude, const NoiseLevel& noise,
                           const SolverConfig& solver = {});
ConstraintBounds ta_bounds(const RealChannel& channel, double amplitude, const NoiseLevel& noise,
                           const EstimatorConfig& cfg, const SolverConfig& solver = {});

ConstraintBounds pa_bounds(const ChannelContext& ctx, double amplitude, const NoiseLevel& noise,
                           const SolverConfig& solver = {});
ConstraintBounds pa_bounds(const RealChannel& channel, double amplitude, const NoiseLevel& noise,
                           const EstimatorConfig& cfg, const SolverConfig& solver = {});

ConstraintBounds constraint_bounds(const ChannelContext& ctx, const ConstraintRegion& region,
                                   const NoiseLevel& noise, const SolverConfig& solver = {});

}  // namespace amplicap
