#include "amplicap/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "amplicap/errors.hpp"

namespace amplicap {

double ConstraintBounds::dual_min() const {
    return std::min(upper.at("dual_ball").bpcu, upper.at("dual_box").bpcu);
}

ChannelContext::ChannelContext(RealChannel channel, const EstimatorConfig& cfg)
    : channel_(std::move(channel)),
      split_(spectral(channel_), cfg),
      face_sums_(log_parallelepiped_face_sums(channel_.entries())) {
    const auto& h = channel_.entries();
    row_norms_.reserve(static_cast<std::size_t>(h.rows()));
    for (Eigen::Index i = 0; i < h.rows(); ++i) row_norms_.push_back(h.row(i).norm());
}

IntrinsicVolumes ta_intrinsic_volumes(const SpectralData& spectrum, double amplitude, const EstimatorConfig& cfg) {
    return ellipsoid_intrinsic_volumes(spectrum.singular_values, amplitude, cfg);
}

IntrinsicVolumes pa_iv_upper(const ChannelContext& ctx, double amplitude) {
    if (!(amplitude > 0.0)) throw ContractViolation("amplitude must be positive");
    const int n = ctx.n_antennas();
    const int d = 2 * n;
    const auto& faces = ctx.log_unit_face_sums();
    const IntrinsicVolumes ellipsoid = ctx.split_geometry().strong_volumes(d, amplitude * std::sqrt(double(n)));
    const double log_side = std::log(2.0 * amplitude);

    std::vector<double> logs(static_cast<std::size_t>(d) + 1);
    logs[0] = 0.0;
    for (int j = 1; j < d; ++j) {
        // Face sums of S = 2A H scale by (2A)^j.
        const double box = faces[static_cast<std::size_t>(j)] + j * log_side;
        logs[static_cast<std::size_t>(j)] = std::min(box, ellipsoid.log_value(j));
    }
    logs[static_cast<std::size_t>(d)] = ctx.log_abs_det() + n * std::log(std::numbers::pi) + d * std::log(amplitude);
    return IntrinsicVolumes(std::move(logs));
}

IntrinsicVolumes pa_iv_upper(const RealChannel& channel, double amplitude, const EstimatorConfig& cfg) {
    return pa_iv_upper(ChannelContext(channel, cfg), amplitude);
}

namespace {

std::vector<double> enclosing_box_sides(const ChannelContext& ctx, double radius) {
    std::vector<double> sides;
    for (double norm : ctx.row_norms()) sides.push_back(2.0 * radius * norm);
    return sides;
}

}  // namespace

ConstraintBounds ta_bounds(const ChannelContext& ctx, double amplitude, const NoiseLevel& noise,
                           const SolverConfig& solver) {
    const ConstraintRegion region(ConstraintKind::TA, amplitude, ctx.n_antennas());
    const int n = region.n_antennas;
    const int d = region.dim();
    const double lambda_max = ctx.spectrum().singular_values.front();

    const IntrinsicVolumes iv = ctx.split_geometry().strong_volumes(d, amplitude);
    ConstraintBounds out{ConstraintKind::TA, {}, epi_bound(iv.log_value(d), n, noise), 0.0};
    out.upper.emplace("sp", sp_bound(iv, n, noise, solver));
    out.upper.emplace("psp", psp_bound(ctx.split_geometry(), amplitude, noise, solver));
    out.upper.emplace("dual_ball", duality_ball_bound(amplitude * lambda_max, n, noise));
    const auto sides = enclosing_box_sides(ctx, amplitude);
    out.upper.emplace("dual_box", duality_box_bound(sides, noise));
    out.c_upper = out.upper.at("psp").bpcu;
    return out;
}

ConstraintBounds ta_bounds(const RealChannel& channel, double amplitude, const NoiseLevel& noise,
                           const EstimatorConfig& cfg, const SolverConfig& solver) {
    return ta_bounds(ChannelContext(channel, cfg), amplitude, noise, solver);
}

ConstraintBounds pa_bounds(const ChannelContext& ctx, double amplitude, const NoiseLevel& noise,
                           const SolverConfig& solver) {
    const ConstraintRegion region(ConstraintKind::PA, amplitude, ctx.n_antennas());
    const int n = region.n_antennas;
    const int d = region.dim();
    const double r_max = region.r_max();
    const double lambda_max = ctx.spectrum().singular_values.front();

    const IntrinsicVolumes upper_iv = pa_iv_upper(ctx, amplitude);
    ConstraintBounds out{ConstraintKind::PA, {}, epi_bound(upper_iv.log_value(d), n, noise), 0.0};
    out.upper.emplace("gsp", gsp_bound(upper_iv, n, noise, solver));
    out.upper.emplace("psp", psp_bound(ctx.split_geometry(), r_max, noise, solver));
    // Plain SP on the enclosing ellipsoid H B^{2N}(r_max), for diagnostics.
    out.upper.emplace("sp", sp_bound(ctx.split_geometry().strong_volumes(d, r_max), n, noise, solver));
    out.upper.emplace("dual_ball", duality_ball_bound(r_max * lambda_max, n, noise));
    const auto sides = enclosing_box_sides(ctx, r_max);
    out.upper.emplace("dual_box", duality_box_bound(sides, noise));
    out.c_upper = std::min(out.upper.at("gsp").bpcu, out.upper.at("psp").bpcu);
    return out;
}

ConstraintBounds pa_bounds(const RealChannel& channel, double amplitude, const NoiseLevel& noise,
                           const EstimatorConfig& cfg, const SolverConfig& solver) {
    return pa_bounds(ChannelContext(channel, cfg), amplitude, noise, solver);
}

ConstraintBounds constraint_bounds(const ChannelContext& ctx, const ConstraintRegion& region,
                                   const NoiseLevel& noise, const SolverConfig& solver) {
    if (region.n_antennas != ctx.n_antennas()) throw ContractViolation("region and channel sizes differ");
    return region.kind == ConstraintKind::TA ? ta_bounds(ctx, region.amplitude, noise, solver)
                                             : pa_bounds(ctx, region.amplitude, noise, solver);
}

}  // namespace amplicap
