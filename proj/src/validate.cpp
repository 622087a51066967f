#include "amplicap/validate.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include "amplicap/bounds.hpp"
#include "amplicap/constraints.hpp"
#include "amplicap/errors.hpp"
#include "amplicap/geometry.hpp"
#include "amplicap/harness.hpp"
#include "amplicap/oracles.hpp"
#include "amplicap/piecewise.hpp"

namespace amplicap {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

CheckResult check_kappa() {
    const double want[] = {1.0, 2.0, std::numbers::pi, 4.0 * std::numbers::pi / 3.0, std::numbers::pi * std::numbers::pi / 2.0};
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) worst = std::max(worst, rel_err(kappa(i), want[i]));
    return {"kappa_constants", worst < 1e-12, fmt("max relative error %.3g", worst)};
}

CheckResult check_steiner_ball() {
    double worst = 0.0;
    for (int d = 1; d <= 8; ++d) {
        for (double delta : {0.1, 0.5, 2.0}) {
            const double got = steiner_volume(ball_intrinsic_volumes(d, 1.3), delta);
            worst = std::max(worst, rel_err(got, kappa(d) * std::pow(1.3 + delta, d)));
        }
    }
    return {"steiner_ball_consistency", worst < 1e-9, fmt("max relative error %.3g", worst)};
}

CheckResult check_face_sums() {
    const double sides[] = {2.0, 1.0, 0.5};
    const Eigen::MatrixXd s = Eigen::Vector3d(2.0, 1.0, 0.5).asDiagonal();
    const auto exact = box_intrinsic_volumes_exact(sides);
    double worst = 0.0;
    for (int j = 0; j <= 3; ++j) {
        worst = std::max(worst, rel_err(parallelepiped_face_sum(s, j), std::pow(2.0, 3 - j) * exact.value(j)));
    }
    return {"face_sum_box_identity", worst < 1e-12, fmt("max relative error %.3g", worst)};
}

CheckResult check_ellipsoid_vs_ball(int d) {
    const std::vector<double> axes(static_cast<std::size_t>(d), 1.0);
    const auto mc = ellipsoid_intrinsic_volumes(axes, 1.0, {});
    const auto ball = ball_intrinsic_volumes(d, 1.0);
    double worst = 0.0;
    for (int j = 0; j <= d; ++j) worst = std::max(worst, rel_err(mc.value(j), ball.value(j)));
    return {"ellipsoid_vs_ball_d" + std::to_string(d), worst < 0.02, fmt("max relative error %.4f", worst)};
}

CheckResult check_hit_or_miss() {
    const double sides[] = {2.0, 1.0};
    const double steiner = steiner_volume(box_intrinsic_volumes_exact(sides), 0.5);
    const auto mc = mc_minkowski_volume(BoxBody{{2.0, 1.0}}, 0.5, {1000000, 7});
    const double err = rel_err(mc.volume, steiner);
    return {"steiner_vs_hit_or_miss", err < 0.01 && std::abs(mc.volume - steiner) < 3.0 * mc.std_error,
            fmt("steiner %.5f, MC %.5f +- %.5f", steiner, mc.volume, mc.std_error)};
}

CheckResult check_conjugate_grid() {
    const auto iv = IntrinsicVolumes::from_linear(std::vector<double>{1.0, 3.0, 2.5, 0.7});
    double worst = 0.0;
    for (int k = 1; k <= 9; ++k) {
        const double theta = 0.1 * k;
        worst = std::max(worst, std::abs(conjugate(iv, theta).value - oracle::grid_conjugate(iv, theta)));
    }
    return {"conjugate_vs_grid", worst < 1e-6, fmt("max abs error %.3g", worst)};
}

CheckResult check_waterfill() {
    const double gains[] = {1.7, 0.4, 0.05};
    const auto alloc = waterfill(gains, 2.0, 0.3);
    double total = 0.0;
    double slack = 0.0;
    for (int j = 0; j < 3; ++j) {
        total += alloc.powers[j];
        const double floor = 0.3 / gains[j];
        if (alloc.powers[j] > 0.0) {
            slack = std::max(slack, std::abs(alloc.water_level - alloc.powers[j] - floor));
        } else {
            slack = std::max(slack, std::max(0.0, alloc.water_level - floor));
        }
    }
    const double achieved = gaussian_output_entropy(gains, alloc.powers, 0.3) -
                            1.5 * std::log(2.0 * std::numbers::pi * std::numbers::e);
    const double random_best = oracle::best_random_allocation(gains, 2.0, 0.3, 10000, 3);
    const bool ok = std::abs(total - 2.0) < 1e-9 && slack < 1e-9 && achieved >= random_best - 1e-12;
    return {"waterfill_kkt_and_dominance", ok, fmt("budget error %.3g, KKT slack %.3g", total - 2.0, slack)};
}

CheckResult check_asymptotic_gap() {
    const ChannelContext ctx(realify(ComplexChannel::identity(1)), {});
    const ConstraintRegion region(ConstraintKind::TA, 1.0, 1);
    const auto noise = sigma_for_snr(region, 80.0);
    const IntrinsicVolumes iv = ctx.split_geometry().strong_volumes(2, 1.0);
    const double gap = sp_bound(iv, 1, noise).bpcu - epi_bound(iv.log_value(2), 1, noise).bpcu;
    return {"sp_epi_gap_80dB_N1", gap >= -1e-6 && gap < 0.05, fmt("gap %.5f bpcu", gap)};
}

CheckResult check_grid_ell() {
    const double a = 10.0;
    const auto iv = IntrinsicVolumes::from_linear(std::vector<double>{1.0, std::numbers::pi * a, std::numbers::pi * a * a});
    const NoiseLevel noise(1.0);
    const double got = ell(iv, 1, noise).value;
    const double want = oracle::grid_ell(iv, 1.0);
    return {"ell_vs_2d_grid_oracle", std::abs(got - want) < 1e-6, fmt("ell %.9f, grid %.9f", got, want)};
}

CheckResult check_pa_ta_coincidence() {
    const ChannelContext ctx(realify(ComplexChannel::identity(1)), {});
    const NoiseLevel noise(0.5);
    const auto ta = ta_bounds(ctx, 1.0, noise);
    const auto pa = pa_bounds(ctx, 1.0, noise);
    const double err = rel_err(pa.c_upper, ta.c_upper);
    return {"pa_ta_coincide_N1", err < 0.02, fmt("TA %.5f, PA %.5f", ta.c_upper, pa.c_upper)};
}

CheckResult guarded(const std::string& name, const std::function<CheckResult()>& check) {
    try {
        return check();
    } catch (const std::exception& e) {
        return {name, false, std::string("exception: ") + e.what()};
    }
}

}  // namespace

std::vector<CheckResult> run_validation(ValidationSuite suite) {
    std::vector<CheckResult> out;
    out.push_back(guarded("kappa_constants", check_kappa));
    out.push_back(guarded("steiner_ball_consistency", check_steiner_ball));
    out.push_back(guarded("face_sum_box_identity", check_face_sums));
    out.push_back(guarded("ellipsoid_vs_ball_d2", [] { return check_ellipsoid_vs_ball(2); }));
    out.push_back(guarded("steiner_vs_hit_or_miss", check_hit_or_miss));
    out.push_back(guarded("conjugate_vs_grid", check_conjugate_grid));
    out.push_back(guarded("waterfill_kkt_and_dominance", check_waterfill));
    out.push_back(guarded("sp_epi_gap_80dB_N1", check_asymptotic_gap));
    if (suite == ValidationSuite::Full) {
        out.push_back(guarded("ell_vs_2d_grid_oracle", check_grid_ell));
        out.push_back(guarded("ellipsoid_vs_ball_d4", [] { return check_ellipsoid_vs_ball(4); }));
        out.push_back(guarded("ellipsoid_vs_ball_d8", [] { return check_ellipsoid_vs_ball(8); }));
        out.push_back(guarded("pa_ta_coincide_N1", check_pa_ta_coincidence));
    }
    return out;
}

}  // namespace amplicap
