#include <doctest.h>

#include <cmath>
#include <numbers>

#include "amplicap/constraints.hpp"
#include "amplicap/harness.hpp"

using namespace amplicap;
using std::numbers::pi;

namespace {

const EstimatorConfig kEstimator{100000, 4};

RealChannel diag_channel(double a, double b) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return RealChannel(m);
}

}  // namespace

TEST_CASE("TA intrinsic volumes") {
    const auto unit = spectral(realify(ComplexChannel::identity(1)));
    const auto iv = ta_intrinsic_volumes(unit, 1.0, kEstimator);
    CHECK(iv.value(1) == doctest::Approx(pi).epsilon(0.02));
    CHECK(iv.value(2) == doctest::Approx(pi));
    const auto doubled = ta_intrinsic_volumes(unit, 2.0, kEstimator);
    for (int j = 0; j <= 2; ++j) CHECK(doubled.value(j) == doctest::Approx(iv.value(j) * std::pow(2.0, j)));

    const auto stretched = ta_intrinsic_volumes(spectral(diag_channel(2, 1)), 1.0, kEstimator);
    CHECK(stretched.value(2) == doctest::Approx(2 * pi).epsilon(1e-12));
}

TEST_CASE("PA intrinsic volume upper bounds") {
    const auto h = realify(ComplexChannel::identity(1));
    const auto iv = pa_iv_upper(h, 1.0, kEstimator);
    CHECK(iv.value(0) == 1.0);
    CHECK(iv.value(1) == doctest::Approx(pi).epsilon(0.02));  // ellipsoid beats the face sum 8
    CHECK(iv.value(2) == doctest::Approx(pi).epsilon(1e-12));

    const auto h2 = realify(random_channel(2, 17));
    const ChannelContext ctx(h2, kEstimator);
    const double amp = 0.7;
    const auto up = pa_iv_upper(ctx, amp);
    const auto ell = ctx.split_geometry().strong_volumes(4, amp * std::sqrt(2.0));
    for (int j = 1; j < 4; ++j) {
        CAPTURE(j);
        const double faces = ctx.log_unit_face_sums()[static_cast<std::size_t>(j)] + j * std::log(2 * amp);
        CHECK(up.log_value(j) == doctest::Approx(std::min(faces, ell.log_value(j))));
    }
    CHECK(up.log_value(4) == doctest::Approx(ctx.log_abs_det() + 2 * std::log(pi) + 4 * std::log(amp)));
}

TEST_CASE("TA bounds at the extremes") {
    const auto h = realify(ComplexChannel::identity(1));
    const ConstraintRegion region(ConstraintKind::TA, 1.0, 1);

    const auto low = ta_bounds(h, 1.0, NoiseLevel(1e8), kEstimator);
    CHECK(low.c_upper < 1e-2);
    CHECK(low.gap() < 1e-2);

    const auto high = ta_bounds(h, 1.0, sigma_for_snr(region, 80), kEstimator);
    CHECK(high.upper.at("sp").bpcu - high.lower.bpcu < 0.05);
    CHECK(high.c_upper == high.upper.at("psp").bpcu);
    CHECK(high.c_upper <= high.upper.at("sp").bpcu);
    CHECK(high.gap_dual() == doctest::Approx(high.dual_min() - high.lower.bpcu));
}

TEST_CASE("PA bounds") {
    const ChannelContext ctx(realify(random_channel(2, 5)), kEstimator);
    const ConstraintRegion region(ConstraintKind::PA, 1.0, 2);
    const auto b = pa_bounds(ctx, 1.0, sigma_for_snr(region, 80));
    CHECK(b.c_upper == std::min(b.upper.at("gsp").bpcu, b.upper.at("psp").bpcu));
    CHECK(b.gap() < 0.2);
    CHECK(b.gap() > -1e-6);

    const auto mid = constraint_bounds(ctx, region, sigma_for_snr(region, 10));
    CHECK(mid.kind == ConstraintKind::PA);
    for (const auto& [name, v] : mid.upper) {
        CAPTURE(name);
        CHECK(v.bpcu >= mid.lower.bpcu - 1e-6);
    }
}

TEST_CASE("PA and TA coincide for one antenna") {
    const auto h = realify(ComplexChannel::identity(1));
    const NoiseLevel noise(0.5);
    const auto ta = ta_bounds(h, 1.0, noise, kEstimator);
    const auto pa = pa_bounds(h, 1.0, noise, kEstimator);
    CHECK(pa.lower.bpcu == doctest::Approx(ta.lower.bpcu));
    CHECK(pa.c_upper == doctest::Approx(ta.c_upper).epsilon(0.02));
    for (const char* name : {"sp", "psp", "dual_ball", "dual_box"}) {
        CAPTURE(name);
        CHECK(pa.upper.at(name).bpcu == doctest::Approx(ta.upper.at(name).bpcu).epsilon(0.02));
    }
}
