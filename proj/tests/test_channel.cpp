#include <doctest.h>

#include <cmath>
#include <numbers>

#include "amplicap/channel.hpp"
#include "amplicap/errors.hpp"

using namespace amplicap;
using std::complex;

namespace {

ComplexChannel scalar(complex<double> h) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = h;
    return ComplexChannel(m);
}

}  // namespace

TEST_CASE("realify uses the rotation-scaling block") {
    Eigen::Matrix2d expected;
    expected << 1, 0, 0, 1;
    CHECK(realify(scalar({1, 0})).entries().isApprox(expected));
    expected << 0, -1, 1, 0;
    CHECK(realify(scalar({0, 1})).entries().isApprox(expected));
    expected << 1, -2, 2, 1;
    CHECK(realify(scalar({1, 2})).entries().isApprox(expected));
}

TEST_CASE("realify of a 2x2 channel places blocks by entry") {
    Eigen::MatrixXcd h(2, 2);
    h << complex<double>(1, 1), complex<double>(0, 2), complex<double>(3, 0), complex<double>(-1, -1);
    const auto r = realify(ComplexChannel(h)).entries();
    REQUIRE(r.rows() == 4);
    CHECK(r(0, 2) == doctest::Approx(0));
    CHECK(r(0, 3) == doctest::Approx(-2));
    CHECK(r(1, 2) == doctest::Approx(2));
    CHECK(r(2, 0) == doctest::Approx(3));
    CHECK(r(3, 3) == doctest::Approx(-1));
    CHECK(r(3, 2) == doctest::Approx(-1));
}

TEST_CASE("rank-deficient channels are rejected") {
    Eigen::MatrixXcd h(2, 2);
    h << 1, 2, 2, 4;
    CHECK_THROWS_AS(ComplexChannel{h}, DegenerateChannel);
    CHECK_THROWS_AS(spectral(RealChannel(Eigen::MatrixXd::Zero(2, 2))), DegenerateChannel);
}

TEST_CASE("spectral returns descending singular values") {
    auto sv = spectral(realify(ComplexChannel::identity(1))).singular_values;
    CHECK(sv[0] == doctest::Approx(1));
    CHECK(sv[1] == doctest::Approx(1));

    sv = spectral(realify(scalar({1, 2}))).singular_values;
    CHECK(sv[0] == doctest::Approx(std::sqrt(5.0)));
    CHECK(sv[1] == doctest::Approx(std::sqrt(5.0)));

    Eigen::MatrixXd d(2, 2);
    d << 1, 0, 0, 3;
    const auto s = spectral(RealChannel(d));
    CHECK(s.singular_values[0] == doctest::Approx(3));
    CHECK(s.singular_values[1] == doctest::Approx(1));
    CHECK(s.log_product() == doctest::Approx(std::log(3.0)));
}

TEST_CASE("snr and its inverse") {
    CHECK(snr(ConstraintRegion(ConstraintKind::TA, 1, 1), NoiseLevel(0.5)) == doctest::Approx(1));
    CHECK(snr(ConstraintRegion(ConstraintKind::TA, 2, 2), NoiseLevel(1)) == doctest::Approx(1));
    CHECK(snr(ConstraintRegion(ConstraintKind::PA, 1, 4), NoiseLevel(0.5)) == doctest::Approx(1));
    CHECK(snr_db(ConstraintRegion(ConstraintKind::TA, 1, 1), NoiseLevel(0.5)) == doctest::Approx(0).epsilon(1e-12));

    const ConstraintRegion ta(ConstraintKind::TA, 1, 1);
    CHECK(sigma_for_snr(ta, 0).sigma2() == doctest::Approx(0.5));
    CHECK(sigma_for_snr(ta, 20).sigma2() == doctest::Approx(0.005));
    const ConstraintRegion pa(ConstraintKind::PA, 1.5, 3);
    CHECK(snr_db(pa, sigma_for_snr(pa, 37.5)) == doctest::Approx(37.5));
}

TEST_CASE("constraint regions") {
    CHECK(ConstraintRegion(ConstraintKind::TA, 2, 4).r_max() == doctest::Approx(2));
    CHECK(ConstraintRegion(ConstraintKind::PA, 2, 4).r_max() == doctest::Approx(4));
    CHECK(ConstraintRegion(ConstraintKind::PA, 2, 4).dim() == 8);
    CHECK_THROWS_AS(ConstraintRegion(ConstraintKind::TA, -1, 1), ContractViolation);
    CHECK_THROWS_AS(NoiseLevel(0), ContractViolation);
    CHECK(parse_constraint_kind("pa") == ConstraintKind::PA);
    CHECK(to_string(ConstraintKind::TA) == "ta");
    CHECK_THROWS_AS(parse_constraint_kind("box"), ConfigError);
}

TEST_CASE("per-antenna amplitudes fold into the channel columns") {
    Eigen::MatrixXcd h(2, 2);
    h << 1, 2, 3, 4;
    const auto folded = absorb_amplitudes(ComplexChannel(h), {2.0, 0.5}, 1.0).entries();
    CHECK(std::abs(folded(0, 0) - complex<double>(2, 0)) < 1e-12);
    CHECK(std::abs(folded(1, 1) - complex<double>(2, 0)) < 1e-12);
}
