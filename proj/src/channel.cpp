#include "amplicap/channel.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "amplicap/errors.hpp"

namespace amplicap {

namespace {

void require_full_rank(const Eigen::VectorXd& sv, const char* what) {
    if (sv.size() == 0) throw DegenerateChannel(std::string(what) + ": empty matrix");
    const double smax = sv.maxCoeff();
    const double smin = sv.minCoeff();
    if (!(smax > 0.0) || !std::isfinite(smax) || smin / smax <= kRankTolerance) {
        throw DegenerateChannel(std::string(what) + ": rank deficient (singular value ratio " +
                                std::to_string(smax > 0 ? smin / smax : 0.0) + ")");
    }
}

}  // namespace

ComplexChannel::ComplexChannel(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
        throw ContractViolation("channel matrix must be square with side >= 1");
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(entries_);
    require_full_rank(svd.singularValues(), "complex channel");
}

ComplexChannel ComplexChannel::identity(int n_antennas) {
    return ComplexChannel(Eigen::MatrixXcd::Identity(n_antennas, n_antennas));
}

RealChannel::RealChannel(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
        throw ContractViolation("real channel must be square with side >= 1");
    }
}

double SpectralData::log_product() const {
    double s = 0.0;
    for (double v : singular_values) s += std::log(v);
    return s;
}

std::string_view to_string(ConstraintKind kind) {
    return kind == ConstraintKind::TA ? "ta" : "pa";
}

ConstraintKind parse_constraint_kind(std::string_view text) {
    if (text == "ta" || text == "TA") return ConstraintKind::TA;
    if (text == "pa" || text == "PA") return ConstraintKind::PA;
    throw ConfigError("unknown constraint kind '" + std::string(text) + "' (expected ta or pa)");
}

ConstraintRegion::ConstraintRegion(ConstraintKind kind_, double amplitude_, int n_antennas_)
    : kind(kind_), amplitude(amplitude_), n_antennas(n_antennas_) {
    if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
        throw ContractViolation("amplitude must be positive and finite");
    }
    if (n_antennas < 1) throw ContractViolation("n_antennas must be >= 1");
}

double ConstraintRegion::r_max() const {
    return kind == ConstraintKind::TA ? amplitude : amplitude * std::sqrt(double(n_antennas));
}

NoiseLevel::NoiseLevel(double sigma2) : sigma2_(sigma2) {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw ContractViolation("noise variance must be positive and finite");
    }
}

RealChannel realify(const ComplexChannel& channel) {
    const int n = channel.n_antennas();
    const auto& h = channel.entries();
    Eigen::MatrixXd out(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double a = h(i, j).real();
            const double b = h(i, j).imag();
            out(2 * i, 2 * j) = a;
            out(2 * i, 2 * j + 1) = -b;
            out(2 * i + 1, 2 * j) = b;
            out(2 * i + 1, 2 * j + 1) = a;
        }
    }
    return RealChannel(std::move(out));
}

SpectralData spectral(const RealChannel& channel) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(channel.entries());
    const Eigen::VectorXd sv = svd.singularValues();  // already non-increasing
    require_full_rank(sv, "real channel");
    SpectralData out;
    out.singular_values.assign(sv.data(), sv.data() + sv.size());
    return out;
}

double snr(const ConstraintRegion& region, const NoiseLevel& noise) {
    const double r = region.r_max();
    return r * r / (2.0 * region.n_antennas * noise.sigma2());
}

double snr_db(const ConstraintRegion& region, const NoiseLevel& noise) {
    return 10.0 * std::log10(snr(region, noise));
}

NoiseLevel sigma_for_snr(const ConstraintRegion& region, double snr_db_value) {
    if (!std::isfinite(snr_db_value)) throw ContractViolation("snr_db must be finite");
    const double r = region.r_max();
    const double linear = std::pow(10.0, snr_db_value / 10.0);
    return NoiseLevel(r * r / (2.0 * region.n_antennas * linear));
}

ComplexChannel absorb_amplitudes(const ComplexChannel& channel,
                                 const std::vector<double>& amplitudes, double reference) {
    const int n = channel.n_antennas();
    if (static_cast<int>(amplitudes.size()) != n) {
        throw ContractViolation("one amplitude per antenna required");
    }
    if (!(reference > 0.0)) throw ContractViolation("reference amplitude must be positive");
    Eigen::MatrixXcd h = channel.entries();
    for (int k = 0; k < n; ++k) {
        if (!(amplitudes[k] > 0.0)) throw ContractViolation("amplitudes must be positive");
        h.col(k) *= amplitudes[k] / reference;
    }
    return ComplexChannel(std::move(h));
}

}  // namespace amplicap
