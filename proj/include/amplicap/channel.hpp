#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace amplicap {

/// Singular-value ratio below which a channel is treated as rank deficient.
inline constexpr double kRankTolerance = 1e-12;

/// Square N x N complex MIMO channel matrix. Full rank is checked on
/// construction.
class ComplexChannel {
public:
    explicit ComplexChannel(Eigen::MatrixXcd entries);

    static ComplexChannel identity(int n_antennas);

    int n_antennas() const { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXcd& entries() const { return entries_; }

private:
    Eigen::MatrixXcd entries_;
};

/// Real 2N x 2N channel obtained from a ComplexChannel by the Kronecker
/// embedding a+bi -> [[a, -b], [b, a]]. Rows and columns are ordered
/// (Re x1, Im x1, Re x2, Im x2, ...).
class RealChannel {
public:
    /// Wraps an arbitrary real square matrix. Used for tests and for
    /// channels that were built directly in real form.
    explicit RealChannel(Eigen::MatrixXd entries);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXd& entries() const { return entries_; }

private:
    Eigen::MatrixXd entries_;
};

/// Singular values of a real channel, non-increasing.
struct SpectralData {
    std::vector<double> singular_values;

    int dim() const { return static_cast<int>(singular_values.size()); }
    double log_product() const;
};

enum class ConstraintKind { TA, PA };

std::string_view to_string(ConstraintKind kind);
ConstraintKind parse_constraint_kind(std::string_view text);

/// Peak amplitude constraint. TA is the 2N-ball of radius A, PA is the
/// N-fold product of 2-disks of radius A.
struct ConstraintRegion {
    ConstraintKind kind;
    double amplitude;
    int n_antennas;

    ConstraintRegion(ConstraintKind kind, double amplitude, int n_antennas);

    double r_max() const;
    int dim() const { return 2 * n_antennas; }
};

/// Per-real-component noise variance.
class NoiseLevel {
public:
    explicit NoiseLevel(double sigma2);
    double sigma2() const { return sigma2_; }

private:
    double sigma2_;
};

RealChannel realify(const ComplexChannel& channel);
SpectralData spectral(const RealChannel& channel);

/// Peak signal power over total noise power, r_max^2 / (2 N sigma2).
double snr(const ConstraintRegion& region, const NoiseLevel& noise);
double snr_db(const ConstraintRegion& region, const NoiseLevel& noise);
NoiseLevel sigma_for_snr(const ConstraintRegion& region, double snr_db);

/// Scales column block k of the complex channel by amplitudes[k] / reference,
/// so a PA constraint with unequal per-antenna amplitudes becomes an
/// equal-amplitude one with amplitude `reference`.
ComplexChannel absorb_amplitudes(const ComplexChannel& channel,
                                 const std::vector<double>& amplitudes, double reference);

}  // namespace amplicap
