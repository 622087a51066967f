#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace amplicap {

/// Streaming log-sum-exp accumulator. Order of add/merge calls is part of
/// the result, so callers reduce in a fixed order.
class LogSumAccumulator {
public:
    void add(double log_term);
    void merge(const LogSumAccumulator& other);
    double total() const;  // -inf when empty

private:
    double max_ = -std::numeric_limits<double>::infinity();
    double scaled_sum_ = 0.0;
};

double log_sum_exp(std::span<const double> terms);

/// Intrinsic volumes V_0..V_d of a convex body in R^d, stored as logs
/// (V_j = 0 is stored as -inf). Every producer in this library sets
/// V_0 = 1; consumers that depend on it check `has_unit_v0()`.
class IntrinsicVolumes {
public:
    explicit IntrinsicVolumes(std::vector<double> log_values);
    static IntrinsicVolumes from_linear(std::span<const double> values);

    int dim() const { return static_cast<int>(log_values_.size()) - 1; }
    const std::vector<double>& log_values() const { return log_values_; }
    double log_value(int j) const { return log_values_.at(static_cast<std::size_t>(j)); }
    double value(int j) const;
    std::vector<double> values() const;

    bool has_unit_v0() const { return log_values_.front() == 0.0; }
    /// Largest j with V_j > 0.
    int top_index() const;

    /// Intrinsic volumes of c*K: V_j scales by c^j. c = 0 leaves only V_0.
    IntrinsicVolumes scaled(double c) const;

private:
    std::vector<double> log_values_;
};

struct EstimatorConfig {
    std::size_t samples = 200000;
    std::uint64_t seed = 1;

    void validate() const;  // throws ConfigError when samples == 0
};

/// Volume of the i-dimensional unit ball.
double kappa(int i);
double log_kappa(int i);

IntrinsicVolumes ball_intrinsic_volumes(int d, double radius);

/// Monte Carlo intrinsic volumes of the ellipsoid scale * diag(lambda) * B^d,
/// using V_j = (2 pi)^{j/2} / j! * E sqrt(det(Q^T Q)) with Q = diag(lambda) G,
/// G a d x j standard Gaussian matrix. V_0 = 1 and V_d = kappa_d scale^d
/// prod(lambda) are exact.
IntrinsicVolumes ellipsoid_intrinsic_volumes(std::span<const double> semi_axes, double scale,
                                             const EstimatorConfig& cfg);

/// Unit-scale intrinsic volumes of the leading-axes ellipsoids diag(lambda_1..u) B^u
/// for every u in `dims` (each 1 <= u <= lambda.size()). All bodies share the
/// same Gaussian draws; the entry for u = lambda.size() is bit-identical to
/// ellipsoid_intrinsic_volumes(lambda, 1, cfg).
std::vector<IntrinsicVolumes> ellipsoid_prefix_intrinsic_volumes(std::span<const double> semi_axes,
                                                                 std::span<const int> dims,
                                                                 const EstimatorConfig& cfg);

/// log of 2^{d-j} * sum over j-column subsets of sqrt|det(S_sub^T S_sub)|, for
/// j = 0..d. Entry d is log|det S|.
std::vector<double> log_parallelepiped_face_sums(const Eigen::MatrixXd& s);
double parallelepiped_face_sum(const Eigen::MatrixXd& s, int j);

/// Exact intrinsic volumes of an axis-aligned box: elementary symmetric
/// polynomials of the side lengths.
IntrinsicVolumes box_intrinsic_volumes_exact(std::span<const double> sides);

/// Steiner's formula: Vol(K + delta B^d) = sum_j V_j kappa_{d-j} delta^{d-j}.
double log_steiner_volume(const IntrinsicVolumes& iv, double delta);
double steiner_volume(const IntrinsicVolumes& iv, double delta);

struct PointBody {
    int dim;
};
struct BallBody {
    int dim;
    double radius;
};
struct BoxBody {
    std::vector<double> sides;  // centered at the origin
};
using SimpleBody = std::variant<PointBody, BallBody, BoxBody>;

int body_dim(const SimpleBody& body);
double distance_to_body(const SimpleBody& body, std::span<const double> x);

struct VolumeEstimate {
    double volume;
    double std_error;
};

/// Hit-or-miss estimate of Vol(body + delta B^d) over the bounding box of the
/// enlarged body. Intended as an independent check of Steiner's formula.
VolumeEstimate mc_minkowski_volume(const SimpleBody& body, double delta,
                                   const EstimatorConfig& cfg);

namespace testing {
/// Multiplies every kappa_i (i >= 1) by `factor`. Fault injection for the
/// self-validation suite; 1.0 restores normal behaviour.
void set_kappa_fault(double factor);
}  // namespace testing

}  // namespace amplicap
