#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>

#include "amplicap/channel.hpp"
#include "amplicap/geometry.hpp"

namespace amplicap {

enum class BoundFamily { SP, GSP, PSP, EPI, DUAL_BALL, DUAL_BOX };

std::string_view to_string(BoundFamily family);

/// A capacity bound in bits per channel use. Every family except EPI is an
/// upper bound.
struct BoundValue {
    BoundFamily family;
    double bpcu;
    std::map<std::string, double> params;

    bool is_upper() const { return family != BoundFamily::EPI; }
    double nats() const;
};

struct SolverConfig {
    double bracket_growth = 2.0;
    double bisection_tol = 1e-10;  // on |f'(t) - theta|
    double golden_tol = 1e-8;      // on theta and alpha
    int max_iterations = 200;
    int theta_grid_points = 401;
    double t_cap = 700.0;

    void validate() const;
};

/// f(t) = (1/d) log sum_j V_j e^{jt}.
double log_gen_f(const IntrinsicVolumes& iv, double t);

struct GenFunctionDerivatives {
    double value;
    double first;
    double second;
};
GenFunctionDerivatives log_gen_f_derivatives(const IntrinsicVolumes& iv, double t);

struct ConjugateResult {
    double value;   // f*(theta); +inf past the top nonzero coefficient
    double t_star;  // maximizer; +-inf at the endpoints
};

/// Convex conjugate f*(theta) = sup_t { theta t - f(t) } for theta in [0, 1].
ConjugateResult conjugate(const IntrinsicVolumes& iv, double theta, const SolverConfig& cfg = {});

struct EllResult {
    double value;  // nats
    double theta_star;
    double t_star;
};

/// sup over theta of { -d f*(theta) + (1 - theta)(d/2) log(2 pi e sigma2 / (1 - theta)) }
/// for a body of any dimension d = iv.dim().
EllResult ell_general(const IntrinsicVolumes& iv, const NoiseLevel& noise, const SolverConfig& cfg = {});

/// Output-entropy term of the sphere-packing bound for a 2N-dimensional body.
EllResult ell(const IntrinsicVolumes& iv, int n_antennas, const NoiseLevel& noise,
              const SolverConfig& cfg = {});

/// N log(2 pi e sigma2), the noise entropy of 2N real dimensions (nats).
double noise_entropy(double half_dim, const NoiseLevel& noise);

BoundValue sp_bound(const IntrinsicVolumes& iv, int n_antennas, const NoiseLevel& noise,
                    const SolverConfig& cfg = {});

/// Sphere packing on per-index upper bounds of the intrinsic volumes. The
/// caller keeps V_0 = 1 and the exact top volume.
BoundValue gsp_bound(const IntrinsicVolumes& iv_upper, int n_antennas, const NoiseLevel& noise,
                     const SolverConfig& cfg = {});

BoundValue epi_bound(double log_volume, int n_antennas, const NoiseLevel& noise);

/// Duality bound with the output enlarged to a ball of radius d1.
BoundValue duality_ball_bound(double radius, int n_antennas, const NoiseLevel& noise);

/// Duality bound with the output enlarged to a box with the given side lengths.
BoundValue duality_box_bound(std::span<const double> sides, const NoiseLevel& noise);

}  // namespace amplicap
