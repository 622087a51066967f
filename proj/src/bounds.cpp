#include "amplicap/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "amplicap/errors.hpp"
#include "line_search.hpp"

namespace amplicap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLog2PiE = std::log(2.0 * std::numbers::pi * std::numbers::e);

void require_unit_v0(const IntrinsicVolumes& iv) {
    if (!iv.has_unit_v0()) throw ContractViolation("intrinsic volumes must have V_0 = 1");
}

// log(1 + e^x) without overflow.
double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

}  // namespace

std::string_view to_string(BoundFamily family) {
    switch (family) {
        case BoundFamily::SP: return "sp";
        case BoundFamily::GSP: return "gsp";
        case BoundFamily::PSP: return "psp";
        case BoundFamily::EPI: return "epi";
        case BoundFamily::DUAL_BALL: return "dual_ball";
        case BoundFamily::DUAL_BOX: return "dual_box";
    }
    return "unknown";
}

double BoundValue::nats() const { return bpcu * std::numbers::ln2; }

void SolverConfig::validate() const {
    if (!(bracket_growth > 1.0) || !(bisection_tol > 0.0) || !(golden_tol > 0.0) ||
        max_iterations < 1 || theta_grid_points < 2 || !(t_cap > 0.0)) {
        throw ConfigError("invalid solver configuration");
    }
}

GenFunctionDerivatives log_gen_f_derivatives(const IntrinsicVolumes& iv, double t) {
    const auto& logs = iv.log_values();
    const int d = iv.dim();
    double m = -kInf;
    for (int j = 0; j <= d; ++j) m = std::max(m, logs[static_cast<std::size_t>(j)] + j * t);
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (int j = 0; j <= d; ++j) {
        const double w = std::exp(logs[static_cast<std::size_t>(j)] + j * t - m);
        s0 += w;
        s1 += j * w;
        s2 += double(j) * j * w;
    }
    const double mean = s1 / s0;
    const double var = std::max(0.0, s2 / s0 - mean * mean);
    return {(m + std::log(s0)) / d, mean / d, var / d};
}

double log_gen_f(const IntrinsicVolumes& iv, double t) { return log_gen_f_derivatives(iv, t).value; }

ConjugateResult conjugate(const IntrinsicVolumes& iv, double theta, const SolverConfig& cfg) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw ContractViolation("theta must lie in [0, 1]");
    require_unit_v0(iv);
    const int d = iv.dim();
    const int top = iv.top_index();
    const double theta_max = double(top) / d;

    if (theta == 0.0) return {0.0, -kInf};
    if (theta > theta_max) return {kInf, kInf};
    if (theta == theta_max) return {-iv.log_value(top) / d, kInf};

    // Bracket the root of f'(t) = theta, then safeguarded Newton steps inside
    // the bisection bracket.
    double lo = -1.0, hi = 1.0;
    int it = 0;
    while (log_gen_f_derivatives(iv, lo).first >= theta) {
        if (++it > cfg.max_iterations || lo < -cfg.t_cap) throw SolverError("conjugate: lower bracket expansion failed");
        lo = hi - (hi - lo) * cfg.bracket_growth;
    }
    while (log_gen_f_derivatives(iv, hi).first <= theta) {
        if (++it > cfg.max_iterations || hi > cfg.t_cap) throw SolverError("conjugate: upper bracket expansion failed");
        hi = lo + (hi - lo) * cfg.bracket_growth;
    }

    double t = 0.5 * (lo + hi);
    for (int k = 0;; ++k) {
        if (k > cfg.max_iterations) throw SolverError("conjugate: root search did not converge");
        const auto fd = log_gen_f_derivatives(iv, t);
        const double residual = fd.first - theta;
        if (std::abs(residual) < cfg.bisection_tol) break;
        if (residual > 0.0) hi = t; else lo = t;
        if (hi - lo <= 1e-15 * std::max(1.0, std::abs(t))) break;
        const double newton = fd.second > 0.0 ? t - residual / fd.second : lo;
        t = (newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
    }
    return {theta * t - log_gen_f(iv, t), t};
}

double noise_entropy(double half_dim, const NoiseLevel& noise) {
    return half_dim * (kLog2PiE + std::log(noise.sigma2()));
}

EllResult ell_general(const IntrinsicVolumes& iv, const NoiseLevel& noise, const SolverConfig& cfg) {
    cfg.validate();
    require_unit_v0(iv);
    const int d = iv.dim();
    const int top = iv.top_index();
    const double log_noise = kLog2PiE + std::log(noise.sigma2());
    if (top == 0) return {0.5 * d * log_noise, 0.0, -kInf};

    const double theta_max = double(top) / d;
    double last_t = 0.0;
    auto objective = [&](double theta) {
        const ConjugateResult c = conjugate(iv, theta, cfg);
        last_t = c.t_star;
        const double slack = 1.0 - theta;
        const double noise_term = slack > 0.0 ? slack * 0.5 * d * (log_noise - std::log(slack)) : 0.0;
        return -d * c.value + noise_term;
    };
    const detail::Maximum best = detail::grid_golden_max(objective, 0.0, theta_max, cfg.theta_grid_points,
                                                         cfg.golden_tol, cfg.max_iterations);
    objective(best.x);
    return {best.value, best.x, last_t};
}

EllResult ell(const IntrinsicVolumes& iv, int n_antennas, const NoiseLevel& noise, const SolverConfig& cfg) {
    if (iv.dim() != 2 * n_antennas) throw ContractViolation("intrinsic volumes must have dimension 2N");
    return ell_general(iv, noise, cfg);
}

namespace {

BoundValue sphere_packing(BoundFamily family, const IntrinsicVolumes& iv, int n_antennas,
                          const NoiseLevel& noise, const SolverConfig& cfg) {
    const EllResult l = ell(iv, n_antennas, noise, cfg);
    const double nats = l.value - noise_entropy(n_antennas, noise);
    return {family,
            nats / std::numbers::ln2,
            {{"sigma2", noise.sigma2()},
             {"N", double(n_antennas)},
             {"theta_star", l.theta_star},
             {"t_star", l.t_star}}};
}

}  // namespace

BoundValue sp_bound(const IntrinsicVolumes& iv, int n_antennas, const NoiseLevel& noise, const SolverConfig& cfg) {
    return sphere_packing(BoundFamily::SP, iv, n_antennas, noise, cfg);
}

BoundValue gsp_bound(const IntrinsicVolumes& iv_upper, int n_antennas, const NoiseLevel& noise,
                     const SolverConfig& cfg) {
    require_unit_v0(iv_upper);
    return sphere_packing(BoundFamily::GSP, iv_upper, n_antennas, noise, cfg);
}

BoundValue epi_bound(double log_volume, int n_antennas, const NoiseLevel& noise) {
    if (std::isnan(log_volume) || log_volume == kInf) throw ContractViolation("log volume must be finite");
    if (n_antennas < 1) throw ContractViolation("N must be >= 1");
    const double x = log_volume / n_antennas - kLog2PiE - std::log(noise.sigma2());
    const double nats = log_volume == -kInf ? 0.0 : n_antennas * softplus(x);
    return {BoundFamily::EPI, nats / std::numbers::ln2,
            {{"sigma2", noise.sigma2()}, {"N", double(n_antennas)}, {"log_volume", log_volume}}};
}

BoundValue duality_ball_bound(double radius, int n_antennas, const NoiseLevel& noise) {
    if (!(radius >= 0.0) || !std::isfinite(radius)) throw ContractViolation("radius must be >= 0");
    if (n_antennas < 1) throw ContractViolation("N must be >= 1");
    const int n = n_antennas;
    const double log_ratio = std::log(radius) - 0.5 * std::log(noise.sigma2());
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(2 * n) + 1);
    for (int j = 0; j <= 2 * n - 1; ++j) {
        if (j > 0 && radius == 0.0) break;
        const double log_binom = std::lgamma(2.0 * n) - std::lgamma(j + 1.0) - std::lgamma(2.0 * n - j);
        terms.push_back(log_binom + std::lgamma(n - 0.5 * j) - 0.5 * j * std::numbers::ln2 - std::lgamma(double(n)) +
                        (j == 0 ? 0.0 : j * log_ratio));
    }
    if (radius > 0.0) {
        terms.push_back(log_kappa(2 * n) + 2 * n * std::log(radius) - noise_entropy(n, noise));
    }
    const double nats = log_sum_exp(terms);
    return {BoundFamily::DUAL_BALL, nats / std::numbers::ln2,
            {{"sigma2", noise.sigma2()}, {"N", double(n)}, {"radius", radius}}};
}

BoundValue duality_box_bound(std::span<const double> sides, const NoiseLevel& noise) {
    const double scale = std::sqrt(2.0 * std::numbers::pi * std::numbers::e * noise.sigma2());
    double nats = 0.0;
    for (double s : sides) {
        if (!(s >= 0.0) || !std::isfinite(s)) throw ContractViolation("box sides must be >= 0");
        nats += std::log1p(s / scale);
    }
    return {BoundFamily::DUAL_BOX, nats / std::numbers::ln2,
            {{"sigma2", noise.sigma2()}, {"dims", double(sides.size())}}};
}

}  // namespace amplicap
