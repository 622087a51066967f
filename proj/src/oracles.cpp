#include "amplicap/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "amplicap/errors.hpp"

namespace amplicap::oracle {

double gen_f(const IntrinsicVolumes& iv, double t) {
    const int d = iv.dim();
    double m = -std::numeric_limits<double>::infinity();
    for (int j = 0; j <= d; ++j) m = std::max(m, iv.log_value(j) + j * t);
    double s = 0.0;
    for (int j = 0; j <= d; ++j) s += std::exp(iv.log_value(j) + j * t - m);
    return (m + std::log(s)) / d;
}

namespace {

template <class F>
double zoom_max(F&& fn, double lo, double hi, int points, int zoom_rounds, int zoom_points) {
    double best = -std::numeric_limits<double>::infinity();
    for (int round = 0; round <= zoom_rounds; ++round) {
        const int n = round == 0 ? points : zoom_points;
        const double step = (hi - lo) / (n - 1);
        int best_i = 0;
        double round_best = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            const double v = fn(lo + i * step);
            if (v > round_best) {
                round_best = v;
                best_i = i;
            }
        }
        best = std::max(best, round_best);
        const double center = lo + best_i * step;
        lo = std::max(lo, center - step);
        hi = std::min(hi, center + step);
    }
    return best;
}

}  // namespace

double grid_conjugate(const IntrinsicVolumes& iv, double theta, double t_lo, double t_hi, int points,
                      int zoom_rounds) {
    return zoom_max([&](double t) { return theta * t - gen_f(iv, t); }, t_lo, t_hi, points, zoom_rounds, 41);
}

double grid_ell(const IntrinsicVolumes& iv, double sigma2, int theta_points, int t_points, double t_lo,
                double t_hi) {
    const int d = iv.dim();
    const double log_noise = std::log(2.0 * std::numbers::pi * std::numbers::e * sigma2);
    auto objective = [&](double theta) {
        double conj;
        if (theta <= 0.0) {
            conj = 0.0;
        } else if (theta >= 1.0) {
            conj = -iv.log_value(d) / d;
        } else {
            conj = grid_conjugate(iv, theta, t_lo, t_hi, t_points, 8);
        }
        const double slack = 1.0 - theta;
        const double noise = slack > 0.0 ? slack * 0.5 * d * (log_noise - std::log(slack)) : 0.0;
        return -d * conj + noise;
    };
    return zoom_max(objective, 0.0, 1.0, theta_points, 10, 41);
}

double ellipse_perimeter(double a, double b, int intervals) {
    if (intervals % 2) ++intervals;
    const double h = 2.0 * std::numbers::pi / intervals;
    auto speed = [&](double x) { return std::sqrt(a * a * std::sin(x) * std::sin(x) + b * b * std::cos(x) * std::cos(x)); };
    double s = speed(0.0) + speed(2.0 * std::numbers::pi);
    for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * speed(i * h);
    return s * h / 3.0;
}

double best_random_allocation(std::span<const double> gains, double budget, double sigma2, int trials,
                              std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> expo(1.0);
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> w(gains.size());
    for (int t = 0; t < trials; ++t) {
        double total = 0.0;
        for (auto& x : w) total += (x = expo(rng));
        double v = 0.0;
        for (std::size_t j = 0; j < gains.size(); ++j) v += 0.5 * std::log(gains[j] * budget * w[j] / total + sigma2);
        best = std::max(best, v);
    }
    return best;
}

}  // namespace amplicap::oracle
