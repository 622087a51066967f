// Acceptance checks. One PASS/FAIL line per criterion; exits non-zero when
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "amplicap/bounds.hpp"
#include "amplicap/constraints.hpp"
#include "amplicap/harness.hpp"
#include "amplicap/oracles.hpp"
#include "amplicap/parallel.hpp"
#include "amplicap/piecewise.hpp"

using namespace amplicap;
using std::numbers::pi;

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome geometry_oracle() {
    double worst = 0, slowest = 0;
    for (int d : {2, 4, 8}) {
        const std::vector<double> axes(static_cast<std::size_t>(d), 1.0);
        const auto t0 = std::chrono::steady_clock::now();
        const auto est = ellipsoid_intrinsic_volumes(axes, 1.0, {200000, 1});
        slowest = std::max(slowest, seconds_since(t0));
        const auto ref = ball_intrinsic_volumes(d, 1.0);
        for (int j = 0; j <= d; ++j) worst = std::max(worst, std::abs(est.value(j) / ref.value(j) - 1));
    }
    return {worst < 0.02 && slowest < 10.0,
            fmt("max rel err %.4f (tol 0.02), slowest d %.2fs (limit 10s)", worst, slowest)};
}

Outcome steiner_vs_hit_or_miss() {
    const EstimatorConfig cfg{1000000, 2024};
    const double box_exact = steiner_volume(box_intrinsic_volumes_exact(std::vector<double>{2, 1}), 0.5);
    const double box_mc = mc_minkowski_volume(BoxBody{{2.0, 1.0}}, 0.5, cfg).volume;
    const double disk_exact = steiner_volume(ball_intrinsic_volumes(2, 1.0), 0.3);
    const double disk_mc = mc_minkowski_volume(BallBody{2, 1.0}, 0.3, cfg).volume;
    const double e1 = std::abs(box_mc / 5.7854 - 1);
    const double e2 = std::abs(disk_mc / (1.69 * pi) - 1);
    const bool closed = std::abs(box_exact - 5.7854) < 1e-4 && std::abs(disk_exact - 1.69 * pi) < 1e-12;
    return {closed && e1 < 0.01 && e2 < 0.01,
            fmt("box rel err %.4f, disk rel err %.4f (tol 0.01), box closed form %.5f", e1, e2, box_exact)};
}

Outcome conjugate_ell_oracle() {
    const std::vector<IntrinsicVolumes> cases{
        IntrinsicVolumes::from_linear(std::vector<double>{1, 10 * pi, 100 * pi}),
        ball_intrinsic_volumes(2, 1.0),
        IntrinsicVolumes::from_linear(std::vector<double>{1, 4.8442, 2 * pi}),
    };
    double conj_err = 0, ell_err = 0;
    for (const auto& iv : cases) {
        for (int k = 1; k <= 9; ++k) {
            const double theta = 0.1 * k;
            conj_err = std::max(conj_err, std::abs(conjugate(iv, theta).value - oracle::grid_conjugate(iv, theta)));
        }
        for (double sigma2 : {1.0, 0.01}) {
            ell_err = std::max(ell_err, std::abs(ell(iv, 1, NoiseLevel(sigma2)).value - oracle::grid_ell(iv, sigma2)));
        }
    }
    return {conj_err < 1e-6 && ell_err < 1e-6,
            fmt("max |conjugate - grid| %.2e, max |ell - grid| %.2e nats (tol 1e-6)", conj_err, ell_err)};
}

Outcome asymptotic_tightness() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    double worst_ratio = 0;
    int n_fail_monotone = 0;
    for (int n = 1; n <= 3; ++n) {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const ChannelContext ctx(realify(random_channel(n, seed)), {200000, seed});
            const ConstraintRegion region(ConstraintKind::TA, 1.0, n);
            auto gap_at = [&](double snr) {
                const auto b = ta_bounds(ctx, 1.0, sigma_for_snr(region, snr));
                return b.upper.at("sp").bpcu - b.lower.bpcu;
            };
            const double g80 = gap_at(80), g20 = gap_at(20);
            worst_ratio = std::max(worst_ratio, g80 / (0.05 * n));
            if (!(g80 < 0.05 * n)) ok = false;
            if (!(g80 < g20)) {
                ok = false;
                ++n_fail_monotone;
            }
        }
    }
    const double secs = seconds_since(t0);
    return {ok && secs < 300,
            fmt("worst (sp-epi)@80dB / 0.05N = %.3f, non-decreasing cases %.0f, %.1fs (limit 300s)", worst_ratio,
                n_fail_monotone, secs)};
}

IntrinsicVolumes inflate_middle(const IntrinsicVolumes& iv, double factor) {
    auto v = iv.log_values();
    for (std::size_t j = 1; j + 1 < v.size(); ++j) v[j] += std::log(factor);
    return IntrinsicVolumes(v);
}

Outcome bound_ordering() {
    constexpr double slack = 1e-6;
    SweepConfig ta;
    ta.n_values = {1, 2, 3, 4};
    ta.trials = 3;
    ta.estimator.samples = 50000;
    SweepConfig pa = ta;
    pa.constraint = ConstraintKind::PA;

    int violations = 0, rows = 0;
    auto check = [&](bool ok) { violations += ok ? 0 : 1; };

    const auto ta_rows = run_sweep(ta);
    std::map<std::uint64_t, std::vector<const GapRecord*>> by_trial;
    for (const auto& r : ta_rows) {
        ++rows;
        check(r.status == "ok");
        check(r.epi <= r.psp + slack);
        check(r.epi <= r.sp + slack);
        check(r.psp <= r.sp + slack);
        by_trial[r.trial_seed].push_back(&r);
    }
    // G-SP with inflated middle coefficients, on the same estimated volumes.
    for (const auto& [seed, trial_rows] : by_trial) {
        const int n = trial_rows.front()->n;
        EstimatorConfig est = ta.estimator;
        est.seed = derive_seed(ta.estimator.seed, seed);
        const ChannelContext ctx(realify(random_channel(n, seed)), est);
        const auto iv = ctx.split_geometry().strong_volumes(2 * n, ta.amplitude);
        const auto inflated = inflate_middle(iv, 2.0);
        const ConstraintRegion region(ConstraintKind::TA, ta.amplitude, n);
        for (const auto* r : trial_rows) {
            const NoiseLevel noise = sigma_for_snr(region, r->snr_db);
            const double sp = sp_bound(iv, n, noise).bpcu;
            check(std::abs(sp - r->sp) <= slack);
            check(sp <= gsp_bound(inflated, n, noise).bpcu + slack);
        }
    }
    for (const auto& r : run_sweep(pa)) {
        ++rows;
        check(r.status == "ok");
        check(r.c_upper <= std::min(r.gsp, r.psp) + slack);
        check(r.epi <= r.c_upper + slack);
        check(r.epi <= r.sp + slack);
        check(r.epi <= r.gsp + slack);
    }
    return {violations == 0, fmt("%.0f rows (TA and PA, N=1..4), %.0f violations beyond 1e-6", rows, violations)};
}

Outcome duality_dominance() {
    SweepConfig cfg;
    cfg.n_values = {2, 3};
    cfg.trials = 10;
    cfg.estimator.samples = 50000;
    const auto rows = run_sweep(cfg);
    std::map<double, std::pair<double, double>> sums;
    std::map<double, int> counts;
    for (const auto& r : rows) {
        if (r.snr_db < 0 || r.status != "ok") continue;
        sums[r.snr_db].first += r.gap_dual;
        sums[r.snr_db].second += r.gap;
        counts[r.snr_db] += 1;
    }
    int bad = 0;
    double tightest = std::numeric_limits<double>::infinity();
    for (const auto& [snr, s] : sums) {
        const double margin = (s.first - s.second) / counts[snr];
        tightest = std::min(tightest, margin);
        if (margin < 0) ++bad;
    }
    return {bad == 0 && !sums.empty(),
            fmt("%.0f SNR points >= 0 dB, %.0f where dual gap < P-SP gap, smallest margin %.4f bpcu",
                double(sums.size()), bad, tightest)};
}

Outcome low_snr() {
    double worst = 0;
    int u0 = 0, total = 0;
    for (int n = 1; n <= 4; ++n) {
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const SplitGeometry geo(spectral(realify(random_channel(n, seed))), {50000, seed});
            const ConstraintRegion region(ConstraintKind::TA, 1.0, n);
            const NoiseLevel noise = sigma_for_snr(region, -50);
            const auto b = psp_bound(geo, region.r_max(), noise);
            const double gaussian =
                (split_entropy(geo, 0, region.r_max(), noise).entropy - noise_entropy(n, noise)) / std::numbers::ln2;
            worst = std::max(worst, std::abs(b.bpcu - gaussian));
            u0 += b.params.at("u_star") == 0.0 ? 1 : 0;
            ++total;
        }
    }
    return {worst < 1e-3, fmt("max |psp - water-filling| = %.2e bpcu (tol 1e-3), u*=0 in %.0f/%.0f", worst, u0, total)};
}

Outcome waterfilling() {
    std::mt19937_64 rng(mix_seed(31337));
    std::uniform_real_distribution<double> gain(0.01, 3.0), budget(0.0, 5.0), noise(0.05, 2.0);
    double worst_budget = 0, worst_slack = 0, worst_dominance = 0;
    for (int inst = 0; inst < 100; ++inst) {
        const std::vector<double> g{gain(rng), gain(rng), gain(rng)};
        const double p = budget(rng), s2 = noise(rng);
        const auto a = waterfill(g, p, s2);
        double used = 0, value = 0;
        for (std::size_t j = 0; j < 3; ++j) {
            used += a.powers[j];
            value += 0.5 * std::log(g[j] * a.powers[j] + s2);
            const double floor = s2 / g[j];
            // Active channels sit at the water level; inactive ones have floor above it.
            const double slack = a.powers[j] > 0 ? std::abs(a.powers[j] + floor - a.water_level)
                                                 : std::max(0.0, a.water_level - floor);
            worst_slack = std::max(worst_slack, slack);
        }
        worst_budget = std::max(worst_budget, std::abs(used - p));
        const double best = oracle::best_random_allocation(g, p, s2, 10000, mix_seed(inst));
        worst_dominance = std::max(worst_dominance, best - value);
    }
    return {worst_budget < 1e-9 && worst_slack < 1e-9 && worst_dominance <= 1e-12,
            fmt("budget err %.1e, slackness err %.1e (tol 1e-9), max random excess %.1e", worst_budget, worst_slack,
                worst_dominance)};
}

Outcome pa_ta_coincidence() {
    const auto h = realify(ComplexChannel::identity(1));
    const ChannelContext ctx(h, {200000, 1});
    double worst = 0;
    for (double snr : {-20.0, 0.0, 20.0, 50.0}) {
        const ConstraintRegion region(ConstraintKind::TA, 1.0, 1);
        const NoiseLevel noise = sigma_for_snr(region, snr);
        const auto ta = ta_bounds(ctx, 1.0, noise);
        const auto pa = pa_bounds(ctx, 1.0, noise);
        auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
        for (const char* name : {"sp", "psp", "dual_ball", "dual_box"}) {
            worst = std::max(worst, rel(pa.upper.at(name).bpcu, ta.upper.at(name).bpcu));
        }
        worst = std::max(worst, rel(pa.c_upper, ta.c_upper));
        worst = std::max(worst, rel(pa.lower.bpcu, ta.lower.bpcu));
    }
    return {worst < 0.02, fmt("max relative difference %.2e (tol 0.02)", worst)};
}

Outcome determinism() {
    SweepConfig cfg;
    cfg.n_values = {2, 3};
    cfg.trials = 2;
    cfg.snr_db = {-10, 10, 30};
    cfg.estimator.samples = 20000;
    auto csv = [&](unsigned threads) {
        set_thread_limit(threads);
        std::ostringstream s;
        write_records_csv(s, run_sweep(cfg));
        return s.str();
    };
    const std::string a = csv(1), b = csv(1), c = csv(4);
    set_thread_limit(0);
    return {a == b && a == c, fmt("%.0f bytes; rerun identical %.0f, 4-thread run identical %.0f", double(a.size()),
                                  a == b, a == c)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"geometry_oracle", geometry_oracle},
        {"steiner_vs_hit_or_miss", steiner_vs_hit_or_miss},
        {"conjugate_ell_grid_oracle", conjugate_ell_oracle},
        {"asymptotic_tightness", asymptotic_tightness},
        {"bound_ordering", bound_ordering},
        {"duality_dominance", duality_dominance},
        {"low_snr_waterfilling", low_snr},
        {"waterfilling_kkt_dominance", waterfilling},
        {"pa_ta_coincidence_n1", pa_ta_coincidence},
        {"sweep_determinism", determinism},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s  %-28s %s\n", o.passed ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
        failed += o.passed ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
