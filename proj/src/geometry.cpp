#include "amplicap/geometry.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "amplicap/errors.hpp"
#include "amplicap/parallel.hpp"

namespace amplicap {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Work is split into a fixed number of chunks, each with its own RNG stream,
// so estimates do not depend on the thread count.
constexpr std::size_t kChunks = 64;

std::atomic<double> g_kappa_fault{1.0};

double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

std::pair<std::size_t, std::size_t> chunk_range(std::size_t total, std::size_t chunk,
                                                std::size_t chunks) {
    return {total * chunk / chunks, total * (chunk + 1) / chunks};
}

}  // namespace

void LogSumAccumulator::add(double log_term) {
    if (log_term == kNegInf) return;
    if (log_term <= max_) {
        scaled_sum_ += std::exp(log_term - max_);
    } else {
        scaled_sum_ = scaled_sum_ * std::exp(max_ - log_term) + 1.0;
        max_ = log_term;
    }
}

void LogSumAccumulator::merge(const LogSumAccumulator& other) {
    if (other.max_ == kNegInf) return;
    if (max_ == kNegInf) {
        *this = other;
        return;
    }
    if (other.max_ <= max_) {
        scaled_sum_ += other.scaled_sum_ * std::exp(other.max_ - max_);
    } else {
        scaled_sum_ = scaled_sum_ * std::exp(max_ - other.max_) + other.scaled_sum_;
        max_ = other.max_;
    }
}

double LogSumAccumulator::total() const {
    return max_ == kNegInf ? kNegInf : max_ + std::log(scaled_sum_);
}

double log_sum_exp(std::span<const double> terms) {
    double m = kNegInf;
    for (double t : terms) m = std::max(m, t);
    if (m == kNegInf) return kNegInf;
    double s = 0.0;
    for (double t : terms) s += std::exp(t - m);
    return m + std::log(s);
}

IntrinsicVolumes::IntrinsicVolumes(std::vector<double> log_values)
    : log_values_(std::move(log_values)) {
    if (log_values_.size() < 2) {
        throw ContractViolation("intrinsic volumes need dimension >= 1");
    }
    for (double v : log_values_) {
        if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
            throw ContractViolation("intrinsic volume log values must be finite or -inf");
        }
    }
}

IntrinsicVolumes IntrinsicVolumes::from_linear(std::span<const double> values) {
    std::vector<double> logs;
    logs.reserve(values.size());
    for (double v : values) {
        if (!(v >= 0.0)) throw ContractViolation("intrinsic volumes must be nonnegative");
        logs.push_back(v == 0.0 ? kNegInf : std::log(v));
    }
    return IntrinsicVolumes(std::move(logs));
}

double IntrinsicVolumes::value(int j) const { return std::exp(log_value(j)); }

std::vector<double> IntrinsicVolumes::values() const {
    std::vector<double> out;
    out.reserve(log_values_.size());
    for (double v : log_values_) out.push_back(std::exp(v));
    return out;
}

int IntrinsicVolumes::top_index() const {
    for (int j = dim(); j >= 0; --j) {
        if (log_values_[static_cast<std::size_t>(j)] != kNegInf) return j;
    }
    return -1;
}

IntrinsicVolumes IntrinsicVolumes::scaled(double c) const {
    if (!(c >= 0.0) || !std::isfinite(c)) throw ContractViolation("scale must be >= 0");
    std::vector<double> out(log_values_);
    const double log_c = std::log(c);
    for (std::size_t j = 1; j < out.size(); ++j) {
        if (c == 0.0) {
            out[j] = kNegInf;
        } else if (out[j] != kNegInf) {
            out[j] += static_cast<double>(j) * log_c;
        }
    }
    return IntrinsicVolumes(std::move(out));
}

void EstimatorConfig::validate() const {
    if (samples == 0) throw ConfigError("estimator needs at least one sample");
}

double log_kappa(int i) {
    if (i < 0) throw ContractViolation("kappa index must be >= 0");
    if (i == 0) return 0.0;
    const double base = 0.5 * i * std::log(std::numbers::pi) - std::lgamma(0.5 * i + 1.0);
    return base + std::log(g_kappa_fault.load(std::memory_order_relaxed));
}

double kappa(int i) { return std::exp(log_kappa(i)); }

void testing::set_kappa_fault(double factor) { g_kappa_fault.store(factor); }

IntrinsicVolumes ball_intrinsic_volumes(int d, double radius) {
    if (d < 1) throw ContractViolation("ball dimension must be >= 1");
    if (!(radius > 0.0)) throw ContractViolation("ball radius must be positive");
    std::vector<double> logs(static_cast<std::size_t>(d) + 1);
    const double log_r = std::log(radius);
    for (int j = 0; j <= d; ++j) {
        logs[static_cast<std::size_t>(j)] =
            j == 0 ? 0.0 : log_binomial(d, j) + log_kappa(d) - log_kappa(d - j) + j * log_r;
    }
    return IntrinsicVolumes(std::move(logs));
}

std::vector<IntrinsicVolumes> ellipsoid_prefix_intrinsic_volumes(std::span<const double> semi_axes,
                                                                 std::span<const int> dims,
                                                                 const EstimatorConfig& cfg) {
    cfg.validate();
    const int d = static_cast<int>(semi_axes.size());
    if (d < 1) throw ContractViolation("ellipsoid needs at least one semi-axis");
    for (double l : semi_axes) {
        if (!(l > 0.0) || !std::isfinite(l)) throw ContractViolation("semi-axes must be positive");
    }
    for (int u : dims) {
        if (u < 1 || u > d) throw ContractViolation("prefix dimension out of range");
    }

    // acc[chunk][k][j]: log-sum of sqrt det(Q^T Q) over the chunk's samples
    // for prefix dims[k] and j columns.
    const std::size_t chunks = std::min(kChunks, cfg.samples);
    std::vector<std::vector<std::vector<LogSumAccumulator>>> acc(
        chunks, std::vector<std::vector<LogSumAccumulator>>(dims.size()));

    parallel_for(chunks, [&](std::size_t c) {
        auto& mine = acc[c];
        for (std::size_t k = 0; k < dims.size(); ++k) mine[k].resize(static_cast<std::size_t>(dims[k]));
        std::mt19937_64 rng(derive_seed(cfg.seed, c));
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::MatrixXd g(d, d);
        Eigen::MatrixXd q;
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(d, d);
        const auto [begin, end] = chunk_range(cfg.samples, c, chunks);
        for (std::size_t s = begin; s < end; ++s) {
            for (int col = 0; col < d; ++col) {
                for (int row = 0; row < d; ++row) g(row, col) = semi_axes[row] * normal(rng);
            }
            for (std::size_t k = 0; k < dims.size(); ++k) {
                const int u = dims[k];
                // The top volume is exact; only columns 1..u-1 are needed.
                if (u == 1) continue;
                q = g.topLeftCorner(u, u - 1);
                qr.compute(q);
                const auto& r = qr.matrixQR();
                double log_vol = 0.0;
                for (int j = 1; j < u; ++j) {
                    log_vol += std::log(std::abs(r(j - 1, j - 1)));
                    mine[k][static_cast<std::size_t>(j)].add(log_vol);
                }
            }
        }
    });

    std::vector<IntrinsicVolumes> out;
    out.reserve(dims.size());
    const double log_n = std::log(static_cast<double>(cfg.samples));
    for (std::size_t k = 0; k < dims.size(); ++k) {
        const int u = dims[k];
        std::vector<double> logs(static_cast<std::size_t>(u) + 1, 0.0);
        for (int j = 1; j < u; ++j) {
            LogSumAccumulator total;
            for (std::size_t c = 0; c < chunks; ++c) total.merge(acc[c][k][static_cast<std::size_t>(j)]);
            logs[static_cast<std::size_t>(j)] =
                0.5 * j * std::log(2.0 * std::numbers::pi) - std::lgamma(j + 1.0) + total.total() - log_n;
        }
        double log_top = log_kappa(u);
        for (int i = 0; i < u; ++i) log_top += std::log(semi_axes[static_cast<std::size_t>(i)]);
        logs[static_cast<std::size_t>(u)] = log_top;
        out.emplace_back(std::move(logs));
    }
    return out;
}

IntrinsicVolumes ellipsoid_intrinsic_volumes(std::span<const double> semi_axes, double scale,
                                             const EstimatorConfig& cfg) {
    if (!(scale > 0.0)) throw ContractViolation("ellipsoid scale must be positive");
    const int dims[] = {static_cast<int>(semi_axes.size())};
    return ellipsoid_prefix_intrinsic_volumes(semi_axes, dims, cfg).front().scaled(scale);
}

std::vector<double> log_parallelepiped_face_sums(const Eigen::MatrixXd& s) {
    const int d = static_cast<int>(s.cols());
    if (d < 1 || s.rows() != d) throw ContractViolation("face sums need a square matrix");
    {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(s);
        const auto& sv = svd.singularValues();
        if (!(sv(0) > 0.0) || sv(d - 1) / sv(0) <= 1e-12) {
            throw DegenerateChannel("parallelepiped matrix is singular");
        }
    }

    // Depth-first enumeration of column subsets in lexicographic order. The
    // Cholesky factor of the Gram submatrix is extended by one row per level,
    // so the Gram volume of each subset costs O(j^2).
    const Eigen::MatrixXd gram = s.transpose() * s;
    Eigen::MatrixXd chol = Eigen::MatrixXd::Zero(d, d);
    std::vector<int> members(static_cast<std::size_t>(d));
    std::vector<LogSumAccumulator> acc(static_cast<std::size_t>(d) + 1);

    auto subset_log_volume = [&](int depth) {
        Eigen::MatrixXd sub(d, depth);
        for (int i = 0; i < depth; ++i) sub.col(i) = s.col(members[static_cast<std::size_t>(i)]);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(sub);
        double lv = 0.0;
        for (int i = 0; i < depth; ++i) lv += std::log(std::abs(qr.matrixQR()(i, i)));
        return lv;
    };

    auto visit = [&](auto&& self, int start, int depth, double log_vol) -> void {
        for (int k = start; k < d; ++k) {
            members[static_cast<std::size_t>(depth)] = k;
            double diag2 = gram(k, k);
            for (int i = 0; i < depth; ++i) {
                double v = gram(k, members[static_cast<std::size_t>(i)]);
                for (int m = 0; m < i; ++m) v -= chol(depth, m) * chol(i, m);
                v /= chol(i, i);
                chol(depth, i) = v;
                diag2 -= v * v;
            }
            double child_log_vol;
            if (diag2 > 1e-14 * gram(k, k)) {
                chol(depth, depth) = std::sqrt(diag2);
                child_log_vol = log_vol + std::log(chol(depth, depth));
            } else {
                child_log_vol = subset_log_volume(depth + 1);
                chol(depth, depth) = std::exp(child_log_vol - log_vol);
            }
            acc[static_cast<std::size_t>(depth) + 1].add(child_log_vol);
            if (depth + 1 < d) self(self, k + 1, depth + 1, child_log_vol);
        }
    };
    visit(visit, 0, 0, 0.0);

    std::vector<double> out(static_cast<std::size_t>(d) + 1);
    for (int j = 0; j < d; ++j) {
        const double subsets = j == 0 ? 0.0 : acc[static_cast<std::size_t>(j)].total();
        out[static_cast<std::size_t>(j)] = (d - j) * std::numbers::ln2 + subsets;
    }
    out[static_cast<std::size_t>(d)] = std::log(std::abs(s.partialPivLu().determinant()));
    return out;
}

double parallelepiped_face_sum(const Eigen::MatrixXd& s, int j) {
    if (j < 0 || j > s.cols()) throw ContractViolation("face dimension out of range");
    return std::exp(log_parallelepiped_face_sums(s)[static_cast<std::size_t>(j)]);
}

IntrinsicVolumes box_intrinsic_volumes_exact(std::span<const double> sides) {
    if (sides.empty()) throw ContractViolation("box needs at least one side");
    const std::size_t d = sides.size();
    // log e_j(sides) by the recurrence e_j <- e_j + s * e_{j-1}.
    std::vector<double> e(d + 1, kNegInf);
    e[0] = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        if (!(sides[i] > 0.0)) throw ContractViolation("box sides must be positive");
        const double ls = std::log(sides[i]);
        for (std::size_t j = i + 1; j >= 1; --j) {
            const double terms[] = {e[j], e[j - 1] + ls};
            e[j] = log_sum_exp(terms);
        }
    }
    return IntrinsicVolumes(std::move(e));
}

double log_steiner_volume(const IntrinsicVolumes& iv, double delta) {
    if (!(delta >= 0.0)) throw ContractViolation("Steiner radius must be >= 0");
    const int d = iv.dim();
    if (delta == 0.0) return iv.log_value(d);
    const double log_delta = std::log(delta);
    std::vector<double> terms(static_cast<std::size_t>(d) + 1);
    for (int j = 0; j <= d; ++j) {
        terms[static_cast<std::size_t>(j)] = iv.log_value(j) + log_kappa(d - j) + (d - j) * log_delta;
    }
    return log_sum_exp(terms);
}

double steiner_volume(const IntrinsicVolumes& iv, double delta) {
    return std::exp(log_steiner_volume(iv, delta));
}

int body_dim(const SimpleBody& body) {
    return std::visit(
        [](const auto& b) -> int {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, BoxBody>) {
                return static_cast<int>(b.sides.size());
            } else {
                return b.dim;
            }
        },
        body);
}

double distance_to_body(const SimpleBody& body, std::span<const double> x) {
    double norm2 = 0.0;
    if (const auto* box = std::get_if<BoxBody>(&body)) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double excess = std::abs(x[i]) - 0.5 * box->sides[i];
            if (excess > 0.0) norm2 += excess * excess;
        }
        return std::sqrt(norm2);
    }
    for (double v : x) norm2 += v * v;
    const double r = std::holds_alternative<BallBody>(body) ? std::get<BallBody>(body).radius : 0.0;
    return std::max(0.0, std::sqrt(norm2) - r);
}

VolumeEstimate mc_minkowski_volume(const SimpleBody& body, double delta, const EstimatorConfig& cfg) {
    cfg.validate();
    if (!(delta >= 0.0)) throw ContractViolation("delta must be >= 0");
    const int d = body_dim(body);
    if (d < 1 || d > 3) throw ContractViolation("hit-or-miss oracle supports dimensions 1..3");

    std::vector<double> half(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        double h = 0.0;
        if (const auto* box = std::get_if<BoxBody>(&body)) {
            if (!(box->sides[static_cast<std::size_t>(i)] >= 0.0)) throw ContractViolation("bad box side");
            h = 0.5 * box->sides[static_cast<std::size_t>(i)];
        } else if (const auto* ball = std::get_if<BallBody>(&body)) {
            h = ball->radius;
        }
        half[static_cast<std::size_t>(i)] = h + delta;
    }
    double box_volume = 1.0;
    for (double h : half) box_volume *= 2.0 * h;
    if (box_volume == 0.0) return {0.0, 0.0};

    const std::size_t chunks = std::min(kChunks, cfg.samples);
    std::vector<std::size_t> hits(chunks, 0);
    parallel_for(chunks, [&](std::size_t c) {
        std::mt19937_64 rng(derive_seed(cfg.seed, c));
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        double x[3];
        const auto [begin, end] = chunk_range(cfg.samples, c, chunks);
        std::size_t local = 0;
        for (std::size_t s = begin; s < end; ++s) {
            for (int i = 0; i < d; ++i) x[i] = half[static_cast<std::size_t>(i)] * unit(rng);
            if (distance_to_body(body, std::span<const double>(x, static_cast<std::size_t>(d))) <= delta) ++local;
        }
        hits[c] = local;
    });

    std::size_t total = 0;
    for (auto h : hits) total += h;
    const double n = static_cast<double>(cfg.samples);
    const double p = static_cast<double>(total) / n;
    return {box_volume * p, box_volume * std::sqrt(p * (1.0 - p) / n)};
}

}  // namespace amplicap
