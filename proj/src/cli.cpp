#include "amplicap/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "amplicap/bounds.hpp"
#include "amplicap/constraints.hpp"
#include "amplicap/errors.hpp"
#include "amplicap/geometry.hpp"
#include "amplicap/harness.hpp"
#include "amplicap/parallel.hpp"
#include "amplicap/validate.hpp"

namespace amplicap::cli {

namespace {

using json = nlohmann::json;

struct BoundsOptions {
    std::string constraint;
    int n = 0;
    double amplitude = 0.0;
    std::optional<double> snr_db;
    std::optional<double> sigma2;
    std::string channel;
    std::optional<std::uint64_t> seed;
    std::size_t samples = EstimatorConfig{}.samples;
    std::uint64_t estimator_seed = EstimatorConfig{}.seed;
    bool json = false;
};

struct SweepOptions {
    std::string config;
    std::string out_dir;
    std::optional<std::string> constraint;
    std::vector<int> n_values;
    std::vector<double> snr_db;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::optional<double> amplitude;
    std::optional<std::size_t> samples;
    std::optional<std::uint64_t> estimator_seed;
};

struct GeometryOptions {
    std::string shape;
    int dim = 0;
    double radius = 1.0;
    std::vector<double> sides;
    std::vector<double> axes;
    double scale = 1.0;
    double delta = 0.5;
    std::size_t samples = EstimatorConfig{}.samples;
    std::uint64_t seed = EstimatorConfig{}.seed;
    bool json = false;
};

struct ValidateOptions {
    std::string suite = "quick";
    std::string inject_fault;
};

std::string num(double v) {
    std::ostringstream s;
    s << std::setprecision(10) << v;
    return s.str();
}

json json_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

int cmd_bounds(const BoundsOptions& o, std::ostream& out) {
    const ConstraintKind kind = parse_constraint_kind(o.constraint);
    const ConstraintRegion region(kind, o.amplitude, o.n);

    ComplexChannel channel = ComplexChannel::identity(o.n);
    std::string channel_source = "identity";
    if (!o.channel.empty() && o.channel != "identity") {
        channel = read_channel_file(o.channel, o.n);
        channel_source = o.channel;
    } else if (o.channel.empty()) {
        const std::uint64_t seed = o.seed.value_or(1);
        channel = random_channel(o.n, seed);
        channel_source = "seed:" + std::to_string(seed);
    }

    const NoiseLevel noise = o.sigma2 ? NoiseLevel(*o.sigma2) : sigma_for_snr(region, *o.snr_db);
    const EstimatorConfig est{o.samples, o.estimator_seed};
    const ChannelContext ctx(realify(channel), est);
    const ConstraintBounds b = constraint_bounds(ctx, region, noise);

    if (o.json) {
        json j;
        j["constraint"] = std::string(to_string(kind));
        j["N"] = o.n;
        j["amplitude"] = o.amplitude;
        j["sigma2"] = noise.sigma2();
        j["snr_db"] = snr_db(region, noise);
        j["channel"] = channel_source;
        j["samples"] = o.samples;
        json bounds = json::object();
        json params = json::object();
        for (const auto& [name, v] : b.upper) {
            bounds[name] = json_number(v.bpcu);
            params[name] = v.params;
        }
        bounds["epi"] = json_number(b.lower.bpcu);
        j["bounds"] = bounds;
        j["params"] = params;
        j["c_upper"] = json_number(b.c_upper);
        j["gap"] = json_number(b.gap());
        j["gap_dual"] = json_number(b.gap_dual());
        out << j.dump(2) << '\n';
        return kOk;
    }

    out << "constraint  " << to_string(kind) << "\n"
        << "N           " << o.n << "\n"
        << "amplitude   " << num(o.amplitude) << "\n"
        << "sigma2      " << num(noise.sigma2()) << "\n"
        << "snr_db      " << num(snr_db(region, noise)) << "\n"
        << "channel     " << channel_source << "\n\n"
        << "bound        bpcu\n";
    for (const auto& [name, v] : b.upper) out << std::left << std::setw(13) << name << num(v.bpcu) << '\n';
    out << std::left << std::setw(13) << "epi" << num(b.lower.bpcu) << '\n'
        << std::left << std::setw(13) << "c_upper" << num(b.c_upper) << '\n'
        << std::left << std::setw(13) << "gap" << num(b.gap()) << "  (c_upper - epi)\n"
        << std::left << std::setw(13) << "gap_dual" << num(b.gap_dual()) << "  (min dual - epi)\n";
    return kOk;
}

int cmd_sweep(const SweepOptions& o, std::ostream& out) {
    SweepConfig cfg = o.config.empty() ? SweepConfig{} : SweepConfig::from_key_values(read_key_values(o.config));
    if (o.constraint) cfg.constraint = parse_constraint_kind(*o.constraint);
    if (!o.n_values.empty()) cfg.n_values = o.n_values;
    if (!o.snr_db.empty()) cfg.snr_db = o.snr_db;
    if (o.trials) cfg.trials = *o.trials;
    if (o.seed) cfg.master_seed = *o.seed;
    if (o.amplitude) cfg.amplitude = *o.amplitude;
    if (o.samples) cfg.estimator.samples = *o.samples;
    if (o.estimator_seed) cfg.estimator.seed = *o.estimator_seed;
    cfg.validate();

    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(o.out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + o.out_dir + "': " + ec.message());

    const auto records = run_sweep(cfg);
    std::size_t excluded = 0;
    const auto summary = summarize(records, &excluded);
    const std::string records_path = (fs::path(o.out_dir) / "records.csv").string();
    const std::string summary_path = (fs::path(o.out_dir) / "summary.csv").string();
    const std::string manifest_path = (fs::path(o.out_dir) / "manifest.txt").string();
    write_records_csv(records_path, records);
    write_summary_csv(summary_path, summary);
    write_manifest(manifest_path, cfg,
                   {{"records", std::to_string(records.size())},
                    {"summary_rows", std::to_string(summary.size())},
                    {"excluded_rows", std::to_string(excluded)}});

    out << "records: " << records.size() << " rows -> " << records_path << '\n'
        << "summary: " << summary.size() << " rows -> " << summary_path << '\n'
        << "excluded: " << excluded << " failed rows\n"
        << "manifest: " << manifest_path << '\n';
    return kOk;
}

int cmd_geometry(const GeometryOptions& o, std::ostream& out) {
    std::optional<IntrinsicVolumes> iv;
    std::optional<IntrinsicVolumes> reference;
    std::optional<double> steiner_reference;
    std::optional<VolumeEstimate> hit_or_miss;
    const EstimatorConfig est{o.samples, o.seed};

    if (o.shape == "ball") {
        if (o.dim < 1) throw ConfigError("ball needs --dim >= 1");
        iv = ball_intrinsic_volumes(o.dim, o.radius);
        reference = iv;
        steiner_reference = kappa(o.dim) * std::pow(o.radius + o.delta, o.dim);
    } else if (o.shape == "box") {
        if (o.sides.empty()) throw ConfigError("box needs --sides");
        iv = box_intrinsic_volumes_exact(o.sides);
        // Axis-aligned parallelepiped face sums divided by 2^{d-j}.
        const int d = static_cast<int>(o.sides.size());
        const Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(o.sides.data(), d);
        const auto faces = log_parallelepiped_face_sums(s.asDiagonal().toDenseMatrix());
        std::vector<double> logs(faces);
        for (int j = 0; j <= d; ++j) logs[static_cast<std::size_t>(j)] -= (d - j) * std::log(2.0);
        logs[0] = 0.0;
        reference = IntrinsicVolumes(std::move(logs));
        if (d <= 3) hit_or_miss = mc_minkowski_volume(BoxBody{o.sides}, o.delta, {1000000, o.seed});
    } else if (o.shape == "ellipsoid") {
        if (o.axes.empty()) throw ConfigError("ellipsoid needs --axes");
        iv = ellipsoid_intrinsic_volumes(o.axes, o.scale, est);
        bool round = true;
        for (double a : o.axes) round = round && a == o.axes.front();
        if (round) reference = ball_intrinsic_volumes(static_cast<int>(o.axes.size()), o.axes.front() * o.scale);
    } else {
        throw ConfigError("unknown shape '" + o.shape + "' (expected ball, box or ellipsoid)");
    }

    const double steiner = steiner_volume(*iv, o.delta);
    const int d = iv->dim();
    if (o.json) {
        json j;
        j["shape"] = o.shape;
        j["dim"] = d;
        j["intrinsic_volumes"] = iv->values();
        j["delta"] = o.delta;
        j["steiner_volume"] = steiner;
        if (reference) {
            j["reference"] = reference->values();
            std::vector<double> errs;
            for (int k = 0; k <= d; ++k) errs.push_back(std::abs(iv->value(k) - reference->value(k)) / reference->value(k));
            j["relative_error"] = errs;
        }
        if (steiner_reference) j["steiner_reference"] = *steiner_reference;
        if (hit_or_miss) j["hit_or_miss"] = {{"volume", hit_or_miss->volume}, {"std_error", hit_or_miss->std_error}};
        out << j.dump(2) << '\n';
        return kOk;
    }

    out << "shape " << o.shape << ", dimension " << d << "\n j  V_j";
    if (reference) out << "            reference      rel_error";
    out << '\n';
    for (int k = 0; k <= d; ++k) {
        out << ' ' << std::left << std::setw(3) << k << std::setw(15) << num(iv->value(k));
        if (reference) {
            out << std::setw(15) << num(reference->value(k))
                << num(std::abs(iv->value(k) - reference->value(k)) / reference->value(k));
        }
        out << '\n';
    }
    out << "steiner volume (delta = " << num(o.delta) << "): " << num(steiner) << '\n';
    if (steiner_reference) out << "closed form:                  " << num(*steiner_reference) << '\n';
    if (hit_or_miss) {
        out << "hit-or-miss:                  " << num(hit_or_miss->volume) << " +- " << num(hit_or_miss->std_error)
            << '\n';
    }
    return kOk;
}

int cmd_validate(const ValidateOptions& o, std::ostream& out) {
    if (o.inject_fault == "kappa") testing::set_kappa_fault(1.01);
    struct Restore {
        ~Restore() { testing::set_kappa_fault(1.0); }
    } restore;

    const auto results = run_validation(o.suite == "full" ? ValidationSuite::Full : ValidationSuite::Quick);
    int failed = 0;
    for (const auto& r : results) {
        out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << "  " << r.detail << '\n';
        failed += r.passed ? 0 : 1;
    }
    out << results.size() - failed << '/' << results.size() << " checks passed\n";
    return failed ? kValidationFailed : kOk;
}

}  // namespace

ComplexChannel read_channel_file(const std::string& path, int n_antennas) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open channel file '" + path + "'");
    Eigen::MatrixXcd h(n_antennas, n_antennas);
    std::vector<bool> seen(static_cast<std::size_t>(n_antennas * n_antennas), false);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#' || line.rfind("i,", 0) == 0) continue;
        std::istringstream fields(line);
        std::string f[4];
        for (auto& s : f) std::getline(fields, s, ',');
        try {
            const int i = std::stoi(f[0]);
            const int j = std::stoi(f[1]);
            if (i < 0 || j < 0 || i >= n_antennas || j >= n_antennas) throw std::out_of_range("index");
            h(i, j) = {std::stod(f[2]), std::stod(f[3])};
            seen[static_cast<std::size_t>(i * n_antennas + j)] = true;
        } catch (const std::logic_error&) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 'i,j,re,im' with 0 <= i,j < N");
        }
    }
    for (bool s : seen) {
        if (!s) throw ConfigError(path + ": channel file does not define all N^2 entries");
    }
    return ComplexChannel(std::move(h));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Capacity bounds for peak-amplitude-constrained MIMO fading channels", "amplicap"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);
    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker thread cap (default: AMPLICAP_THREADS or all cores)");

    BoundsOptions bo;
    auto* bounds = app.add_subcommand("bounds", "Evaluate every bound for one channel instance");
    bounds->add_option("--constraint", bo.constraint, "ta or pa")->required()->check(CLI::IsMember({"ta", "pa"}));
    bounds->add_option("--n", bo.n, "Number of antennas N")->required()->check(CLI::PositiveNumber);
    bounds->add_option("--amplitude", bo.amplitude, "Peak amplitude A")->required()->check(CLI::PositiveNumber);
    auto* snr_opt = bounds->add_option("--snr-db", bo.snr_db, "SNR in dB");
    auto* sigma_opt = bounds->add_option("--sigma2", bo.sigma2, "Per-component noise variance")->check(CLI::PositiveNumber);
    snr_opt->excludes(sigma_opt);
    auto* channel_opt = bounds->add_option("--channel", bo.channel, "Channel file (i,j,re,im rows) or 'identity'");
    bounds->add_option("--seed", bo.seed, "Seed for a random CN(0,2) channel")->excludes(channel_opt);
    bounds->add_option("--samples", bo.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
    bounds->add_option("--estimator-seed", bo.estimator_seed, "Monte Carlo seed");
    bounds->add_flag("--json", bo.json, "Machine-readable output");

    SweepOptions so;
    auto* sweep = app.add_subcommand("sweep", "Run a Monte Carlo gap-vs-SNR sweep");
    sweep->add_option("--config", so.config, "key=value config file (same keys as the manifest)");
    sweep->add_option("--out", so.out_dir, "Output directory")->required();
    sweep->add_option("--constraint", so.constraint, "ta or pa")->check(CLI::IsMember({"ta", "pa"}));
    sweep->add_option("--n", so.n_values, "Antenna counts")->delimiter(',');
    sweep->add_option("--snr-db", so.snr_db, "SNR grid in dB")->delimiter(',');
    sweep->add_option("--trials", so.trials, "Channel realizations per N")->check(CLI::PositiveNumber);
    sweep->add_option("--seed", so.seed, "Master seed");
    sweep->add_option("--amplitude", so.amplitude, "Peak amplitude A")->check(CLI::PositiveNumber);
    sweep->add_option("--samples", so.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
    sweep->add_option("--estimator-seed", so.estimator_seed, "Monte Carlo seed");

    GeometryOptions go;
    auto* geometry = app.add_subcommand("geometry", "Intrinsic volumes and Steiner's formula for simple bodies");
    geometry->add_option("--shape", go.shape, "ball, box or ellipsoid")->required();
    geometry->add_option("--dim", go.dim, "Dimension (ball)");
    geometry->add_option("--radius", go.radius, "Radius (ball)")->check(CLI::PositiveNumber);
    geometry->add_option("--sides", go.sides, "Side lengths (box)")->delimiter(',');
    geometry->add_option("--axes", go.axes, "Semi-axes (ellipsoid)")->delimiter(',');
    geometry->add_option("--scale", go.scale, "Scale applied to the ellipsoid")->check(CLI::PositiveNumber);
    geometry->add_option("--delta", go.delta, "Steiner radius")->check(CLI::NonNegativeNumber);
    geometry->add_option("--samples", go.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
    geometry->add_option("--seed", go.seed, "Monte Carlo seed");
    geometry->add_flag("--json", go.json, "Machine-readable output");

    ValidateOptions vo;
    auto* validate = app.add_subcommand("validate", "Run the oracle and property self-checks");
    validate->add_option("--suite", vo.suite, "quick or full")->check(CLI::IsMember({"quick", "full"}));
    validate->add_option("--inject-fault", vo.inject_fault, "Test hook: corrupt a constant (kappa)")
        ->check(CLI::IsMember({"kappa"}));

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (bounds->parsed() && !bo.snr_db && !bo.sigma2) {
            throw CLI::RequiredError("bounds: exactly one of --snr-db or --sigma2");
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }
    if (threads > 0) set_thread_limit(threads);

    try {
        if (bounds->parsed()) return cmd_bounds(bo, out);
        if (sweep->parsed()) return cmd_sweep(so, out);
        if (geometry->parsed()) return cmd_geometry(go, out);
        return cmd_validate(vo, out);
    } catch (const DegenerateChannel& e) {
        err << "error: " << e.what() << '\n';
        return kDegenerateChannel;
    } catch (const SolverError& e) {
        err << "error: " << e.what() << '\n';
        return kSolverFailure;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
}

}  // namespace amplicap::cli
