#include "amplicap/harness.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <tuple>

#include "amplicap/constraints.hpp"
#include "amplicap/errors.hpp"
#include "amplicap/parallel.hpp"

#ifndef AMPLICAP_VERSION
#define AMPLICAP_VERSION "0.0.0"
#endif

namespace amplicap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& text, const std::string& column) {
    if (text == "nan") return kNaN;
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
        throw SchemaError("column '" + column + "': cannot parse '" + text + "' as a number");
    }
    return v;
}

long long parse_integer(const std::string& text, const std::string& column) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
        throw SchemaError("column '" + column + "': cannot parse '" + text + "' as an integer");
    }
    return v;
}

std::uint64_t parse_u64(const std::string& text, const std::string& column) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (text.empty() || text[0] == '-' || end != text.c_str() + text.size() || errno == ERANGE) {
        throw SchemaError("column '" + column + "': cannot parse '" + text + "' as an unsigned integer");
    }
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

/// Reads a CSV with a header and returns rows as column-name -> text maps.
/// Every name in `required` must be present.
class CsvTable {
public:
    CsvTable(std::istream& in, const std::vector<std::string>& required) {
        std::string line;
        if (!std::getline(in, line)) throw SchemaError("empty CSV: missing header row");
        const auto header = split(trim(line), ',');
        for (std::size_t i = 0; i < header.size(); ++i) index_[trim(header[i])] = i;
        for (const auto& name : required) {
            if (!index_.count(name)) throw SchemaError("CSV is missing column '" + name + "'");
        }
        std::size_t line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            line = trim(line);
            if (line.empty()) continue;
            auto fields = split(line, ',');
            if (fields.size() != header.size()) {
                throw SchemaError("CSV line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
            }
            rows_.push_back(std::move(fields));
        }
    }

    std::size_t size() const { return rows_.size(); }
    const std::string& at(std::size_t row, const std::string& column) const {
        return rows_[row][index_.at(column)];
    }

private:
    std::map<std::string, std::size_t> index_;
    std::vector<std::vector<std::string>> rows_;
};

std::vector<std::string> header_columns(const char* header) { return split(header, ','); }

std::string join_doubles(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_double(values[i]);
    }
    return out;
}

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

std::ifstream open_for_read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return in;
}

void finish_write(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace

std::string software_version() { return AMPLICAP_VERSION; }

std::vector<double> SweepConfig::default_snr_grid() {
    std::vector<double> grid;
    for (int i = 0; i < 37; ++i) grid.push_back(-50.0 + 100.0 * i / 36.0);
    return grid;
}

void SweepConfig::validate() const {
    if (n_values.empty()) throw ConfigError("sweep needs at least one N");
    if (snr_db.empty()) throw ConfigError("sweep needs at least one SNR point");
    if (trials < 1) throw ConfigError("sweep needs trials >= 1");
    if (!(amplitude > 0.0)) throw ConfigError("amplitude must be positive");
    for (int n : n_values) {
        if (n < 1) throw ConfigError("N must be >= 1");
    }
    for (double s : snr_db) {
        if (!std::isfinite(s)) throw ConfigError("SNR grid values must be finite");
    }
    estimator.validate();
    solver.validate();
}

std::map<std::string, std::string> SweepConfig::to_key_values() const {
    std::string ns;
    for (std::size_t i = 0; i < n_values.size(); ++i) ns += (i ? "," : "") + std::to_string(n_values[i]);
    return {
        {"constraint", std::string(to_string(constraint))},
        {"n_values", ns},
        {"snr_db", join_doubles(snr_db)},
        {"trials", std::to_string(trials)},
        {"master_seed", std::to_string(master_seed)},
        {"amplitude", format_double(amplitude)},
        {"samples", std::to_string(estimator.samples)},
        {"estimator_seed", std::to_string(estimator.seed)},
    };
}

SweepConfig SweepConfig::from_key_values(const std::map<std::string, std::string>& kv) {
    SweepConfig cfg;
    auto get = [&](const char* key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    try {
        if (auto v = get("constraint")) cfg.constraint = parse_constraint_kind(*v);
        if (auto v = get("n_values")) {
            cfg.n_values.clear();
            for (const auto& f : split(*v, ',')) cfg.n_values.push_back(static_cast<int>(parse_integer(trim(f), "n_values")));
        }
        if (auto v = get("snr_db")) {
            cfg.snr_db.clear();
            for (const auto& f : split(*v, ',')) cfg.snr_db.push_back(parse_double(trim(f), "snr_db"));
        }
        if (auto v = get("trials")) cfg.trials = static_cast<int>(parse_integer(*v, "trials"));
        if (auto v = get("master_seed")) cfg.master_seed = parse_u64(*v, "master_seed");
        if (auto v = get("amplitude")) cfg.amplitude = parse_double(*v, "amplitude");
        if (auto v = get("samples")) {
            const long long s = parse_integer(*v, "samples");
            if (s < 1) throw ConfigError("samples must be >= 1");
            cfg.estimator.samples = static_cast<std::size_t>(s);
        }
        if (auto v = get("estimator_seed")) cfg.estimator.seed = parse_u64(*v, "estimator_seed");
    } catch (const SchemaError& e) {
        throw ConfigError(e.what());
    }
    cfg.validate();
    return cfg;
}

ComplexChannel random_channel(int n_antennas, std::uint64_t seed) {
    if (n_antennas < 1) throw ContractViolation("N must be >= 1");
    std::mt19937_64 rng(mix_seed(seed));
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXcd h(n_antennas, n_antennas);
    for (int i = 0; i < n_antennas; ++i) {
        for (int j = 0; j < n_antennas; ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            h(i, j) = {re, im};
        }
    }
    return ComplexChannel(std::move(h));
}

std::uint64_t trial_seed(std::uint64_t master_seed, int n_antennas, int trial) {
    return derive_seed(derive_seed(master_seed, static_cast<std::uint64_t>(n_antennas)),
                       static_cast<std::uint64_t>(trial));
}

namespace {

GapRecord failed_record(ConstraintKind kind, int n, std::uint64_t seed, double snr, std::string status) {
    return {kind, n, seed, snr, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, std::move(status)};
}

std::string status_for(const std::exception& e) {
    if (dynamic_cast<const SolverError*>(&e)) return "solver_error";
    if (dynamic_cast<const DegenerateChannel*>(&e)) return "degenerate_channel";
    return "error";
}

}  // namespace

std::vector<GapRecord> run_sweep(const SweepConfig& cfg_in, const SweepProgress& progress) {
    SweepConfig cfg = cfg_in;
    cfg.validate();
    std::sort(cfg.snr_db.begin(), cfg.snr_db.end());

    struct Item {
        int n;
        int trial;
    };
    std::vector<Item> items;
    for (int n : cfg.n_values) {
        for (int t = 0; t < cfg.trials; ++t) items.push_back({n, t});
    }

    std::vector<std::vector<GapRecord>> results(items.size());
    parallel_for(items.size(), [&](std::size_t i) {
        const auto [n, trial] = items[i];
        const std::uint64_t seed = trial_seed(cfg.master_seed, n, trial);
        auto& rows = results[i];
        try {
            EstimatorConfig est = cfg.estimator;
            est.seed = derive_seed(cfg.estimator.seed, seed);
            const ChannelContext ctx(realify(random_channel(n, seed)), est);
            const ConstraintRegion region(cfg.constraint, cfg.amplitude, n);
            for (double snr : cfg.snr_db) {
                try {
                    const auto b = constraint_bounds(ctx, region, sigma_for_snr(region, snr), cfg.solver);
                    const auto value = [&](const char* name) {
                        auto it = b.upper.find(name);
                        return it == b.upper.end() ? kNaN : it->second.bpcu;
                    };
                    rows.push_back({cfg.constraint, n, seed, snr, value("sp"), value("gsp"), value("psp"),
                                    value("dual_ball"), value("dual_box"), b.lower.bpcu, b.c_upper, b.gap(),
                                    b.gap_dual(), "ok"});
                } catch (const Error& e) {
                    rows.push_back(failed_record(cfg.constraint, n, seed, snr, status_for(e)));
                }
            }
        } catch (const Error& e) {
            rows.clear();
            for (double snr : cfg.snr_db) rows.push_back(failed_record(cfg.constraint, n, seed, snr, status_for(e)));
        }
        if (progress) progress(n, trial);
    });

    std::vector<GapRecord> out;
    for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
    return out;
}

std::vector<SummaryRow> summarize(const std::vector<GapRecord>& records, std::size_t* excluded) {
    if (records.empty()) throw ContractViolation("cannot summarize an empty record set");
    struct Acc {
        std::vector<double> gaps, ratios, dual;
    };
    using Key = std::tuple<int, int, double>;
    std::map<Key, Acc> groups;
    std::size_t skipped = 0;
    for (const auto& r : records) {
        const Key key{static_cast<int>(r.constraint), r.n, r.snr_db};
        auto& acc = groups[key];
        if (r.status != "ok") {
            ++skipped;
            continue;
        }
        acc.gaps.push_back(r.gap);
        acc.ratios.push_back(r.c_upper > 0.0 ? r.gap / r.c_upper : 0.0);
        acc.dual.push_back(r.gap_dual);
    }
    if (excluded) *excluded = skipped;
    if (skipped > 0) std::clog << "summarize: excluded " << skipped << " failed rows\n";

    auto mean = [](const std::vector<double>& v) {
        if (v.empty()) return kNaN;
        double s = 0.0;
        for (double x : v) s += x;
        return s / double(v.size());
    };
    std::vector<SummaryRow> out;
    for (const auto& [key, acc] : groups) {
        const auto [kind, n, snr] = key;
        const double m = mean(acc.gaps);
        double var = 0.0;
        for (double g : acc.gaps) var += (g - m) * (g - m);
        const double sd = acc.gaps.empty() ? kNaN : std::sqrt(var / double(acc.gaps.size()));
        out.push_back({static_cast<ConstraintKind>(kind), n, snr, m, sd, m / n, mean(acc.ratios),
                       mean(acc.dual) / n});
    }
    return out;
}

void write_records_csv(std::ostream& out, const std::vector<GapRecord>& records) {
    out << kRecordsHeader << '\n';
    for (const auto& r : records) {
        out << to_string(r.constraint) << ',' << r.n << ',' << r.trial_seed << ',' << format_double(r.snr_db) << ','
            << format_double(r.sp) << ',' << format_double(r.gsp) << ',' << format_double(r.psp) << ','
            << format_double(r.dual_ball) << ',' << format_double(r.dual_box) << ',' << format_double(r.epi) << ','
            << format_double(r.c_upper) << ',' << format_double(r.gap) << ',' << format_double(r.gap_dual) << ','
            << r.status << '\n';
    }
}

std::vector<GapRecord> read_records_csv(std::istream& in) {
    const CsvTable table(in, header_columns(kRecordsHeader));
    std::vector<GapRecord> out;
    out.reserve(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        auto num = [&](const char* c) { return parse_double(table.at(i, c), c); };
        GapRecord r;
        try {
            r.constraint = parse_constraint_kind(table.at(i, "constraint"));
        } catch (const ConfigError& e) {
            throw SchemaError(std::string("column 'constraint': ") + e.what());
        }
        r.n = static_cast<int>(parse_integer(table.at(i, "N"), "N"));
        r.trial_seed = parse_u64(table.at(i, "trial_seed"), "trial_seed");
        r.snr_db = num("snr_db");
        r.sp = num("sp");
        r.gsp = num("gsp");
        r.psp = num("psp");
        r.dual_ball = num("dual_ball");
        r.dual_box = num("dual_box");
        r.epi = num("epi");
        r.c_upper = num("c_upper");
        r.gap = num("gap");
        r.gap_dual = num("gap_dual");
        r.status = table.at(i, "status");
        out.push_back(std::move(r));
    }
    return out;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    out << kSummaryHeader << '\n';
    for (const auto& r : rows) {
        out << to_string(r.constraint) << ',' << r.n << ',' << format_double(r.snr_db) << ','
            << format_double(r.mean_gap) << ',' << format_double(r.std_gap) << ',' << format_double(r.mean_gap_per_n)
            << ',' << format_double(r.mean_gap_ratio) << ',' << format_double(r.mean_gap_dual_per_n) << '\n';
    }
}

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
    const CsvTable table(in, header_columns(kSummaryHeader));
    std::vector<SummaryRow> out;
    for (std::size_t i = 0; i < table.size(); ++i) {
        auto num = [&](const char* c) { return parse_double(table.at(i, c), c); };
        SummaryRow r;
        try {
            r.constraint = parse_constraint_kind(table.at(i, "constraint"));
        } catch (const ConfigError& e) {
            throw SchemaError(std::string("column 'constraint': ") + e.what());
        }
        r.n = static_cast<int>(parse_integer(table.at(i, "N"), "N"));
        r.snr_db = num("snr_db");
        r.mean_gap = num("mean_gap");
        r.std_gap = num("std_gap");
        r.mean_gap_per_n = num("mean_gap_per_N");
        r.mean_gap_ratio = num("mean_gap_ratio");
        r.mean_gap_dual_per_n = num("mean_gap_dual_per_N");
        out.push_back(r);
    }
    return out;
}

void write_records_csv(const std::string& path, const std::vector<GapRecord>& records) {
    auto out = open_for_write(path);
    write_records_csv(out, records);
    finish_write(out, path);
}

std::vector<GapRecord> read_records_csv(const std::string& path) {
    auto in = open_for_read(path);
    return read_records_csv(in);
}

void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows) {
    auto out = open_for_write(path);
    write_summary_csv(out, rows);
    finish_write(out, path);
}

std::vector<SummaryRow> read_summary_csv(const std::string& path) {
    auto in = open_for_read(path);
    return read_summary_csv(in);
}

void write_manifest(const std::string& path, const SweepConfig& cfg, const std::map<std::string, std::string>& extra) {
    auto out = open_for_write(path);
    out << "# amplicap run manifest\n";
    out << "version=" << software_version() << '\n';
    out << "seed_rule=trial_seed=derive(derive(master_seed,N),trial); estimator_seed=derive(estimator_seed,trial_seed)\n";
    out << "gap_reference=epi\n";
    for (const auto& [k, v] : cfg.to_key_values()) out << k << '=' << v << '\n';
    for (const auto& [k, v] : extra) out << k << '=' << v << '\n';
    finish_write(out, path);
}

std::map<std::string, std::string> read_key_values(const std::string& path) {
    auto in = open_for_read(path);
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value");
        }
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

}  // namespace amplicap
