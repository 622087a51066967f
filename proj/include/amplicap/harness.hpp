#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "amplicap/bounds.hpp"
#include "amplicap/channel.hpp"
#include "amplicap/geometry.hpp"

namespace amplicap {

struct SweepConfig {
    ConstraintKind constraint = ConstraintKind::TA;
    std::vector<int> n_values{2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<double> snr_db = default_snr_grid();
    int trials = 20;
    std::uint64_t master_seed = 1;
    double amplitude = 1.0;
    EstimatorConfig estimator;
    SolverConfig solver;

    /// 37 points evenly spaced on [-50, 50] dB.
    static std::vector<double> default_snr_grid();
    void validate() const;

    /// key=value lines; the same keys the run manifest records.
    std::map<std::string, std::string> to_key_values() const;
    static SweepConfig from_key_values(const std::map<std::string, std::string>& kv);
};

/// One (constraint, N, trial, SNR) row. Bound columns are in bpcu; gsp is NaN
/// for TA. `gap` is measured against the EPI lower bound.
struct GapRecord {
    ConstraintKind constraint;
    int n;
    std::uint64_t trial_seed;
    double snr_db;
    double sp;
    double gsp;
    double psp;
    double dual_ball;
    double dual_box;
    double epi;
    double c_upper;
    double gap;
    double gap_dual;
    std::string status;

    friend bool operator==(const GapRecord&, const GapRecord&) = default;
};

struct SummaryRow {
    ConstraintKind constraint;
    int n;
    double snr_db;
    double mean_gap;
    double std_gap;
    double mean_gap_per_n;
    double mean_gap_ratio;
    double mean_gap_dual_per_n;

    friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

/// Entries i.i.d. CN(0, 2): real and imaginary parts N(0, 1).
ComplexChannel random_channel(int n_antennas, std::uint64_t seed);

/// Seed stream: master, then N, then trial index.
std::uint64_t trial_seed(std::uint64_t master_seed, int n_antennas, int trial);

using SweepProgress = std::function<void(int n_antennas, int trial)>;

/// Records are ordered by (N, trial, SNR) regardless of execution order.
/// Solver failures are recorded in the status column.
std::vector<GapRecord> run_sweep(const SweepConfig& cfg, const SweepProgress& progress = {});

/// Mean and population standard deviation per (constraint, N, SNR) over rows
/// with status "ok". `excluded` receives the number of skipped rows.
std::vector<SummaryRow> summarize(const std::vector<GapRecord>& records, std::size_t* excluded = nullptr);

inline constexpr const char* kRecordsHeader =
    "constraint,N,trial_seed,snr_db,sp,gsp,psp,dual_ball,dual_box,epi,c_upper,gap,gap_dual,status";
inline constexpr const char* kSummaryHeader =
    "constraint,N,snr_db,mean_gap,std_gap,mean_gap_per_N,mean_gap_ratio,mean_gap_dual_per_N";

void write_records_csv(std::ostream& out, const std::vector<GapRecord>& records);
std::vector<GapRecord> read_records_csv(std::istream& in);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(std::istream& in);

void write_records_csv(const std::string& path, const std::vector<GapRecord>& records);
std::vector<GapRecord> read_records_csv(const std::string& path);
void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(const std::string& path);

/// Plain-text key=value manifest: sweep configuration, seeds, version.
void write_manifest(const std::string& path, const SweepConfig& cfg,
                    const std::map<std::string, std::string>& extra = {});
std::map<std::string, std::string> read_key_values(const std::string& path);

std::string software_version();

}  // namespace amplicap
