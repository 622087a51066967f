#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "amplicap/errors.hpp"
#include "amplicap/harness.hpp"

using namespace amplicap;

namespace {

GapRecord record(int n, double snr, double gap, std::string status = "ok") {
    return {ConstraintKind::TA, n, 42, snr, 1, 1, 1, 1, 1, 0.5, 1.0 + gap, gap, 2 * gap, std::move(status)};
}

SweepConfig small_sweep() {
    SweepConfig cfg;
    cfg.n_values = {2};
    cfg.trials = 3;
    cfg.snr_db = {-20, 0, 20, 40, 60};
    cfg.estimator.samples = 5000;
    return cfg;
}

std::string records_csv(const std::vector<GapRecord>& r) {
    std::ostringstream s;
    write_records_csv(s, r);
    return s.str();
}

}  // namespace

TEST_CASE("random channels") {
    const auto a = random_channel(3, 99).entries();
    CHECK(a == random_channel(3, 99).entries());
    CHECK(a != random_channel(3, 100).entries());

    double power = 0;
    int count = 0;
    for (std::uint64_t seed = 0; seed < 2500; ++seed) {
        const auto h = random_channel(2, seed).entries();
        power += h.cwiseAbs2().sum();
        count += 4;
    }
    CHECK(power / count == doctest::Approx(2.0).epsilon(0.05));
    CHECK(trial_seed(1, 2, 0) != trial_seed(1, 2, 1));
    CHECK(trial_seed(1, 2, 0) != trial_seed(1, 3, 0));
}

TEST_CASE("sweep cardinality, ordering and determinism") {
    const auto cfg = small_sweep();
    const auto rows = run_sweep(cfg);
    REQUIRE(rows.size() == 15);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const bool same_trial = rows[i].trial_seed == rows[i - 1].trial_seed;
        if (same_trial) CHECK(rows[i].snr_db > rows[i - 1].snr_db);
    }
    for (const auto& r : rows) {
        CAPTURE(r.snr_db);
        CHECK(r.status == "ok");
        CHECK(r.sp >= r.epi - 1e-6);
        CHECK(r.psp >= r.epi - 1e-6);
        CHECK(r.psp <= r.sp + 1e-6);
        CHECK(r.gap == doctest::Approx(r.c_upper - r.epi));
    }
    CHECK(records_csv(run_sweep(cfg)) == records_csv(rows));
}

TEST_CASE("summaries") {
    const auto one = summarize({record(2, 0, 1.5)});
    REQUIRE(one.size() == 1);
    CHECK(one[0].std_gap == 0.0);
    CHECK(one[0].mean_gap_per_n == doctest::Approx(0.75));

    std::size_t excluded = 0;
    const auto two = summarize({record(2, 0, 1), record(2, 0, 3), record(2, 0, 9, "solver_error")}, &excluded);
    REQUIRE(two.size() == 1);
    CHECK(two[0].mean_gap == doctest::Approx(2));
    CHECK(two[0].std_gap == doctest::Approx(1));
    CHECK(two[0].mean_gap_dual_per_n == doctest::Approx(2));
    CHECK(excluded == 1);

    CHECK(summarize({record(2, 0, 1), record(3, 0, 1), record(2, 10, 1)}).size() == 3);
    CHECK_THROWS_AS(summarize({}), ContractViolation);
}

TEST_CASE("CSV round trips") {
    const std::vector<GapRecord> rows{record(2, -3.25, 0.1), record(3, 50, 1.0 / 3.0, "degenerate_channel")};
    std::stringstream s;
    write_records_csv(s, rows);
    CHECK(s.str().rfind(kRecordsHeader, 0) == 0);
    CHECK(read_records_csv(s) == rows);

    auto nan_row = record(2, 0, 0);
    nan_row.psp = std::nan("");
    std::stringstream n;
    write_records_csv(n, {nan_row});
    CHECK(n.str().find(",nan,") != std::string::npos);
    CHECK(std::isnan(read_records_csv(n)[0].psp));

    const auto summary = summarize({record(2, 0, 1), record(2, 0, 3)});
    std::stringstream t;
    write_summary_csv(t, summary);
    CHECK(read_summary_csv(t) == summary);
}

TEST_CASE("CSV schema errors name the column") {
    std::stringstream s("constraint,N,trial_seed,snr_db,sp\nta,2,1,0,1\n");
    try {
        read_records_csv(s);
        FAIL("expected a schema error");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("gsp") != std::string::npos);
    }
    CHECK_THROWS_AS(read_records_csv(std::string("/nonexistent/records.csv")), IoError);
}

TEST_CASE("config key-values and manifest") {
    auto cfg = small_sweep();
    cfg.constraint = ConstraintKind::PA;
    cfg.master_seed = 77;
    const auto back = SweepConfig::from_key_values(cfg.to_key_values());
    CHECK(back.constraint == ConstraintKind::PA);
    CHECK(back.n_values == cfg.n_values);
    CHECK(back.snr_db == cfg.snr_db);
    CHECK(back.master_seed == 77);
    CHECK(back.estimator.samples == 5000);
    CHECK_THROWS_AS(SweepConfig::from_key_values({{"trials", "zero"}}), ConfigError);
    CHECK_THROWS_AS(SweepConfig::from_key_values({{"trials", "0"}}), ConfigError);

    CHECK(SweepConfig::default_snr_grid().size() == 37);
    CHECK(SweepConfig::default_snr_grid().front() == -50.0);
    CHECK(SweepConfig::default_snr_grid().back() == 50.0);

    const auto dir = std::filesystem::temp_directory_path() / "amplicap_test_manifest";
    std::filesystem::create_directories(dir);
    const auto path = (dir / "manifest.txt").string();
    write_manifest(path, cfg, {{"records", "15"}});
    const auto kv = read_key_values(path);
    CHECK(kv.at("records") == "15");
    CHECK(kv.at("master_seed") == "77");
    CHECK(kv.at("version") == software_version());
    std::filesystem::remove_all(dir);
}
