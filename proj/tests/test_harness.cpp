#include <doctest.h>

#include <sstream>

#include "harness.hpp"
#include "helpers.hpp"

using namespace locklab;
using namespace locklab::testing;

namespace {

SweepRecord rec(std::size_t k, int iters, double total = 1.0) {
    SweepRecord r;
    r.key_size = k;
    r.total_iters = iters;
    r.io_pairs = iters > 0 ? iters - 1 : 0;
    r.total_s = total;
    return r;
}

} // namespace

TEST_CASE("records summarize traces with the documented ratios") {
    LockedCircuit lc = fig3_locked_lc();
    Circuit oracle = fig3_oracle();
    AttackOptions opts;
    opts.replay_dips = {vec("1111"), vec("1101"), vec("0111")};
    AttackTrace trace = sat_attack(lc, oracle, opts);

    SweepRecord r = record_from_trace(3, trace);
    CHECK(r.key_size == 3);
    CHECK(r.total_iters == 4);
    CHECK(r.io_pairs == 3);
    CHECK(r.avg_s == doctest::Approx(r.io_pairs_s / 3));
    CHECK(r.unsat_pct == doctest::Approx(r.unsat_s / r.total_s * 100));
    CHECK(r.total_s >= r.io_pairs_s + r.unsat_s);
    CHECK(r.complete);
}

TEST_CASE("records handle empty and truncated traces") {
    LockedCircuit lc = locked_from_circuit(fig3_oracle(), "k");
    AttackTrace trace = sat_attack(lc, fig3_oracle());
    SweepRecord r = record_from_trace(0, trace);
    CHECK(r.io_pairs == 0);
    CHECK(r.avg_s == 0.0);  // no IO pairs: average defined as zero
    CHECK(r.total_iters == 1);
    CHECK(r.complete);

    AttackOptions capped;
    capped.iteration_cap = 1;
    AttackTrace cut = sat_attack(fig3_locked_lc(), fig3_oracle(), capped);
    SweepRecord rc = record_from_trace(3, cut);
    CHECK(!rc.complete);
    CHECK(rc.total_iters == 1);
}

TEST_CASE("sweep produces one deterministic row per key size") {
    Circuit host = fig3_oracle();
    SweepOptions opts;
    opts.seed = 5;
    auto records = sweep(host, 3, opts);
    REQUIRE(records.size() == 3);
    for (std::size_t i = 0; i < records.size(); i++) {
        CHECK(records[i].key_size == i + 1);
        CHECK(records[i].complete);
        CHECK(records[i].io_pairs == static_cast<std::size_t>(records[i].total_iters) - 1);
        CHECK(records[i].total_s > 0);
    }

    auto again = sweep(host, 3, opts);
    REQUIRE(again.size() == records.size());
    for (std::size_t i = 0; i < records.size(); i++) {
        CHECK(again[i].key_size == records[i].key_size);
        CHECK(again[i].total_iters == records[i].total_iters);
        CHECK(again[i].io_pairs == records[i].io_pairs);
    }

    SweepOptions other;
    other.seed = 6;
    auto different = sweep(host, 3, other);  // allowed to differ, must still be sane
    REQUIRE(different.size() == 3);
    for (const auto& r : different) CHECK(r.total_iters >= 1);
}

TEST_CASE("sweep respects caps and rejects non-insertion schemes") {
    Circuit host = fig3_oracle();
    SweepOptions capped;
    capped.iteration_cap = 1;
    auto records = sweep(host, 2, capped);
    for (const auto& r : records)
        if (r.total_iters >= 1) CHECK(r.total_iters <= 1);

    SweepOptions anti;
    anti.scheme = Scheme::AntiSat;
    CHECK_THROWS_AS(sweep(host, 2, anti), Error);

    CHECK_THROWS_AS(sweep(host, 50, SweepOptions{}), Error);  // more keys than gates
}

TEST_CASE("least squares reproduces exact lines") {
    // iters = 2k + 1 exactly
    std::vector<SweepRecord> exact = {rec(1, 3), rec(2, 5), rec(3, 7), rec(4, 9)};
    TrendFit fit = fit_linear(exact);
    CHECK(fit.slope == doctest::Approx(2.0));
    CHECK(fit.intercept == doctest::Approx(1.0));
    CHECK(fit.residual_sum == doctest::Approx(0.0));
    REQUIRE(fit.deviations.size() == 4);
    for (double d : fit.deviations) CHECK(d == doctest::Approx(0.0));
}

TEST_CASE("least squares matches the normal equations on noisy data") {
    // hand-checked: x = 1,2,3,4; y = 2,3,5,4 gives slope 0.8, intercept 1.5
    std::vector<SweepRecord> noisy = {rec(1, 2), rec(2, 3), rec(3, 5), rec(4, 4)};
    TrendFit fit = fit_linear(noisy);
    CHECK(fit.slope == doctest::Approx(0.8));
    CHECK(fit.intercept == doctest::Approx(1.5));
    // residuals: y - (a + b x) = -0.3, -0.1, 1.1, -0.7
    CHECK(fit.deviations[0] == doctest::Approx(-0.3));
    CHECK(fit.deviations[1] == doctest::Approx(-0.1));
    CHECK(fit.deviations[2] == doctest::Approx(1.1));
    CHECK(fit.deviations[3] == doctest::Approx(-0.7));
    double sum = 0;
    for (double d : fit.deviations) sum += d * d;
    CHECK(fit.residual_sum == doctest::Approx(sum));
}

TEST_CASE("least squares needs two distinct key sizes") {
    CHECK_THROWS_AS(fit_linear({}), Error);
    CHECK_THROWS_AS(fit_linear({rec(2, 5)}), Error);
    CHECK_THROWS_AS(fit_linear({rec(2, 5), rec(2, 7)}), Error);
}

TEST_CASE("csv report uses the fixed header and one row per record") {
    std::vector<SweepRecord> records = {rec(1, 2, 0.5), rec(2, 3, 1.25)};
    records[0].io_pairs_s = 0.25;
    records[0].avg_s = 0.25;
    records[0].unsat_s = 0.125;
    records[0].unsat_pct = 25.0;

    std::string csv = report(records, ReportFormat::Csv);
    std::istringstream ss(csv);
    std::string line;
    REQUIRE(std::getline(ss, line));
    CHECK(line == "key_size,io_pairs,total_iters,total_s,io_pairs_s,avg_s,unsat_s,unsat_pct");
    REQUIRE(std::getline(ss, line));
    CHECK(line == "1,1,2,0.500000,0.250000,0.250000,0.125000,25.000000");
    REQUIRE(std::getline(ss, line));
    CHECK(line.rfind("2,2,3,1.250000,", 0) == 0);
    CHECK(!std::getline(ss, line));  // nothing after the last record
}

TEST_CASE("json report round-trips through records_from_json") {
    Circuit host = fig3_oracle();
    SweepOptions opts;
    opts.seed = 9;
    auto records = sweep(host, 3, opts);

    std::string json = report(records, ReportFormat::Json);
    auto back = records_from_json(json);
    REQUIRE(back.size() == records.size());
    for (std::size_t i = 0; i < records.size(); i++) {
        CHECK(back[i].key_size == records[i].key_size);
        CHECK(back[i].io_pairs == records[i].io_pairs);
        CHECK(back[i].total_iters == records[i].total_iters);
        CHECK(back[i].total_s == doctest::Approx(records[i].total_s));
        CHECK(back[i].io_pairs_s == doctest::Approx(records[i].io_pairs_s));
        CHECK(back[i].avg_s == doctest::Approx(records[i].avg_s));
        CHECK(back[i].unsat_s == doctest::Approx(records[i].unsat_s));
        CHECK(back[i].unsat_pct == doctest::Approx(records[i].unsat_pct));
        CHECK(back[i].complete == records[i].complete);
    }

    CHECK_THROWS_AS(records_from_json("not json"), Error);
    CHECK_THROWS_AS(records_from_json("{\"a\": 1}"), Error);
}

TEST_CASE("text report flags drops in total iterations") {
    std::vector<SweepRecord> records = {rec(1, 2), rec(2, 5), rec(3, 3), rec(4, 6)};
    std::string text = report(records, ReportFormat::Text);
    CHECK(text.find("drop at |K|=3") != std::string::npos);  // 5 -> 3 is a drop
    CHECK(text.find("drop at |K|=2") == std::string::npos);  // 2 -> 5 is not
    CHECK(text.find("drop at |K|=4") == std::string::npos);

    std::string quiet = report({rec(1, 2), rec(2, 2)}, ReportFormat::Text);
    CHECK(quiet.find("drop") == std::string::npos);
}

TEST_CASE("sweep records follow the query-count identity") {
    // |P| = iterations - 1 for every completed, preload-free attack
    Circuit host = and_tree(5);
    auto records = sweep(host, 4, SweepOptions{});
    for (const auto& r : records) {
        REQUIRE(r.complete);
        CHECK(r.io_pairs == static_cast<std::size_t>(r.total_iters) - 1);
        CHECK(r.unsat_pct == doctest::Approx(r.unsat_s / r.total_s * 100));
        CHECK(r.avg_s ==
              doctest::Approx(r.io_pairs ? r.io_pairs_s / r.io_pairs : 0.0));
    }
}
