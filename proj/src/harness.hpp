#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "attack.hpp"
#include "netlist.hpp"

namespace locklab {

// One sweep point, mirroring the CSV columns.
struct SweepRecord {
    std::size_t key_size = 0;
    std::size_t io_pairs = 0;
    int total_iters = 0;
    double total_s = 0;
    double io_pairs_s = 0;
    double avg_s = 0;    // io_pairs_s per IO pair, 0 when there were none
    double unsat_s = 0;
    double unsat_pct = 0;
    bool complete = true;  // false when the attack hit a cap or budget
};

struct SweepOptions {
    Scheme scheme = Scheme::XorInsertion;
    std::uint64_t seed = 1;
    int iteration_cap = 0;     // per attack, 0 = unlimited
    double time_budget_s = 0;  // per attack, 0 = unlimited
};

SweepRecord record_from_trace(std::size_t key_size, const AttackTrace& trace);

// Locks the circuit's largest cone with 1..max_keys key gates (each size
// extends the previous one: insertion positions follow the cone's traversal
// order and the random correct key grows by one fresh bit per size), runs
// the attack against the unlocked circuit as oracle, and records one row
// per size. Deterministic for a given seed.
std::vector<SweepRecord> sweep(const Circuit& c, std::size_t max_keys,
                               const SweepOptions& opts = {});

struct TrendFit {
    double slope = 0;
    double intercept = 0;
    double residual_sum = 0;  // sum of squared residuals
    std::vector<double> deviations;
};

// Ordinary least squares of total iterations on key size. Needs at least
// two records and at least two distinct key sizes.
TrendFit fit_linear(const std::vector<SweepRecord>& records);

enum class ReportFormat { Csv, Json, Text };

// CSV: fixed header, one row per record. JSON: full-fidelity array. Text:
// aligned table plus a note for every drop in total iterations.
std::string report(const std::vector<SweepRecord>& records, ReportFormat fmt);

std::vector<SweepRecord> records_from_json(const std::string& text);

} // namespace locklab
