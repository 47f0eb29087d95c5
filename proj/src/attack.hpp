#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "cnf.hpp"
#include "lock.hpp"

namespace locklab {

enum class AttackStatus {
    Success,
    IterationCapExceeded,
    TimeBudgetExceeded,
    ConstraintInconsistent,
};

const char* attack_status_name(AttackStatus s);

struct AttackOptions {
    // Key bits asserted on both miter copies for the whole run.
    std::map<int, bool> key_constraints;
    // Input vectors consumed in order before (or instead of) solver-chosen
    // ones. A replayed vector that no longer distinguishes any pair of
    // candidate keys is an error.
    std::vector<std::vector<std::uint8_t>> replay_dips;
    // Seed the formula with the all-zeros and all-ones IO pairs first.
    bool preload_vectors = false;
    int iteration_cap = 0;     // max miter solves, 0 = unlimited
    double time_budget_s = 0;  // solver wall-clock budget, 0 = unlimited
};

struct IterationRecord {
    int index = 0;                       // 1-based solve counter
    std::vector<std::uint8_t> dip;       // data inputs, declaration order
    std::vector<std::uint8_t> response;  // oracle outputs, declaration order
    KeyVector model_key_a, model_key_b;  // the two keys the model disagreed on
    double solve_s = 0;
    std::size_t clauses_added = 0;  // formula growth from this pair
};

struct AttackTrace {
    AttackStatus status = AttackStatus::Success;
    std::vector<IterationRecord> iterations;  // one per distinguishing input found
    std::vector<IoPair> preloads;
    int total_iterations = 0;  // every miter solve, including the final unsat one
    double io_pairs_s = 0;     // time in the distinguishing-input solves
    double unsat_s = 0;        // the final unsat solve
    double total_s = 0;        // all solver time, including key extraction
    KeyVector recovered_key;   // full key width on success, empty otherwise

    std::size_t io_pairs() const { return iterations.size() + preloads.size(); }
};

// Oracle-guided key recovery. Each round solves for an input where two keys
// consistent with everything seen so far disagree, asks the oracle, and pins
// both key copies to the observed behavior; when no such input remains, any
// key consistent with the observations is functionally correct and one is
// extracted. The oracle's inputs/outputs correspond positionally to the
// locked circuit's data inputs/outputs.
AttackTrace sat_attack(const LockedCircuit& lc, const Circuit& oracle,
                       const AttackOptions& opts = {});

// Functional equivalence of the keyed circuit against the oracle: exhaustive
// up to 16 data inputs, otherwise 10^4 seeded random vectors plus the
// all-zeros and all-ones corners.
bool verify_key(const LockedCircuit& lc, const KeyVector& key, const Circuit& oracle);

// Brute-force reference: every key (as a code, bit i at 1<<i) whose keyed
// circuit reproduces all the given IO pairs. Key width must be <= 24.
std::vector<std::uint32_t> remaining_keys(const LockedCircuit& lc,
                                          const std::vector<IoPair>& pairs);

// How many of `surviving` the pair newly rules out.
std::size_t dip_elimination_count(const LockedCircuit& lc, const IoPair& pair,
                                  const std::vector<std::uint32_t>& surviving);

} // namespace locklab
