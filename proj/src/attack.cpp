#include "attack.hpp"

#include <chrono>
#include <random>

#include "solver.hpp"

namespace locklab {

const char* attack_status_name(AttackStatus s) {
    switch (s) {
    case AttackStatus::Success:                return "success";
    case AttackStatus::IterationCapExceeded:   return "iteration-cap-exceeded";
    case AttackStatus::TimeBudgetExceeded:     return "time-budget-exceeded";
    case AttackStatus::ConstraintInconsistent: return "constraint-inconsistent";
    }
    return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Evaluator over compiled net ids; inputs are addressed by position in the
// given name lists rather than by the circuit's own input order.
class Evaluator {
public:
    Evaluator(const Circuit& c, const std::vector<std::string>& first,
              const std::vector<std::string>& second = {})
        : circuit_(c), values_(c.net_count(), 0) {
        for (const auto& n : first) slots_.push_back(c.net_id(n));
        for (const auto& n : second) slots_.push_back(c.net_id(n));
        for (std::size_t j = 0; j < c.outputs().size(); j++)
            out_ids_.push_back(c.output_net_id(j));
    }

    // `bits` concatenates the first and second input groups.
    const std::vector<std::uint8_t>& run(const std::vector<std::uint8_t>& bits) {
        for (std::size_t i = 0; i < slots_.size(); i++) values_[slots_[i]] = bits[i];
        circuit_.eval(values_);
        outs_.resize(out_ids_.size());
        for (std::size_t j = 0; j < out_ids_.size(); j++) outs_[j] = values_[out_ids_[j]];
        return outs_;
    }

private:
    const Circuit& circuit_;
    std::vector<std::uint8_t> values_;
    std::vector<int> slots_;
    std::vector<int> out_ids_;
    std::vector<std::uint8_t> outs_;
};

void check_oracle_shape(const LockedCircuit& lc, const Circuit& oracle) {
    if (oracle.inputs().size() != lc.data_inputs.size())
        throw Error(ErrorKind::Width,
                    "oracle input count does not match the locked circuit's data inputs");
    if (oracle.outputs().size() != lc.circuit.outputs().size())
        throw Error(ErrorKind::Width,
                    "oracle output count does not match the locked circuit");
}

void check_pair_shape(const LockedCircuit& lc, const IoPair& pair) {
    if (pair.inputs.size() != lc.data_inputs.size())
        throw Error(ErrorKind::Width, "IO pair input width does not match the data inputs");
    if (pair.outputs.size() != lc.circuit.outputs().size())
        throw Error(ErrorKind::Width, "IO pair output width does not match the outputs");
}

} // namespace

AttackTrace sat_attack(const LockedCircuit& lc, const Circuit& oracle,
                       const AttackOptions& opts) {
    const Circuit& c = lc.circuit;
    const std::size_t data_w = lc.data_inputs.size();
    const std::size_t key_w = lc.key_inputs.size();
    check_oracle_shape(lc, oracle);
    for (const auto& [idx, bit] : opts.key_constraints) {
        (void)bit;
        if (idx < 0 || static_cast<std::size_t>(idx) >= key_w)
            throw Error(ErrorKind::Argument, "key constraint index out of range");
    }
    for (const auto& dip : opts.replay_dips)
        if (dip.size() != data_w)
            throw Error(ErrorKind::Width, "replay vector width does not match the data inputs");

    Evaluator ask(oracle, oracle.inputs());

    MiterEncoding m = build_miter(c, lc.data_inputs, lc.key_inputs, true);
    CnfFormula& f = m.formula;

    SatSolver solver;
    std::size_t mirrored = 0;
    auto sync = [&]() {
        solver.ensure_vars(f.var_count);
        for (; mirrored < f.clauses.size(); mirrored++) solver.add_clause(f.clauses[mirrored]);
    };
    if (f.contradiction) solver.add_clause(std::span<const int>{});

    std::vector<int> base_assumptions;
    for (const auto& [idx, bit] : opts.key_constraints) {
        base_assumptions.push_back(bit ? m.key_a[idx] : -m.key_a[idx]);
        base_assumptions.push_back(bit ? m.key_b[idx] : -m.key_b[idx]);
    }

    AttackTrace trace;
    std::size_t pair_tag = 0;
    auto append_pair = [&](const IoPair& pair) {
        pair_tag++;
        std::size_t before = f.clauses.size();
        encode_under_io(c, lc.data_inputs, lc.key_inputs, pair, m.key_a, f,
                        "io" + std::to_string(pair_tag) + "a");
        encode_under_io(c, lc.data_inputs, lc.key_inputs, pair, m.key_b, f,
                        "io" + std::to_string(pair_tag) + "b");
        return f.clauses.size() - before;
    };

    if (opts.preload_vectors && data_w > 0) {
        for (std::uint8_t fill : {0, 1}) {
            std::vector<std::uint8_t> v(data_w, fill);
            IoPair pair{v, ask.run(v)};
            append_pair(pair);
            trace.preloads.push_back(std::move(pair));
        }
    }

    std::size_t replay_next = 0;
    bool finished_unsat = false;
    while (true) {
        if (opts.iteration_cap > 0 && trace.total_iterations >= opts.iteration_cap) {
            trace.status = AttackStatus::IterationCapExceeded;
            break;
        }
        bool replaying = replay_next < opts.replay_dips.size();
        std::vector<int> assumptions = base_assumptions;
        assumptions.push_back(m.activation_var);
        if (replaying)
            for (std::size_t i = 0; i < data_w; i++)
                assumptions.push_back(opts.replay_dips[replay_next][i] ? m.data_vars[i]
                                                                       : -m.data_vars[i]);
        sync();
        auto t0 = Clock::now();
        SatSolver::Result res = solver.solve(assumptions);
        double dt = seconds_since(t0);
        trace.total_s += dt;
        trace.total_iterations++;

        if (res == SatSolver::Result::Unsat) {
            if (replaying)
                throw Error(ErrorKind::Replay,
                            "replay vector " + std::to_string(replay_next + 1) +
                                " does not distinguish any remaining keys");
            trace.unsat_s = dt;
            finished_unsat = true;
            break;
        }
        if (replaying) replay_next++;

        trace.io_pairs_s += dt;
        IterationRecord rec;
        rec.index = trace.total_iterations;
        rec.solve_s = dt;
        rec.dip.resize(data_w);
        for (std::size_t i = 0; i < data_w; i++)
            rec.dip[i] = solver.model_value(m.data_vars[i]) ? 1 : 0;
        rec.model_key_a.resize(key_w);
        rec.model_key_b.resize(key_w);
        for (std::size_t i = 0; i < key_w; i++) {
            rec.model_key_a[i] = solver.model_value(m.key_a[i]) ? 1 : 0;
            rec.model_key_b[i] = solver.model_value(m.key_b[i]) ? 1 : 0;
        }
        rec.response = ask.run(rec.dip);
        rec.clauses_added = append_pair(IoPair{rec.dip, rec.response});
        trace.iterations.push_back(std::move(rec));

        if (opts.time_budget_s > 0 && trace.total_s > opts.time_budget_s) {
            trace.status = AttackStatus::TimeBudgetExceeded;
            break;
        }
    }
    if (!finished_unsat) return trace;

    // No distinguishing input is left, so every key consistent with the
    // recorded behavior (and the constraints) is functionally equivalent;
    // extract one by solving without the disagreement requirement.
    sync();
    auto t0 = Clock::now();
    SatSolver::Result res = solver.solve(base_assumptions);
    trace.total_s += seconds_since(t0);
    if (res == SatSolver::Result::Unsat) {
        trace.status = AttackStatus::ConstraintInconsistent;
        return trace;
    }
    trace.recovered_key.resize(key_w);
    for (std::size_t i = 0; i < key_w; i++)
        trace.recovered_key[i] = solver.model_value(m.key_a[i]) ? 1 : 0;

    if (!verify_key(lc, trace.recovered_key, oracle)) {
        if (!opts.key_constraints.empty()) {
            // The pinned bits exclude every functionally correct key.
            trace.status = AttackStatus::ConstraintInconsistent;
            trace.recovered_key.clear();
            return trace;
        }
        throw Error(ErrorKind::Internal, "recovered key failed verification");
    }
    trace.status = AttackStatus::Success;
    return trace;
}

bool verify_key(const LockedCircuit& lc, const KeyVector& key, const Circuit& oracle) {
    if (key.size() != lc.key_inputs.size())
        throw Error(ErrorKind::Width, "key width does not match the locked circuit");
    check_oracle_shape(lc, oracle);

    const std::size_t data_w = lc.data_inputs.size();
    Evaluator locked(lc.circuit, lc.data_inputs, lc.key_inputs);
    Evaluator reference(oracle, oracle.inputs());

    std::vector<std::uint8_t> bits(data_w + key.size(), 0);
    for (std::size_t i = 0; i < key.size(); i++) bits[data_w + i] = key[i];
    std::vector<std::uint8_t> data(data_w, 0);

    auto agree = [&]() {
        std::copy(data.begin(), data.end(), bits.begin());
        return locked.run(bits) == reference.run(data);
    };

    if (data_w <= 16) {
        for (std::uint32_t code = 0; code < (1u << data_w); code++) {
            for (std::size_t i = 0; i < data_w; i++) data[i] = (code >> i) & 1;
            if (!agree()) return false;
        }
        return true;
    }

    std::fill(data.begin(), data.end(), 0);
    if (!agree()) return false;
    std::fill(data.begin(), data.end(), 1);
    if (!agree()) return false;
    std::mt19937_64 rng(0x10c1ab5eedULL);
    for (int trial = 0; trial < 10000; trial++) {
        for (std::size_t i = 0; i < data_w; i++) data[i] = static_cast<std::uint8_t>(rng() & 1);
        if (!agree()) return false;
    }
    return true;
}

std::vector<std::uint32_t> remaining_keys(const LockedCircuit& lc,
                                          const std::vector<IoPair>& pairs) {
    const std::size_t key_w = lc.key_inputs.size();
    if (key_w > 24)
        throw Error(ErrorKind::Argument, "key width beyond the enumeration bound (24)");
    for (const auto& pair : pairs) check_pair_shape(lc, pair);

    std::vector<std::uint32_t> keys;
    const std::uint64_t space = 1ull << key_w;
    for (std::uint64_t code = 0; code < space; code++) {
        Circuit keyed = apply_key(lc, key_from_code(static_cast<std::uint32_t>(code), key_w));
        Evaluator eval(keyed, lc.data_inputs);
        bool ok = true;
        for (const auto& pair : pairs) {
            if (eval.run(pair.inputs) != pair.outputs) {
                ok = false;
                break;
            }
        }
        if (ok) keys.push_back(static_cast<std::uint32_t>(code));
    }
    return keys;
}

std::size_t dip_elimination_count(const LockedCircuit& lc, const IoPair& pair,
                                  const std::vector<std::uint32_t>& surviving) {
    if (lc.key_inputs.size() > 24)
        throw Error(ErrorKind::Argument, "key width beyond the enumeration bound (24)");
    check_pair_shape(lc, pair);
    std::size_t eliminated = 0;
    for (std::uint32_t code : surviving) {
        Circuit keyed = apply_key(lc, key_from_code(code, lc.key_inputs.size()));
        Evaluator eval(keyed, lc.data_inputs);
        if (eval.run(pair.inputs) != pair.outputs) eliminated++;
    }
    return eliminated;
}

} // namespace locklab
