#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace locklab {

// Conflict-driven clause-learning SAT solver: two watched literals,
// first-UIP conflict analysis, decaying variable activities (ties broken by
// variable index), geometric restarts, incremental clause addition and
// solving under assumptions. Fully deterministic: the same clause and
// assumption history yields the same verdicts and models.
class SatSolver {
public:
    enum class Result { Sat, Unsat };

    SatSolver() = default;

    int new_var();  // 1-based, matching DIMACS
    void ensure_vars(int n);
    int num_vars() const { return static_cast<int>(assigns_.size()); }

    // DIMACS-signed literals. Returns false once the formula is known
    // unsatisfiable outright (empty clause or top-level conflict).
    bool add_clause(std::span<const int> lits);
    bool add_clause(std::initializer_list<int> lits) {
        return add_clause(std::span<const int>(lits.begin(), lits.size()));
    }

    // Under assumptions, Unsat means "no model extends the assumptions";
    // the solver stays usable afterwards.
    Result solve(std::span<const int> assumptions = {});
    Result solve(std::initializer_list<int> assumptions) {
        return solve(std::span<const int>(assumptions.begin(), assumptions.size()));
    }

    // Total model over all allocated variables; valid after a Sat result.
    bool model_value(int var) const { return model_[var - 1] != 0; }

    bool ok() const { return ok_; }
    std::uint64_t conflicts() const { return conflicts_; }
    std::uint64_t decisions() const { return decisions_; }
    std::uint64_t propagations() const { return propagations_; }
    std::size_t clause_count() const { return n_clauses_; }

private:
    using Lit = std::uint32_t;  // 2*var + sign; sign 1 is the negative literal
    using ClauseRef = std::uint32_t;
    static constexpr ClauseRef kNoReason = 0xffffffffu;

    static Lit make_lit(int var0, bool neg) { return (static_cast<Lit>(var0) << 1) | (neg ? 1u : 0u); }
    static Lit from_dimacs(int e) { return make_lit(std::abs(e) - 1, e < 0); }

    struct Watcher {
        ClauseRef cref;
        Lit blocker;
    };

    // -1 undef, 0 false, 1 true
    int lit_value(Lit l) const {
        std::int8_t a = assigns_[l >> 1];
        if (a < 0) return -1;
        return ((a == 1) != static_cast<bool>(l & 1)) ? 1 : 0;
    }

    int decision_level() const { return static_cast<int>(trail_lim_.size()); }
    void new_decision_level() { trail_lim_.push_back(static_cast<int>(trail_.size())); }

    ClauseRef alloc_clause(std::span<const Lit> lits);
    int clause_size(ClauseRef c) const { return arena_[c]; }
    const std::int32_t* clause_lits(ClauseRef c) const { return &arena_[c + 1]; }
    std::int32_t* clause_lits(ClauseRef c) { return &arena_[c + 1]; }
    void attach_clause(ClauseRef c);

    void unchecked_enqueue(Lit p, ClauseRef reason);
    ClauseRef propagate();
    void analyze(ClauseRef confl, std::vector<Lit>& learnt, int& bt_level);
    void cancel_until(int level);
    int pick_branch_var();
    int search(std::uint64_t conflict_budget, std::span<const Lit> assumptions);

    void bump_var(int v);
    void rescale_activities();
    bool heap_prior(int a, int b) const {
        return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
    }
    void heap_up(std::size_t i);
    void heap_down(std::size_t i);
    void heap_insert(int v);
    int heap_pop();

    bool ok_ = true;
    std::vector<std::int32_t> arena_;  // [size, lits...] records, refs are offsets
    std::size_t n_clauses_ = 0;
    std::vector<std::vector<Watcher>> watches_;  // indexed by literal
    std::vector<std::int8_t> assigns_;           // per var: -1/0/1
    std::vector<int> level_;
    std::vector<ClauseRef> reason_;
    std::vector<std::uint8_t> phase_;  // saved polarity, initially false
    std::vector<double> activity_;
    std::vector<std::uint8_t> seen_;
    std::vector<Lit> trail_;
    std::vector<int> trail_lim_;
    std::size_t qhead_ = 0;

    std::vector<int> heap_;      // max-heap of variables by activity
    std::vector<int> heap_pos_;  // var -> heap index, -1 when absent

    std::vector<std::uint8_t> model_;
    double var_inc_ = 1.0;

    std::uint64_t conflicts_ = 0;
    std::uint64_t decisions_ = 0;
    std::uint64_t propagations_ = 0;
};

} // namespace locklab
