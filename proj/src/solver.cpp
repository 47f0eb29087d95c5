#include "solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace locklab {

namespace {
constexpr double kActivityRescale = 1e100;
constexpr double kActivityDecayInv = 1.0 / 0.95;
constexpr std::uint64_t kRestartFirst = 100;
} // namespace

int SatSolver::new_var() {
    int v = static_cast<int>(assigns_.size());
    assigns_.push_back(-1);
    level_.push_back(0);
    reason_.push_back(kNoReason);
    phase_.push_back(0);
    activity_.push_back(0.0);
    seen_.push_back(0);
    watches_.emplace_back();
    watches_.emplace_back();
    heap_pos_.push_back(-1);
    heap_insert(v);
    return v + 1;
}

void SatSolver::ensure_vars(int n) {
    while (num_vars() < n) new_var();
}

SatSolver::ClauseRef SatSolver::alloc_clause(std::span<const Lit> lits) {
    ClauseRef ref = static_cast<ClauseRef>(arena_.size());
    arena_.push_back(static_cast<std::int32_t>(lits.size()));
    for (Lit l : lits) arena_.push_back(static_cast<std::int32_t>(l));
    n_clauses_++;
    return ref;
}

void SatSolver::attach_clause(ClauseRef c) {
    const std::int32_t* lits = clause_lits(c);
    watches_[lits[0]].push_back({c, static_cast<Lit>(lits[1])});
    watches_[lits[1]].push_back({c, static_cast<Lit>(lits[0])});
}

bool SatSolver::add_clause(std::span<const int> ext) {
    if (!ok_) return false;
    std::vector<Lit> lits;
    lits.reserve(ext.size());
    for (int e : ext) {
        if (e == 0) continue;
        ensure_vars(std::abs(e));
        lits.push_back(from_dimacs(e));
    }
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());

    std::vector<Lit> kept;
    bool satisfied = false;
    for (std::size_t i = 0; i < lits.size(); i++) {
        if (i + 1 < lits.size() && lits[i + 1] == (lits[i] ^ 1)) {
            satisfied = true;  // tautology: v and not-v
            break;
        }
        int val = lit_value(lits[i]);
        if (val == 1) {
            satisfied = true;  // already true at the top level
            break;
        }
        if (val == -1) kept.push_back(lits[i]);
    }
    if (satisfied) return true;

    if (kept.empty()) {
        ok_ = false;
        return false;
    }
    if (kept.size() == 1) {
        unchecked_enqueue(kept[0], kNoReason);
        if (propagate() != kNoReason) ok_ = false;
        return ok_;
    }
    ClauseRef c = alloc_clause(kept);
    attach_clause(c);
    return true;
}

void SatSolver::unchecked_enqueue(Lit p, ClauseRef reason) {
    int v = static_cast<int>(p >> 1);
    assigns_[v] = (p & 1) ? 0 : 1;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(p);
}

SatSolver::ClauseRef SatSolver::propagate() {
    ClauseRef confl = kNoReason;
    while (qhead_ < trail_.size()) {
        Lit p = trail_[qhead_++];
        propagations_++;
        Lit fl = p ^ 1;  // this literal just became false
        auto& ws = watches_[fl];
        std::size_t i = 0, j = 0;
        while (i < ws.size()) {
            Watcher w = ws[i++];
            if (lit_value(w.blocker) == 1) {
                ws[j++] = w;
                continue;
            }
            std::int32_t* lits = clause_lits(w.cref);
            int size = clause_size(w.cref);
            if (static_cast<Lit>(lits[0]) == fl) std::swap(lits[0], lits[1]);
            Lit first = static_cast<Lit>(lits[0]);
            if (lit_value(first) == 1) {
                ws[j++] = {w.cref, first};
                continue;
            }
            bool moved = false;
            for (int k = 2; k < size; k++) {
                if (lit_value(static_cast<Lit>(lits[k])) != 0) {
                    std::swap(lits[1], lits[k]);
                    watches_[lits[1]].push_back({w.cref, first});
                    moved = true;
                    break;
                }
            }
            if (moved) continue;
            ws[j++] = {w.cref, first};
            if (lit_value(first) == 0) {
                confl = w.cref;
                qhead_ = trail_.size();
                while (i < ws.size()) ws[j++] = ws[i++];
            } else {
                unchecked_enqueue(first, w.cref);
            }
        }
        ws.resize(j);
        if (confl != kNoReason) break;
    }
    return confl;
}

void SatSolver::analyze(ClauseRef confl, std::vector<Lit>& learnt, int& bt_level) {
    learnt.clear();
    learnt.push_back(0);  // slot for the asserting literal
    int counter = 0;
    Lit p = 0;
    bool have_p = false;
    std::size_t index = trail_.size();

    for (;;) {
        const std::int32_t* lits = clause_lits(confl);
        int size = clause_size(confl);
        for (int k = have_p ? 1 : 0; k < size; k++) {
            Lit q = static_cast<Lit>(lits[k]);
            int v = static_cast<int>(q >> 1);
            if (!seen_[v] && level_[v] > 0) {
                seen_[v] = 1;
                bump_var(v);
                if (level_[v] >= decision_level()) counter++;
                else learnt.push_back(q);
            }
        }
        do { index--; } while (!seen_[trail_[index] >> 1]);
        p = trail_[index];
        have_p = true;
        seen_[p >> 1] = 0;
        counter--;
        if (counter == 0) break;
        confl = reason_[p >> 1];
    }
    learnt[0] = p ^ 1;

    if (learnt.size() == 1) {
        bt_level = 0;
    } else {
        std::size_t max_i = 1;
        for (std::size_t i = 2; i < learnt.size(); i++)
            if (level_[learnt[i] >> 1] > level_[learnt[max_i] >> 1]) max_i = i;
        std::swap(learnt[1], learnt[max_i]);
        bt_level = level_[learnt[1] >> 1];
    }
    for (std::size_t i = 1; i < learnt.size(); i++) seen_[learnt[i] >> 1] = 0;
}

void SatSolver::cancel_until(int level) {
    if (decision_level() <= level) return;
    for (int i = static_cast<int>(trail_.size()) - 1; i >= trail_lim_[level]; i--) {
        Lit p = trail_[i];
        int v = static_cast<int>(p >> 1);
        assigns_[v] = -1;
        phase_[v] = (p & 1) ? 0 : 1;
        reason_[v] = kNoReason;
        if (heap_pos_[v] < 0) heap_insert(v);
    }
    trail_.resize(trail_lim_[level]);
    qhead_ = trail_.size();
    trail_lim_.resize(level);
}

int SatSolver::pick_branch_var() {
    while (!heap_.empty()) {
        int v = heap_pop();
        if (assigns_[v] < 0) return v;
    }
    return -1;
}

int SatSolver::search(std::uint64_t conflict_budget, std::span<const Lit> assumptions) {
    std::uint64_t local_conflicts = 0;
    std::vector<Lit> learnt;
    for (;;) {
        ClauseRef confl = propagate();
        if (confl != kNoReason) {
            conflicts_++;
            local_conflicts++;
            if (decision_level() == 0) {
                ok_ = false;
                return 0;
            }
            int bt = 0;
            analyze(confl, learnt, bt);
            cancel_until(bt);
            if (learnt.size() == 1) {
                unchecked_enqueue(learnt[0], kNoReason);
            } else {
                ClauseRef c = alloc_clause(learnt);
                attach_clause(c);
                unchecked_enqueue(learnt[0], c);
            }
            var_inc_ *= kActivityDecayInv;
            if (var_inc_ > kActivityRescale) rescale_activities();
            if (local_conflicts >= conflict_budget) {
                cancel_until(0);
                return -1;  // restart
            }
            continue;
        }

        if (decision_level() < static_cast<int>(assumptions.size())) {
            Lit a = assumptions[decision_level()];
            int val = lit_value(a);
            if (val == 1) {
                new_decision_level();  // placeholder level, keeps the mapping 1:1
                continue;
            }
            if (val == 0) return 0;  // assumption contradicted
            new_decision_level();
            unchecked_enqueue(a, kNoReason);
            continue;
        }

        int next = pick_branch_var();
        if (next == -1) {
            model_.resize(assigns_.size());
            for (std::size_t v = 0; v < assigns_.size(); v++) model_[v] = assigns_[v] == 1;
            return 1;
        }
        decisions_++;
        new_decision_level();
        unchecked_enqueue(make_lit(next, phase_[next] == 0), kNoReason);
    }
}

SatSolver::Result SatSolver::solve(std::span<const int> assumptions) {
    if (!ok_) return Result::Unsat;
    std::vector<Lit> as;
    as.reserve(assumptions.size());
    for (int e : assumptions) {
        if (e == 0) continue;
        ensure_vars(std::abs(e));
        as.push_back(from_dimacs(e));
    }
    cancel_until(0);
    if (propagate() != kNoReason) {
        ok_ = false;
        return Result::Unsat;
    }
    std::uint64_t budget = kRestartFirst;
    int status = -1;
    while (status == -1) {
        status = search(budget, as);
        budget += budget / 2;
    }
    cancel_until(0);
    return status == 1 ? Result::Sat : Result::Unsat;
}

void SatSolver::bump_var(int v) {
    activity_[v] += var_inc_;
    if (activity_[v] > kActivityRescale) rescale_activities();
    if (heap_pos_[v] >= 0) heap_up(heap_pos_[v]);
}

void SatSolver::rescale_activities() {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
    if (var_inc_ < 1e-100) var_inc_ = 1.0;
}

void SatSolver::heap_up(std::size_t i) {
    int v = heap_[i];
    while (i > 0) {
        std::size_t parent = (i - 1) / 2;
        if (!heap_prior(v, heap_[parent])) break;
        heap_[i] = heap_[parent];
        heap_pos_[heap_[i]] = static_cast<int>(i);
        i = parent;
    }
    heap_[i] = v;
    heap_pos_[v] = static_cast<int>(i);
}

void SatSolver::heap_down(std::size_t i) {
    int v = heap_[i];
    for (;;) {
        std::size_t left = 2 * i + 1;
        if (left >= heap_.size()) break;
        std::size_t child = left;
        if (left + 1 < heap_.size() && heap_prior(heap_[left + 1], heap_[left])) child = left + 1;
        if (!heap_prior(heap_[child], v)) break;
        heap_[i] = heap_[child];
        heap_pos_[heap_[i]] = static_cast<int>(i);
        i = child;
    }
    heap_[i] = v;
    heap_pos_[v] = static_cast<int>(i);
}

void SatSolver::heap_insert(int v) {
    if (heap_pos_[v] >= 0) return;
    heap_.push_back(v);
    heap_pos_[v] = static_cast<int>(heap_.size() - 1);
    heap_up(heap_.size() - 1);
}

int SatSolver::heap_pop() {
    int top = heap_[0];
    heap_pos_[top] = -1;
    int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
        heap_[0] = last;
        heap_pos_[last] = 0;
        heap_down(0);
    }
    return top;
}

} // namespace locklab
