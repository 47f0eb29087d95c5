#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "solver.hpp"

using namespace locklab;
using namespace locklab::testing;

namespace {

SatSolver::Result load_and_solve(SatSolver& s, int n_vars, const std::vector<Clause>& clauses) {
    s.ensure_vars(n_vars);
    for (const auto& c : clauses)
        if (!s.add_clause(c)) return SatSolver::Result::Unsat;
    return s.solve();
}

std::uint32_t model_code(const SatSolver& s, int n_vars) {
    std::uint32_t code = 0;
    for (int v = 1; v <= n_vars; v++)
        if (s.model_value(v)) code |= 1u << (v - 1);
    return code;
}

} // namespace

TEST_CASE("trivial formulas") {
    SatSolver s;
    CHECK(s.solve() == SatSolver::Result::Sat);  // empty formula

    int a = s.new_var();
    CHECK(s.add_clause({a}));
    CHECK(s.solve() == SatSolver::Result::Sat);
    CHECK(s.model_value(a));

    CHECK(!s.add_clause({-a}));  // immediate top-level conflict
    CHECK(!s.ok());
    CHECK(s.solve() == SatSolver::Result::Unsat);
}

TEST_CASE("empty clause is recognized") {
    SatSolver s;
    s.ensure_vars(2);
    CHECK(!s.add_clause(std::vector<int>{}));
    CHECK(s.solve() == SatSolver::Result::Unsat);
}

TEST_CASE("duplicate and tautological literals are tolerated") {
    SatSolver s;
    s.ensure_vars(2);
    CHECK(s.add_clause({1, 1, 2}));
    CHECK(s.add_clause({-1, 1}));  // tautology, never falsifiable
    CHECK(s.add_clause({-2, -2}));
    CHECK(s.solve() == SatSolver::Result::Sat);
    CHECK(s.model_value(1));
    CHECK(!s.model_value(2));
}

TEST_CASE("verdicts match enumeration on random formulas") {
    std::mt19937_64 rng(0x5eed);
    int sat_seen = 0, unsat_seen = 0;
    for (int trial = 0; trial < 400; trial++) {
        int n_vars = 3 + static_cast<int>(rng() % 10);  // 3..12
        int n_clauses = static_cast<int>(n_vars * (2.0 + (rng() % 30) / 10.0));
        auto clauses = random_formula(rng, n_vars, n_clauses, 1, 4);

        SatSolver s;
        auto got = load_and_solve(s, n_vars, clauses);
        auto expect = enumerate_sat(n_vars, clauses);
        if (expect.has_value()) {
            sat_seen++;
            REQUIRE(got == SatSolver::Result::Sat);
            CHECK(satisfies(clauses, model_code(s, n_vars)));
        } else {
            unsat_seen++;
            REQUIRE(got == SatSolver::Result::Unsat);
        }
    }
    // the mix must exercise both outcomes to mean anything
    CHECK(sat_seen > 50);
    CHECK(unsat_seen > 50);
}

TEST_CASE("verdicts match enumeration on wider formulas") {
    std::mt19937_64 rng(0xbead);
    for (int trial = 0; trial < 60; trial++) {
        int n_vars = 13 + static_cast<int>(rng() % 8);  // 13..20
        int n_clauses = static_cast<int>(n_vars * 4.3);
        auto clauses = random_formula(rng, n_vars, n_clauses, 3, 3);

        SatSolver s;
        auto got = load_and_solve(s, n_vars, clauses);
        auto expect = enumerate_sat(n_vars, clauses);
        REQUIRE(got == (expect ? SatSolver::Result::Sat : SatSolver::Result::Unsat));
        if (expect) CHECK(satisfies(clauses, model_code(s, n_vars)));
    }
}

TEST_CASE("pigeonhole instances are unsatisfiable") {
    for (int holes = 2; holes <= 4; holes++) {
        SatSolver s;
        auto clauses = pigeonhole(holes + 1, holes);
        CHECK(load_and_solve(s, (holes + 1) * holes, clauses) == SatSolver::Result::Unsat);
        if (holes == 4) CHECK(s.conflicts() > 0);  // genuinely searched
    }

    // satisfiable counterpart: as many holes as pigeons
    SatSolver s;
    CHECK(load_and_solve(s, 16, pigeonhole(4, 4)) == SatSolver::Result::Sat);
}

TEST_CASE("assumptions restrict without consuming the solver") {
    SatSolver s;
    s.ensure_vars(3);
    s.add_clause({1, 2});
    s.add_clause({-1, 3});

    CHECK(s.solve({-1, -3}) == SatSolver::Result::Sat);  // 2 picks up the slack
    CHECK(s.model_value(2));
    CHECK(s.solve({1, -3}) == SatSolver::Result::Unsat);
    CHECK(s.solve({1}) == SatSolver::Result::Sat);       // recoverable
    CHECK(s.model_value(3));
    CHECK(s.solve({-2, -1}) == SatSolver::Result::Unsat);
    CHECK(s.solve() == SatSolver::Result::Sat);

    // contradictory assumption pair
    CHECK(s.solve({2, -2}) == SatSolver::Result::Unsat);
    CHECK(s.solve() == SatSolver::Result::Sat);
}

TEST_CASE("assumption verdicts match enumeration") {
    std::mt19937_64 rng(0xf00d);
    for (int trial = 0; trial < 120; trial++) {
        int n_vars = 4 + static_cast<int>(rng() % 7);
        auto clauses = random_formula(rng, n_vars, n_vars * 3, 2, 4);
        SatSolver s;
        s.ensure_vars(n_vars);
        bool loaded = true;
        for (const auto& c : clauses) loaded = loaded && s.add_clause(c);

        for (int probe = 0; probe < 6; probe++) {
            int v1 = 1 + static_cast<int>(rng() % n_vars);
            int v2 = 1 + static_cast<int>(rng() % n_vars);
            if (v1 == v2) continue;
            std::vector<int> assume = {(rng() & 1) ? v1 : -v1, (rng() & 1) ? v2 : -v2};

            auto with_units = clauses;
            for (int lit : assume) with_units.push_back({lit});
            bool expect = enumerate_sat(n_vars, with_units).has_value();
            bool got = loaded && s.solve(assume) == SatSolver::Result::Sat;
            REQUIRE(got == expect);
            if (got) {
                auto m = model_code(s, n_vars);
                CHECK(satisfies(with_units, m));
            }
        }
    }
}

TEST_CASE("incremental clause addition narrows the model set") {
    // force variables one at a time and re-solve between additions
    SatSolver s;
    s.ensure_vars(6);
    for (int v = 1; v <= 6; v++) {
        CHECK(s.add_clause({v % 2 == 0 ? v : -v}));
        REQUIRE(s.solve() == SatSolver::Result::Sat);
        for (int u = 1; u <= v; u++) CHECK(s.model_value(u) == (u % 2 == 0));
    }

    // then contradiction
    CHECK(s.solve({1}) == SatSolver::Result::Unsat);
    s.add_clause({1});
    CHECK(s.solve() == SatSolver::Result::Unsat);
}

TEST_CASE("solved formulas stay solved after unrelated growth") {
    SatSolver s;
    s.ensure_vars(2);
    s.add_clause({1, 2});
    CHECK(s.solve() == SatSolver::Result::Sat);
    int extra = s.new_var();
    CHECK(extra == 3);
    CHECK(s.num_vars() == 3);
    s.add_clause({-extra});
    CHECK(s.solve() == SatSolver::Result::Sat);
    CHECK(!s.model_value(extra));
}

TEST_CASE("determinism: identical histories give identical models and stats") {
    auto run = [](std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        auto clauses = random_formula(rng, 14, 56, 2, 4);
        SatSolver s;
        s.ensure_vars(14);
        for (const auto& c : clauses) s.add_clause(c);
        auto r = s.solve();
        std::uint32_t code = r == SatSolver::Result::Sat ? 0xffffffffu : 0;
        if (r == SatSolver::Result::Sat) code = 0;
        if (r == SatSolver::Result::Sat)
            for (int v = 1; v <= 14; v++) code |= static_cast<std::uint32_t>(s.model_value(v)) << v;
        return std::tuple(r, code, s.conflicts(), s.decisions(), s.propagations());
    };
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull})
        CHECK(run(seed) == run(seed));
}

TEST_CASE("statistics move and clause count tracks additions") {
    SatSolver s;
    auto clauses = pigeonhole(5, 4);
    s.ensure_vars(20);
    std::size_t added = 0;
    for (const auto& c : clauses) {
        s.add_clause(c);
        added++;
    }
    CHECK(s.clause_count() >= added);  // learned clauses may add more later
    CHECK(s.solve() == SatSolver::Result::Unsat);
    CHECK(s.conflicts() > 0);
    CHECK(s.decisions() > 0);
    CHECK(s.propagations() > 0);
}

TEST_CASE("unit-only formulas solve without decisions") {
    SatSolver s;
    s.ensure_vars(4);
    for (int v = 1; v <= 4; v++) s.add_clause({v});
    CHECK(s.solve() == SatSolver::Result::Sat);
    CHECK(s.decisions() == 0);
    for (int v = 1; v <= 4; v++) CHECK(s.model_value(v));
}
