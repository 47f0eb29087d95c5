#pragma once

// Shared fixtures: reference circuits, independent brute-force oracles, and
// generators used across the test binaries.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cnf.hpp"
#include "cone.hpp"
#include "lock.hpp"
#include "netlist.hpp"

namespace locklab::testing {

// Four-input AND tree and its keyed variant with three XOR/XNOR key gates
// (keys on the output and the two first-level ANDs; correct key 001).
inline const char* kFig3OracleBench = R"(
INPUT(x0)
INPUT(x1)
INPUT(x2)
INPUT(x3)
OUTPUT(y0)
G1 = AND(x0, x1)
G2 = AND(x2, x3)
G0 = AND(G1, G2)
y0 = BUF(G0)
)";

inline const char* kFig3LockedBench = R"(
INPUT(x0)
INPUT(x1)
INPUT(x2)
INPUT(x3)
INPUT(k0)
INPUT(k1)
INPUT(k2)
OUTPUT(y0)
G1 = AND(x0, x1)
G2 = AND(x2, x3)
Gk1 = XOR(k1, G1)
Gk2 = XNOR(G2, k2)
G0 = AND(Gk1, Gk2)
y0 = XOR(k0, G0)
)";

// Two-output host: y0 as above, y1 = OR of the second and a third AND pair.
inline const char* kFig4OracleBench = R"(
INPUT(x0)
INPUT(x1)
INPUT(x2)
INPUT(x3)
INPUT(x4)
INPUT(x5)
OUTPUT(y0)
OUTPUT(y1)
G1 = AND(x0, x1)
G2 = AND(x2, x3)
G3 = AND(x4, x5)
G0 = AND(G1, G2)
y0 = BUF(G0)
y1 = OR(G2, G3)
)";

inline const char* kFig4LockedBench = R"(
INPUT(x0)
INPUT(x1)
INPUT(x2)
INPUT(x3)
INPUT(x4)
INPUT(x5)
INPUT(k0)
INPUT(k1)
INPUT(k2)
OUTPUT(y0)
OUTPUT(y1)
G1 = AND(x0, x1)
G2 = AND(x2, x3)
G3 = AND(x4, x5)
Gk1 = XOR(k1, G1)
Gk2 = XNOR(k2, G2)
G0 = AND(Gk1, Gk2)
y0 = XOR(k0, G0)
y1 = OR(Gk2, G3)
)";

inline Circuit fig3_oracle() { return parse_bench(kFig3OracleBench, "fig3_oracle"); }
inline Circuit fig3_locked() { return parse_bench(kFig3LockedBench, "fig3_locked"); }
inline Circuit fig4_oracle() { return parse_bench(kFig4OracleBench, "fig4_oracle"); }
inline Circuit fig4_locked() { return parse_bench(kFig4LockedBench, "fig4_locked"); }

inline LockedCircuit fig3_locked_lc() { return locked_from_circuit(fig3_locked(), "k"); }
inline LockedCircuit fig4_locked_lc() { return locked_from_circuit(fig4_locked(), "k"); }

inline KeyVector bits(const std::string& s) { return key_from_bits(s); }

inline std::vector<std::uint8_t> vec(const std::string& s) {
    std::vector<std::uint8_t> v;
    for (char c : s) v.push_back(c == '1');
    return v;
}

// Structural equality up to input order of commutative gates and gate list
// order.
inline bool same_structure(const Circuit& a, const Circuit& b) {
    if (a.inputs() != b.inputs() || a.outputs() != b.outputs()) return false;
    auto canon = [](const Circuit& c) {
        std::vector<std::tuple<std::string, GateKind, std::vector<std::string>>> gs;
        for (const auto& g : c.gates()) {
            std::vector<std::string> ins = g.inputs;
            if (g.kind != GateKind::Not && g.kind != GateKind::Buf)
                std::sort(ins.begin(), ins.end());
            gs.emplace_back(g.output, g.kind, std::move(ins));
        }
        std::sort(gs.begin(), gs.end());
        return gs;
    };
    return canon(a) == canon(b);
}

// Functional equality by exhaustive simulation (inputs must match by name
// and order; outputs compared positionally).
inline bool same_function(const Circuit& a, const Circuit& b) {
    if (a.inputs().size() != b.inputs().size()) return false;
    if (a.outputs().size() != b.outputs().size()) return false;
    std::size_t n = a.inputs().size();
    if (n > 20) return false;
    std::vector<std::uint8_t> va(a.net_count()), vb(b.net_count());
    for (std::uint32_t code = 0; code < (1u << n); code++) {
        for (std::size_t i = 0; i < n; i++) va[i] = vb[i] = (code >> i) & 1;
        a.eval(va);
        b.eval(vb);
        for (std::size_t j = 0; j < a.outputs().size(); j++)
            if (va[a.output_net_id(j)] != vb[b.output_net_id(j)]) return false;
    }
    return true;
}

// Evaluates one output of a circuit for a packed input code (bit i of the
// code feeds input i).
inline bool eval_output(const Circuit& c, std::uint32_t code, std::size_t out_idx = 0) {
    std::vector<std::uint8_t> v(c.net_count(), 0);
    for (std::size_t i = 0; i < c.inputs().size(); i++) v[i] = (code >> i) & 1;
    c.eval(v);
    return v[c.output_net_id(out_idx)] != 0;
}

// Clause sets normalized for order-insensitive comparison.
inline std::multiset<Clause> clause_set(const CnfFormula& f) {
    std::multiset<Clause> out;
    for (Clause c : f.clauses) {
        std::sort(c.begin(), c.end(), [](int a, int b) {
            return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b;
        });
        out.insert(std::move(c));
    }
    return out;
}

inline std::multiset<Clause> clause_set(const std::vector<Clause>& clauses) {
    CnfFormula f;
    f.clauses = clauses;
    return clause_set(f);
}

// --- truth-table CNF oracle -------------------------------------------

// A clause satisfied check over packed assignments: bit v-1 of `assign`
// holds variable v. Usable up to 25 variables.
struct PackedClause {
    std::uint32_t pos = 0, neg = 0;
};

inline std::vector<PackedClause> pack_clauses(const std::vector<Clause>& clauses) {
    std::vector<PackedClause> out;
    out.reserve(clauses.size());
    for (const auto& c : clauses) {
        PackedClause p;
        for (int lit : c) {
            std::uint32_t bit = 1u << (std::abs(lit) - 1);
            if (lit > 0) p.pos |= bit;
            else p.neg |= bit;
        }
        out.push_back(p);
    }
    return out;
}

// First satisfying assignment by enumeration, or nullopt when unsatisfiable.
inline std::optional<std::uint32_t> enumerate_sat(int n_vars,
                                                  const std::vector<Clause>& clauses) {
    auto packed = pack_clauses(clauses);
    std::uint64_t space = 1ull << n_vars;
    for (std::uint64_t a = 0; a < space; a++) {
        auto assign = static_cast<std::uint32_t>(a);
        bool ok = true;
        for (const auto& p : packed) {
            if (((p.pos & assign) | (p.neg & ~assign)) == 0) {
                ok = false;
                break;
            }
        }
        if (ok) return assign;
    }
    return std::nullopt;
}

inline bool satisfies(const std::vector<Clause>& clauses, std::uint32_t assign) {
    for (const auto& p : pack_clauses(clauses))
        if (((p.pos & assign) | (p.neg & ~assign)) == 0) return false;
    return true;
}

// Pigeonhole formula: p pigeons into h holes, unsatisfiable when p > h.
// Variable 1 + pigeon*h + hole.
inline std::vector<Clause> pigeonhole(int pigeons, int holes) {
    std::vector<Clause> clauses;
    auto var = [&](int p, int h) { return 1 + p * holes + h; };
    for (int p = 0; p < pigeons; p++) {
        Clause c;
        for (int h = 0; h < holes; h++) c.push_back(var(p, h));
        clauses.push_back(std::move(c));
    }
    for (int h = 0; h < holes; h++)
        for (int p = 0; p < pigeons; p++)
            for (int q = p + 1; q < pigeons; q++)
                clauses.push_back({-var(p, h), -var(q, h)});
    return clauses;
}

// Random formula without tautological or empty clauses.
inline std::vector<Clause> random_formula(std::mt19937_64& rng, int n_vars, int n_clauses,
                                          int min_len = 1, int max_len = 5) {
    std::uniform_int_distribution<int> len_d(min_len, max_len);
    std::uniform_int_distribution<int> var_d(1, n_vars);
    std::vector<Clause> clauses;
    clauses.reserve(n_clauses);
    for (int i = 0; i < n_clauses; i++) {
        int len = std::min(len_d(rng), n_vars);
        std::set<int> vars;
        while (static_cast<int>(vars.size()) < len) vars.insert(var_d(rng));
        Clause c;
        for (int v : vars) c.push_back((rng() & 1) ? v : -v);
        clauses.push_back(std::move(c));
    }
    return clauses;
}

// --- circuit generators -------------------------------------------------

// Balanced AND tree over n inputs, output y0.
inline Circuit and_tree(std::size_t n, const std::string& name = "and_tree") {
    std::vector<std::string> inputs;
    for (std::size_t i = 0; i < n; i++) inputs.push_back("x" + std::to_string(i));
    std::vector<Gate> gates;
    std::vector<std::string> layer = inputs;
    int counter = 0;
    while (layer.size() > 1) {
        std::vector<std::string> next;
        for (std::size_t i = 0; i + 1 < layer.size(); i += 2) {
            std::string g = "t" + std::to_string(counter++);
            gates.push_back({g, GateKind::And, {layer[i], layer[i + 1]}});
            next.push_back(g);
        }
        if (layer.size() % 2) next.push_back(layer.back());
        layer = std::move(next);
    }
    gates.push_back({"y0", GateKind::Buf, {layer[0]}});
    return Circuit(name, std::move(inputs), {"y0"}, std::move(gates));
}

// Array multiplier: p = a * b, LSB-first inputs a0.., b0.. and outputs p0...
inline Circuit multiplier(std::size_t n, std::size_t m, const std::string& name = "mult") {
    std::vector<std::string> inputs;
    for (std::size_t i = 0; i < n; i++) inputs.push_back("a" + std::to_string(i));
    for (std::size_t j = 0; j < m; j++) inputs.push_back("b" + std::to_string(j));
    std::vector<Gate> gates;
    std::vector<std::string> acc(n + m);
    int counter = 0;

    // Adds `net` into the accumulator at `pos`, rippling the carry. Carries
    // past the top bit are structurally possible but always evaluate to 0;
    // the accumulator grows to hold them and the outputs ignore the excess.
    auto add_bit = [&](std::size_t pos, std::string net) {
        for (;;) {
            if (pos >= acc.size()) acc.resize(pos + 1);
            if (acc[pos].empty()) {
                acc[pos] = std::move(net);
                return;
            }
            std::string s = "s" + std::to_string(counter);
            std::string c = "c" + std::to_string(counter);
            counter++;
            gates.push_back({s, GateKind::Xor, {acc[pos], net}});
            gates.push_back({c, GateKind::And, {acc[pos], net}});
            acc[pos] = s;
            net = c;
            pos++;
        }
    };

    for (std::size_t i = 0; i < n; i++)
        for (std::size_t j = 0; j < m; j++) {
            std::string pp = "pp" + std::to_string(i) + "_" + std::to_string(j);
            gates.push_back({pp, GateKind::And, {inputs[i], inputs[n + j]}});
            add_bit(i + j, pp);
        }

    std::vector<std::string> outputs;
    for (std::size_t k = 0; k < n + m; k++) {
        std::string p = "p" + std::to_string(k);
        if (acc[k].empty()) {
            // position never received a bit (only possible at the top)
            gates.push_back({p, GateKind::Xor, {inputs[0], inputs[0]}});
        } else {
            gates.push_back({p, GateKind::Buf, {acc[k]}});
        }
        outputs.push_back(std::move(p));
    }
    return Circuit(name, std::move(inputs), std::move(outputs), std::move(gates));
}

// Random connected combinational circuit with the requested shape.
inline Circuit random_circuit(std::mt19937_64& rng, std::size_t n_inputs, std::size_t n_gates,
                              std::size_t n_outputs = 1) {
    std::vector<std::string> inputs;
    for (std::size_t i = 0; i < n_inputs; i++) inputs.push_back("x" + std::to_string(i));
    std::vector<std::string> nets = inputs;
    std::vector<Gate> gates;
    const GateKind kinds[] = {GateKind::And,  GateKind::Nand, GateKind::Or,  GateKind::Nor,
                              GateKind::Xor,  GateKind::Xnor, GateKind::Not, GateKind::Buf};
    for (std::size_t i = 0; i < n_gates; i++) {
        GateKind kind = kinds[rng() % 8];
        std::string out = "g" + std::to_string(i);
        std::vector<std::string> ins;
        std::size_t arity = (kind == GateKind::Not || kind == GateKind::Buf) ? 1 : 2;
        for (std::size_t a = 0; a < arity; a++) ins.push_back(nets[rng() % nets.size()]);
        gates.push_back({out, kind, std::move(ins)});
        nets.push_back(out);
    }
    std::vector<std::string> outputs;
    for (std::size_t o = 0; o < n_outputs; o++)
        outputs.push_back(gates[gates.size() - 1 - o].output);
    return Circuit("rand", std::move(inputs), std::move(outputs), std::move(gates));
}

} // namespace locklab::testing
