#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "netlist.hpp"

namespace locklab {

using Clause = std::vector<int>;  // DIMACS-signed literals, 1-based variables

struct NetVarMap {
    std::string label;
    std::unordered_map<std::string, int> vars;

    int at(const std::string& net) const {
        auto it = vars.find(net);
        if (it == vars.end())
            throw Error(ErrorKind::Argument, "no variable for net '" + net + "'");
        return it->second;
    }
};

struct CnfFormula {
    int var_count = 0;
    std::vector<Clause> clauses;
    bool contradiction = false;  // an empty clause was derived
    std::vector<NetVarMap> net_maps;

    int new_var() { return ++var_count; }
    void reserve_vars(int n) { if (n > var_count) var_count = n; }
    void add_clause(Clause c) {
        if (c.empty()) contradiction = true;
        else clauses.push_back(std::move(c));
    }
};

// Appends the Tseitin clauses for one gate. Inputs and output are CNF
// variables. XOR/XNOR with more than two inputs fold left through fresh
// intermediate variables drawn from f.
void encode_gate(CnfFormula& f, GateKind kind, const std::vector<int>& inputs, int output);

// Tseitin-encodes the circuit into f and returns the net-to-variable map
// (also recorded in f.net_maps). `bound` pre-assigns variables to nets;
// every other net gets a fresh variable in a fixed order: inputs in
// declaration order, then outputs, then internal nets in breadth-first
// order from each output.
NetVarMap encode_circuit(const Circuit& c, CnfFormula& f,
                         const std::unordered_map<std::string, int>& bound = {},
                         const std::string& label = "");

// One observed input/output pair, bits in declaration order.
struct IoPair {
    std::vector<std::uint8_t> inputs;
    std::vector<std::uint8_t> outputs;
};

// Appends a copy of the circuit constrained to reproduce the IO pair `p`.
// Key input nets (`key_inputs`) are bound to the caller's shared key
// variables; data inputs and outputs get fresh variables pinned to the
// observed bits with unit clauses.
NetVarMap encode_under_io(const Circuit& c,
                          const std::vector<std::string>& data_inputs,
                          const std::vector<std::string>& key_inputs,
                          const IoPair& p,
                          const std::vector<int>& key_vars,
                          CnfFormula& f,
                          const std::string& label = "");

using VarAssignment = std::map<int, bool>;

// Constant substitution: satisfied clauses are dropped, false literals
// deleted. Derived empty clauses mark the result contradictory.
CnfFormula substitute(const CnfFormula& f, const VarAssignment& fixed);

// Unit propagation to fixpoint. Consumed unit clauses disappear except for
// variables in `keep_vars`, whose derived values are re-emitted as unit
// clauses so the formula keeps stating them.
CnfFormula propagate_units(const CnfFormula& f, const std::set<int>& keep_vars = {});

// substitute() followed by propagate_units(); preserves the solution set
// over the remaining variables.
CnfFormula simplify(const CnfFormula& f, const VarAssignment& fixed,
                    const std::set<int>& keep_vars = {});

// Two copies of a keyed circuit sharing data inputs with distinct key
// variables, plus the assertion that some output differs.
struct MiterEncoding {
    CnfFormula formula;
    std::vector<int> data_vars;
    std::vector<int> key_a, key_b;
    std::vector<int> out_a, out_b;
    std::vector<int> diff_vars;
    // Nonzero when built retractable: the difference clause only fires while
    // this variable is assumed true, so the same formula can also be solved
    // without the output-disagreement requirement.
    int activation_var = 0;
};

MiterEncoding build_miter(const Circuit& c,
                          const std::vector<std::string>& data_inputs,
                          const std::vector<std::string>& key_inputs,
                          bool retractable = false);

std::string to_dimacs(const CnfFormula& f, const std::string& title = "");

// Reads DIMACS CNF: comments, "p cnf V C", zero-terminated clauses. The
// SATLIB '%' trailer is tolerated.
CnfFormula parse_dimacs(const std::string& text);

} // namespace locklab
