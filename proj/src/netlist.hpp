#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "error.hpp"

namespace locklab {

enum class GateKind { And, Nand, Or, Nor, Xor, Xnor, Not, Buf };

const char* gate_kind_name(GateKind kind);

// Case-insensitive; accepts BUFF as an alias for BUF (common in circulating
// bench files). Returns nullopt for unknown names.
std::optional<GateKind> gate_kind_from_name(const std::string& name);

struct Gate {
    std::string output;
    GateKind kind = GateKind::Buf;
    std::vector<std::string> inputs;
};

using Assignment = std::map<std::string, bool>;

// Combinational netlist. Validated on construction: unique drivers, every
// referenced net driven, sane arities, no cycles. Immutable afterwards.
class Circuit {
public:
    Circuit() = default;
    Circuit(std::string name,
            std::vector<std::string> inputs,
            std::vector<std::string> outputs,
            std::vector<Gate> gates);

    const std::string& name() const { return name_; }
    const std::vector<std::string>& inputs() const { return inputs_; }
    const std::vector<std::string>& outputs() const { return outputs_; }
    const std::vector<Gate>& gates() const { return gates_; }

    void set_name(std::string name) { name_ = std::move(name); }

    bool is_primary_input(const std::string& net) const;
    bool has_net(const std::string& net) const;

    // Index into gates() of the gate driving `net`, nullopt for primary
    // inputs. Throws for unknown nets.
    std::optional<std::size_t> driver_index(const std::string& net) const;

    // Gate indices in dependency order (drivers before consumers).
    const std::vector<std::size_t>& topo_gates() const { return topo_; }

    // Integer net ids for tight simulation loops. Inputs occupy ids
    // [0, inputs().size()) in input-list order; gate outputs follow.
    std::size_t net_count() const { return net_names_.size(); }
    int net_id(const std::string& net) const;
    const std::string& net_name(int id) const { return net_names_[id]; }
    int output_net_id(std::size_t output_index) const { return output_ids_[output_index]; }

    // Evaluates all gates in topological order. `values` must be sized
    // net_count() with the input slots already filled.
    void eval(std::vector<std::uint8_t>& values) const;

private:
    void validate_and_compile();

    std::string name_;
    std::vector<std::string> inputs_;
    std::vector<std::string> outputs_;
    std::vector<Gate> gates_;

    struct CompiledGate {
        GateKind kind;
        int out;
        std::vector<int> ins;
    };

    std::unordered_map<std::string, int> net_ids_;
    std::vector<std::string> net_names_;
    std::unordered_map<std::string, std::size_t> driver_;  // net -> gate index
    std::vector<std::size_t> topo_;
    std::vector<CompiledGate> compiled_;  // parallel to gates_
    std::vector<int> output_ids_;
};

// Parses the bench dialect: INPUT(n), OUTPUT(n), n = KIND(a, b, ...),
// '#' comments, case-insensitive kinds. Sequential elements are rejected.
Circuit parse_bench(const std::string& text, const std::string& name = "");

std::string write_bench(const Circuit& c);

// Evaluates the circuit under a complete input assignment and returns the
// values of the primary outputs.
Assignment simulate(const Circuit& c, const Assignment& inputs);

// Gate indices in dependency order (drivers before consumers).
inline const std::vector<std::size_t>& topo_order(const Circuit& c) { return c.topo_gates(); }

bool eval_gate(GateKind kind, const std::vector<std::uint8_t>& in);

} // namespace locklab
