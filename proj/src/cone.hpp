#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "netlist.hpp"

namespace locklab {

// Transitive fan-in of one primary output. Gates are stored in breadth-first
// order from the root: ascending layer, first-visited order within a layer.
// A gate's layer is its distance from the root gate (root gate = 0).
struct Cone {
    std::string root;
    std::vector<std::size_t> gates;   // indices into the parent circuit
    std::vector<std::string> inputs;  // member primary inputs, parent order
    std::unordered_map<std::size_t, int> layers;

    std::size_t node_count() const { return gates.size() + inputs.size(); }
    int depth() const;
};

// One cone per primary output, in output order.
std::vector<Cone> extract_cones(const Circuit& c);

// Largest node count; ties broken by lowest output position.
Cone largest_cone(const Circuit& c);

// The cone as a standalone circuit: member inputs, the root as the only
// output, member gates in parent gate-list order.
Circuit cone_to_circuit(const Circuit& c, const Cone& cone);

// Key-gate insertion order: ascending layer, first-visit within a layer.
std::vector<std::size_t> insertion_order(const Cone& cone);

} // namespace locklab
