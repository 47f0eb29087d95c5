#include "cone.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace locklab {

int Cone::depth() const {
    int d = 0;
    for (const auto& [gate, layer] : layers) d = std::max(d, layer);
    return d;
}

namespace {

Cone extract_cone(const Circuit& c, const std::string& output) {
    Cone cone;
    cone.root = output;

    std::unordered_set<std::string> input_members;
    std::deque<std::size_t> queue;

    auto root_driver = c.driver_index(output);
    if (root_driver) {
        cone.layers[*root_driver] = 0;
        cone.gates.push_back(*root_driver);
        queue.push_back(*root_driver);
    } else {
        input_members.insert(output);  // output wired straight to an input
    }

    while (!queue.empty()) {
        std::size_t gi = queue.front();
        queue.pop_front();
        int layer = cone.layers.at(gi);
        for (const auto& in : c.gates()[gi].inputs) {
            if (c.is_primary_input(in)) {
                input_members.insert(in);
                continue;
            }
            std::size_t di = *c.driver_index(in);
            if (!cone.layers.count(di)) {
                cone.layers[di] = layer + 1;
                cone.gates.push_back(di);
                queue.push_back(di);
            }
        }
    }

    for (const auto& in : c.inputs())
        if (input_members.count(in)) cone.inputs.push_back(in);
    return cone;
}

} // namespace

std::vector<Cone> extract_cones(const Circuit& c) {
    std::vector<Cone> cones;
    cones.reserve(c.outputs().size());
    for (const auto& out : c.outputs()) cones.push_back(extract_cone(c, out));
    return cones;
}

Cone largest_cone(const Circuit& c) {
    if (c.outputs().empty())
        throw Error(ErrorKind::Argument, "circuit has no outputs");
    auto cones = extract_cones(c);
    std::size_t best = 0;
    for (std::size_t i = 1; i < cones.size(); i++)
        if (cones[i].node_count() > cones[best].node_count()) best = i;
    return std::move(cones[best]);
}

Circuit cone_to_circuit(const Circuit& c, const Cone& cone) {
    std::vector<std::size_t> members = cone.gates;
    std::sort(members.begin(), members.end());
    std::vector<Gate> gates;
    gates.reserve(members.size());
    for (std::size_t gi : members) gates.push_back(c.gates()[gi]);

    std::string name = c.name().empty() ? cone.root : c.name() + "." + cone.root;
    return Circuit(name, cone.inputs, {cone.root}, std::move(gates));
}

std::vector<std::size_t> insertion_order(const Cone& cone) { return cone.gates; }

} // namespace locklab
