#include "cnf.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace locklab {

namespace {

void encode_and_like(CnfFormula& f, const std::vector<int>& ins, int out, bool invert) {
    // AND: (-a1 v ... v -an v o) plus (ai v -o); NAND flips the output sign.
    int o = invert ? -out : out;
    Clause big;
    big.reserve(ins.size() + 1);
    for (int a : ins) big.push_back(-a);
    big.push_back(o);
    f.add_clause(std::move(big));
    for (int a : ins) f.add_clause({a, -o});
}

void encode_or_like(CnfFormula& f, const std::vector<int>& ins, int out, bool invert) {
    // OR: (a1 v ... v an v -o) plus (-ai v o); NOR flips the output sign.
    int o = invert ? -out : out;
    Clause big;
    big.reserve(ins.size() + 1);
    for (int a : ins) big.push_back(a);
    big.push_back(-o);
    f.add_clause(std::move(big));
    for (int a : ins) f.add_clause({-a, o});
}

void encode_xor2(CnfFormula& f, int a, int b, int out) {
    f.add_clause({-a, -b, -out});
    f.add_clause({-a, b, out});
    f.add_clause({a, -b, out});
    f.add_clause({a, b, -out});
}

void encode_xnor2(CnfFormula& f, int a, int b, int out) {
    f.add_clause({-a, -b, out});
    f.add_clause({-a, b, -out});
    f.add_clause({a, -b, -out});
    f.add_clause({a, b, out});
}

} // namespace

void encode_gate(CnfFormula& f, GateKind kind, const std::vector<int>& inputs, int output) {
    switch (kind) {
    case GateKind::And:  encode_and_like(f, inputs, output, false); return;
    case GateKind::Nand: encode_and_like(f, inputs, output, true); return;
    case GateKind::Or:   encode_or_like(f, inputs, output, false); return;
    case GateKind::Nor:  encode_or_like(f, inputs, output, true); return;
    case GateKind::Not:
        f.add_clause({inputs[0], output});
        f.add_clause({-inputs[0], -output});
        return;
    case GateKind::Buf:
        f.add_clause({-inputs[0], output});
        f.add_clause({inputs[0], -output});
        return;
    case GateKind::Xor:
    case GateKind::Xnor: {
        // Fold left; only the last stage distinguishes XOR from XNOR, so an
        // n-ary XNOR is the complement of the n-ary parity.
        int acc = inputs[0];
        for (std::size_t i = 1; i + 1 < inputs.size(); i++) {
            int t = f.new_var();
            encode_xor2(f, acc, inputs[i], t);
            acc = t;
        }
        if (kind == GateKind::Xor) encode_xor2(f, acc, inputs.back(), output);
        else encode_xnor2(f, acc, inputs.back(), output);
        return;
    }
    }
}

NetVarMap encode_circuit(const Circuit& c, CnfFormula& f,
                         const std::unordered_map<std::string, int>& bound,
                         const std::string& label) {
    NetVarMap map;
    map.label = label;
    for (const auto& [net, var] : bound) {
        if (!c.has_net(net))
            throw Error(ErrorKind::Argument, "bound net '" + net + "' not in circuit");
        map.vars[net] = var;
    }

    auto assign = [&](const std::string& net) {
        if (!map.vars.count(net)) map.vars[net] = f.new_var();
    };

    for (const auto& in : c.inputs()) assign(in);
    for (const auto& out : c.outputs()) assign(out);

    // Internal nets in breadth-first order from each output in turn (a net
    // reached from several outputs is numbered by the first); keeps variable
    // numbering reproducible.
    std::vector<char> visited(c.gates().size(), 0);
    std::deque<std::size_t> queue;
    auto visit_driver = [&](const std::string& net) {
        if (c.is_primary_input(net)) return;
        std::size_t gi = *c.driver_index(net);
        if (!visited[gi]) {
            visited[gi] = 1;
            queue.push_back(gi);
        }
    };
    for (const auto& out : c.outputs()) {
        visit_driver(out);
        while (!queue.empty()) {
            std::size_t gi = queue.front();
            queue.pop_front();
            for (const auto& in : c.gates()[gi].inputs) {
                if (c.is_primary_input(in)) continue;
                assign(in);
                visit_driver(in);
            }
        }
    }
    for (const auto& g : c.gates()) assign(g.output);  // anything dangling

    for (const auto& g : c.gates()) {
        std::vector<int> ins;
        ins.reserve(g.inputs.size());
        for (const auto& in : g.inputs) ins.push_back(map.vars.at(in));
        encode_gate(f, g.kind, ins, map.vars.at(g.output));
    }

    f.net_maps.push_back(map);
    return map;
}

NetVarMap encode_under_io(const Circuit& c,
                          const std::vector<std::string>& data_inputs,
                          const std::vector<std::string>& key_inputs,
                          const IoPair& p,
                          const std::vector<int>& key_vars,
                          CnfFormula& f,
                          const std::string& label) {
    if (p.inputs.size() != data_inputs.size())
        throw Error(ErrorKind::Width, "IO pair input width does not match data inputs");
    if (p.outputs.size() != c.outputs().size())
        throw Error(ErrorKind::Width, "IO pair output width does not match outputs");
    if (key_vars.size() != key_inputs.size())
        throw Error(ErrorKind::Width, "key variable count does not match key inputs");

    std::unordered_map<std::string, int> bound;
    for (std::size_t i = 0; i < key_inputs.size(); i++) bound[key_inputs[i]] = key_vars[i];

    NetVarMap map = encode_circuit(c, f, bound, label);
    for (std::size_t i = 0; i < data_inputs.size(); i++) {
        int v = map.at(data_inputs[i]);
        f.add_clause({p.inputs[i] ? v : -v});
    }
    for (std::size_t i = 0; i < c.outputs().size(); i++) {
        int v = map.at(c.outputs()[i]);
        f.add_clause({p.outputs[i] ? v : -v});
    }
    return map;
}

CnfFormula substitute(const CnfFormula& f, const VarAssignment& fixed) {
    CnfFormula out;
    out.var_count = f.var_count;
    out.contradiction = f.contradiction;
    out.net_maps = f.net_maps;
    for (const Clause& cl : f.clauses) {
        Clause kept;
        bool satisfied = false;
        for (int lit : cl) {
            auto it = fixed.find(std::abs(lit));
            if (it == fixed.end()) {
                kept.push_back(lit);
                continue;
            }
            if ((lit > 0) == it->second) {
                satisfied = true;
                break;
            }
            // false literal: drop it
        }
        if (satisfied) continue;
        if (kept.empty()) out.contradiction = true;
        else out.clauses.push_back(std::move(kept));
    }
    return out;
}

CnfFormula propagate_units(const CnfFormula& f, const std::set<int>& keep_vars) {
    VarAssignment assigned;
    std::vector<Clause> work = f.clauses;
    bool contradiction = f.contradiction;

    bool progress = true;
    while (progress && !contradiction) {
        progress = false;
        std::vector<Clause> next;
        for (Clause& cl : work) {
            Clause kept;
            bool satisfied = false;
            for (int lit : cl) {
                auto it = assigned.find(std::abs(lit));
                if (it == assigned.end()) {
                    kept.push_back(lit);
                    continue;
                }
                if ((lit > 0) == it->second) {
                    satisfied = true;
                    break;
                }
            }
            if (satisfied) continue;
            if (kept.empty()) {
                contradiction = true;
                break;
            }
            if (kept.size() == 1) {
                int lit = kept[0];
                auto it = assigned.find(std::abs(lit));
                if (it != assigned.end() && it->second != (lit > 0)) {
                    contradiction = true;
                    break;
                }
                assigned[std::abs(lit)] = lit > 0;
                progress = true;
                continue;  // the unit is consumed
            }
            next.push_back(std::move(kept));
        }
        work = std::move(next);
    }

    CnfFormula out;
    out.var_count = f.var_count;
    out.contradiction = contradiction;
    out.net_maps = f.net_maps;
    if (!contradiction) {
        out.clauses = std::move(work);
        for (int v : keep_vars) {
            auto it = assigned.find(v);
            if (it != assigned.end()) out.clauses.push_back({it->second ? v : -v});
        }
    }
    return out;
}

CnfFormula simplify(const CnfFormula& f, const VarAssignment& fixed,
                    const std::set<int>& keep_vars) {
    return propagate_units(substitute(f, fixed), keep_vars);
}

MiterEncoding build_miter(const Circuit& c,
                          const std::vector<std::string>& data_inputs,
                          const std::vector<std::string>& key_inputs,
                          bool retractable) {
    MiterEncoding m;
    for (std::size_t i = 0; i < data_inputs.size(); i++) m.data_vars.push_back(m.formula.new_var());
    for (std::size_t i = 0; i < key_inputs.size(); i++) m.key_a.push_back(m.formula.new_var());
    for (std::size_t i = 0; i < key_inputs.size(); i++) m.key_b.push_back(m.formula.new_var());

    auto encode_copy = [&](const std::vector<int>& keys, const char* label) {
        std::unordered_map<std::string, int> bound;
        for (std::size_t i = 0; i < data_inputs.size(); i++) bound[data_inputs[i]] = m.data_vars[i];
        for (std::size_t i = 0; i < key_inputs.size(); i++) bound[key_inputs[i]] = keys[i];
        NetVarMap map = encode_circuit(c, m.formula, bound, label);
        std::vector<int> outs;
        for (const auto& out : c.outputs()) outs.push_back(map.at(out));
        return outs;
    };
    m.out_a = encode_copy(m.key_a, "A");
    m.out_b = encode_copy(m.key_b, "B");

    Clause any_diff;
    if (retractable) {
        m.activation_var = m.formula.new_var();
        any_diff.push_back(-m.activation_var);
    }
    for (std::size_t i = 0; i < m.out_a.size(); i++) {
        int d = m.formula.new_var();
        encode_xor2(m.formula, m.out_a[i], m.out_b[i], d);
        m.diff_vars.push_back(d);
        any_diff.push_back(d);
    }
    m.formula.add_clause(std::move(any_diff));  // empty when there are no outputs
    return m;
}

std::string to_dimacs(const CnfFormula& f, const std::string& title) {
    std::ostringstream os;
    if (!title.empty()) os << "c " << title << "\n";
    for (const auto& map : f.net_maps) {
        std::vector<std::pair<int, std::string>> rows;
        rows.reserve(map.vars.size());
        for (const auto& [net, var] : map.vars) rows.emplace_back(var, net);
        std::sort(rows.begin(), rows.end());
        for (const auto& [var, net] : rows) {
            os << "c net " << var << " ";
            if (!map.label.empty()) os << map.label << ":";
            os << net << "\n";
        }
    }
    std::size_t n_clauses = f.clauses.size() + (f.contradiction ? 1 : 0);
    os << "p cnf " << f.var_count << " " << n_clauses << "\n";
    for (const Clause& cl : f.clauses) {
        for (int lit : cl) os << lit << " ";
        os << "0\n";
    }
    if (f.contradiction) os << "0\n";
    return os.str();
}

CnfFormula parse_dimacs(const std::string& text) {
    CnfFormula f;
    std::istringstream stream(text);
    std::string line;
    bool header_seen = false;
    Clause current;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        line_no++;
        if (line.empty() || line[0] == 'c') continue;
        if (line[0] == '%') break;
        std::istringstream ls(line);
        if (!header_seen) {
            std::string p, fmt;
            int vars = 0;
            long clauses = 0;
            if (!(ls >> p)) continue;
            if (p != "p")
                throw Error(ErrorKind::Parse,
                            "line " + std::to_string(line_no) + ": expected 'p cnf' header");
            if (!(ls >> fmt >> vars >> clauses) || fmt != "cnf" || vars < 0)
                throw Error(ErrorKind::Parse,
                            "line " + std::to_string(line_no) + ": malformed 'p cnf' header");
            f.reserve_vars(vars);
            header_seen = true;
            continue;
        }
        int lit;
        while (ls >> lit) {
            if (lit == 0) {
                f.add_clause(current);
                current.clear();
            } else {
                if (std::abs(lit) > f.var_count)
                    throw Error(ErrorKind::Parse,
                                "line " + std::to_string(line_no) + ": literal " +
                                    std::to_string(lit) + " exceeds declared variable count");
                current.push_back(lit);
            }
        }
        if (!ls.eof()) {
            std::string tok;
            ls.clear();
            ls >> tok;
            if (tok == "%") break;
            throw Error(ErrorKind::Parse,
                        "line " + std::to_string(line_no) + ": unexpected token '" + tok + "'");
        }
    }
    if (!header_seen)
        throw Error(ErrorKind::Parse, "missing 'p cnf' header");
    if (!current.empty())
        throw Error(ErrorKind::Parse, "final clause is missing its terminating 0");
    return f;
}

} // namespace locklab
