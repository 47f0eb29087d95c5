#include "netlist.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>

namespace locklab {

namespace {

std::string upper(std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

bool is_name_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' &&
           c != ',' && c != '=' && c != '#';
}

[[noreturn]] void parse_fail(std::size_t line, std::size_t col, const std::string& msg) {
    std::ostringstream os;
    os << "line " << line << ", col " << col << ": " << msg;
    throw Error(ErrorKind::Parse, os.str());
}

// Cursor over a single already comment-stripped line.
struct LineScanner {
    const std::string& s;
    std::size_t line_no;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) pos++;
    }
    bool at_end() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    void expect(char c, const char* what) {
        skip_ws();
        if (pos >= s.size() || s[pos] != c)
            parse_fail(line_no, pos + 1, std::string("expected ") + what);
        pos++;
    }
    std::string name(const char* what) {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && is_name_char(s[pos])) pos++;
        if (pos == start)
            parse_fail(line_no, pos + 1, std::string("expected ") + what);
        return s.substr(start, pos - start);
    }
};

bool looks_sequential(const std::string& kind) {
    return kind.rfind("DFF", 0) == 0 || kind == "LATCH" || kind == "DLAT" ||
           kind.rfind("SDFF", 0) == 0;
}

} // namespace

const char* gate_kind_name(GateKind kind) {
    switch (kind) {
    case GateKind::And:  return "AND";
    case GateKind::Nand: return "NAND";
    case GateKind::Or:   return "OR";
    case GateKind::Nor:  return "NOR";
    case GateKind::Xor:  return "XOR";
    case GateKind::Xnor: return "XNOR";
    case GateKind::Not:  return "NOT";
    case GateKind::Buf:  return "BUF";
    }
    return "?";
}

std::optional<GateKind> gate_kind_from_name(const std::string& name) {
    std::string u = upper(name);
    if (u == "AND")  return GateKind::And;
    if (u == "NAND") return GateKind::Nand;
    if (u == "OR")   return GateKind::Or;
    if (u == "NOR")  return GateKind::Nor;
    if (u == "XOR")  return GateKind::Xor;
    if (u == "XNOR") return GateKind::Xnor;
    if (u == "NOT")  return GateKind::Not;
    if (u == "BUF" || u == "BUFF") return GateKind::Buf;
    return std::nullopt;
}

bool eval_gate(GateKind kind, const std::vector<std::uint8_t>& in) {
    switch (kind) {
    case GateKind::And: {
        for (auto v : in) if (!v) return false;
        return true;
    }
    case GateKind::Nand: {
        for (auto v : in) if (!v) return true;
        return false;
    }
    case GateKind::Or: {
        for (auto v : in) if (v) return true;
        return false;
    }
    case GateKind::Nor: {
        for (auto v : in) if (v) return false;
        return true;
    }
    case GateKind::Xor: {
        int p = 0;
        for (auto v : in) p ^= v;
        return p != 0;
    }
    case GateKind::Xnor: {
        int p = 1;
        for (auto v : in) p ^= v;
        return p != 0;
    }
    case GateKind::Not: return !in[0];
    case GateKind::Buf: return in[0] != 0;
    }
    return false;
}

Circuit::Circuit(std::string name,
                 std::vector<std::string> inputs,
                 std::vector<std::string> outputs,
                 std::vector<Gate> gates)
    : name_(std::move(name)),
      inputs_(std::move(inputs)),
      outputs_(std::move(outputs)),
      gates_(std::move(gates)) {
    validate_and_compile();
}

void Circuit::validate_and_compile() {
    net_ids_.clear();
    net_names_.clear();
    driver_.clear();

    auto intern = [&](const std::string& n) {
        auto it = net_ids_.find(n);
        if (it != net_ids_.end()) return it->second;
        int id = static_cast<int>(net_names_.size());
        net_ids_.emplace(n, id);
        net_names_.push_back(n);
        return id;
    };

    for (const auto& in : inputs_) {
        if (net_ids_.count(in))
            throw Error(ErrorKind::Validate, "duplicate input '" + in + "'");
        intern(in);
    }
    for (std::size_t i = 0; i < gates_.size(); i++) {
        const Gate& g = gates_[i];
        if (driver_.count(g.output) || (net_ids_.count(g.output) && static_cast<std::size_t>(net_ids_[g.output]) < inputs_.size()))
            throw Error(ErrorKind::Validate, "duplicate driver for net '" + g.output + "'");
        intern(g.output);
        driver_.emplace(g.output, i);

        std::size_t arity = g.inputs.size();
        if (g.kind == GateKind::Not || g.kind == GateKind::Buf) {
            if (arity != 1)
                throw Error(ErrorKind::Validate,
                            "gate '" + g.output + "': " + gate_kind_name(g.kind) +
                                " takes exactly one input");
        } else if (arity < 2) {
            throw Error(ErrorKind::Validate,
                        "gate '" + g.output + "': " + gate_kind_name(g.kind) +
                            " takes at least two inputs");
        }
    }
    for (const auto& g : gates_) {
        for (const auto& in : g.inputs) {
            if (!net_ids_.count(in))
                throw Error(ErrorKind::Validate, "net '" + in + "' is not driven");
        }
    }
    output_ids_.clear();
    for (const auto& out : outputs_) {
        if (!net_ids_.count(out))
            throw Error(ErrorKind::Validate, "output '" + out + "' is not driven");
        output_ids_.push_back(net_ids_.at(out));
    }

    compiled_.clear();
    compiled_.reserve(gates_.size());
    for (const auto& g : gates_) {
        CompiledGate cg;
        cg.kind = g.kind;
        cg.out = net_ids_.at(g.output);
        cg.ins.reserve(g.inputs.size());
        for (const auto& in : g.inputs) cg.ins.push_back(net_ids_.at(in));
        compiled_.push_back(std::move(cg));
    }

    // Kahn's algorithm over gate-to-gate edges; FIFO keeps the order stable.
    std::vector<int> indeg(gates_.size(), 0);
    std::vector<std::vector<std::size_t>> fanout(gates_.size());
    for (std::size_t i = 0; i < gates_.size(); i++) {
        for (const auto& in : gates_[i].inputs) {
            auto it = driver_.find(in);
            if (it != driver_.end()) {
                indeg[i]++;
                fanout[it->second].push_back(i);
            }
        }
    }
    topo_.clear();
    std::deque<std::size_t> ready;
    for (std::size_t i = 0; i < gates_.size(); i++)
        if (indeg[i] == 0) ready.push_back(i);
    while (!ready.empty()) {
        std::size_t i = ready.front();
        ready.pop_front();
        topo_.push_back(i);
        for (std::size_t j : fanout[i])
            if (--indeg[j] == 0) ready.push_back(j);
    }
    if (topo_.size() != gates_.size()) {
        for (std::size_t i = 0; i < gates_.size(); i++) {
            if (indeg[i] > 0)
                throw Error(ErrorKind::Validate,
                            "cycle detected through net '" + gates_[i].output + "'");
        }
    }
}

bool Circuit::is_primary_input(const std::string& net) const {
    auto it = net_ids_.find(net);
    return it != net_ids_.end() && static_cast<std::size_t>(it->second) < inputs_.size();
}

bool Circuit::has_net(const std::string& net) const { return net_ids_.count(net) != 0; }

std::optional<std::size_t> Circuit::driver_index(const std::string& net) const {
    if (!net_ids_.count(net))
        throw Error(ErrorKind::Argument, "unknown net '" + net + "'");
    auto it = driver_.find(net);
    if (it == driver_.end()) return std::nullopt;
    return it->second;
}

int Circuit::net_id(const std::string& net) const {
    auto it = net_ids_.find(net);
    if (it == net_ids_.end())
        throw Error(ErrorKind::Argument, "unknown net '" + net + "'");
    return it->second;
}

void Circuit::eval(std::vector<std::uint8_t>& values) const {
    static thread_local std::vector<std::uint8_t> scratch;
    for (std::size_t t : topo_) {
        const CompiledGate& g = compiled_[t];
        scratch.clear();
        for (int id : g.ins) scratch.push_back(values[id]);
        values[g.out] = eval_gate(g.kind, scratch) ? 1 : 0;
    }
}

Circuit parse_bench(const std::string& text, const std::string& name) {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::vector<Gate> gates;

    std::istringstream stream(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(stream, raw)) {
        line_no++;
        std::string line = raw;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);

        LineScanner sc{line, line_no};
        if (sc.at_end()) continue;

        std::string first = sc.name("declaration or net name");
        std::string ufirst = upper(first);
        if (sc.peek() == '(' && (ufirst == "INPUT" || ufirst == "OUTPUT")) {
            sc.expect('(', "'('");
            std::string net = sc.name("net name");
            sc.expect(')', "')'");
            if (!sc.at_end())
                parse_fail(line_no, sc.pos + 1, "trailing text after declaration");
            if (ufirst == "INPUT") {
                if (std::find(inputs.begin(), inputs.end(), net) != inputs.end())
                    parse_fail(line_no, 1, "duplicate input '" + net + "'");
                inputs.push_back(net);
            } else {
                if (std::find(outputs.begin(), outputs.end(), net) != outputs.end())
                    parse_fail(line_no, 1, "duplicate output '" + net + "'");
                outputs.push_back(net);
            }
            continue;
        }

        Gate g;
        g.output = first;
        sc.expect('=', "'='");
        std::size_t kind_col = sc.pos + 1;
        std::string kind_name = sc.name("gate kind");
        if (looks_sequential(upper(kind_name))) {
            std::ostringstream os;
            os << "line " << line_no << ", col " << kind_col << ": sequential element '"
               << kind_name << "' is not supported";
            throw Error(ErrorKind::Unsupported, os.str());
        }
        auto kind = gate_kind_from_name(kind_name);
        if (!kind)
            parse_fail(line_no, kind_col, "unknown gate kind '" + kind_name + "'");
        g.kind = *kind;
        sc.expect('(', "'('");
        while (true) {
            g.inputs.push_back(sc.name("net name"));
            char c = sc.peek();
            if (c == ',') {
                sc.pos++;
                continue;
            }
            break;
        }
        sc.expect(')', "')'");
        if (!sc.at_end())
            parse_fail(line_no, sc.pos + 1, "trailing text after gate");
        gates.push_back(std::move(g));
    }

    return Circuit(name, std::move(inputs), std::move(outputs), std::move(gates));
}

std::string write_bench(const Circuit& c) {
    std::ostringstream os;
    if (!c.name().empty()) os << "# " << c.name() << "\n";
    for (const auto& in : c.inputs()) os << "INPUT(" << in << ")\n";
    for (const auto& out : c.outputs()) os << "OUTPUT(" << out << ")\n";
    for (const auto& g : c.gates()) {
        os << g.output << " = " << gate_kind_name(g.kind) << "(";
        for (std::size_t i = 0; i < g.inputs.size(); i++) {
            if (i) os << ", ";
            os << g.inputs[i];
        }
        os << ")\n";
    }
    return os.str();
}

Assignment simulate(const Circuit& c, const Assignment& inputs) {
    std::vector<std::uint8_t> values(c.net_count(), 0);
    std::size_t seen = 0;
    for (const auto& [net, bit] : inputs) {
        if (!c.is_primary_input(net))
            throw Error(ErrorKind::Argument, "'" + net + "' is not a primary input");
        values[c.net_id(net)] = bit ? 1 : 0;
        seen++;
    }
    if (seen != c.inputs().size()) {
        for (const auto& in : c.inputs())
            if (!inputs.count(in))
                throw Error(ErrorKind::Argument, "missing value for input '" + in + "'");
    }
    c.eval(values);
    Assignment out;
    for (std::size_t i = 0; i < c.outputs().size(); i++)
        out[c.outputs()[i]] = values[c.output_net_id(i)] != 0;
    return out;
}

} // namespace locklab
