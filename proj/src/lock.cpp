#include "lock.hpp"

#include <algorithm>
#include <random>
#include <unordered_map>
#include <unordered_set>

namespace locklab {

const std::string kKeyInputPrefix = "keyinput";

std::string key_to_string(const KeyVector& k) {
    std::string s;
    s.reserve(k.size());
    for (auto b : k) s.push_back(b ? '1' : '0');
    return s;
}

KeyVector key_from_bits(const std::string& bits) {
    KeyVector k;
    k.reserve(bits.size());
    for (char c : bits) {
        if (c != '0' && c != '1')
            throw Error(ErrorKind::Parse, "key bit string may contain only 0 and 1");
        k.push_back(c == '1');
    }
    return k;
}

KeyVector key_from_hex(const std::string& hex, std::size_t width) {
    std::string body = hex;
    if (body.rfind("0x", 0) == 0 || body.rfind("0X", 0) == 0) body = body.substr(2);
    if (body.empty() || width > 64)
        throw Error(ErrorKind::Parse, "bad hex key '" + hex + "'");
    unsigned long long value = 0;
    std::size_t used = 0;
    try {
        value = std::stoull(body, &used, 16);
    } catch (const std::exception&) {
        throw Error(ErrorKind::Parse, "bad hex key '" + hex + "'");
    }
    if (used != body.size())
        throw Error(ErrorKind::Parse, "bad hex key '" + hex + "'");
    if (width < 64 && (value >> width) != 0)
        throw Error(ErrorKind::Parse, "hex key '" + hex + "' does not fit in " +
                                          std::to_string(width) + " bits");
    KeyVector k(width, 0);
    for (std::size_t i = 0; i < width; i++) k[i] = (value >> i) & 1;
    return k;
}

KeyVector key_from_code(std::uint32_t code, std::size_t width) {
    if (width < 32 && (code >> width) != 0)
        throw Error(ErrorKind::Argument, "key code does not fit in " +
                                             std::to_string(width) + " bits");
    KeyVector k(width, 0);
    for (std::size_t i = 0; i < width; i++) k[i] = (code >> i) & 1;
    return k;
}

std::uint32_t key_to_code(const KeyVector& k) {
    if (k.size() > 32)
        throw Error(ErrorKind::Argument, "key too wide for a 32-bit code");
    std::uint32_t code = 0;
    for (std::size_t i = 0; i < k.size(); i++)
        if (k[i]) code |= 1u << i;
    return code;
}

KeyVector random_key(std::size_t width, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    KeyVector k(width, 0);
    for (std::size_t i = 0; i < width; i++) k[i] = static_cast<std::uint8_t>(rng() & 1);
    return k;
}

const char* scheme_name(Scheme s) {
    switch (s) {
    case Scheme::XorInsertion: return "XOR-INSERTION";
    case Scheme::AntiSat:      return "ANTISAT";
    case Scheme::CasLock:      return "CASLOCK";
    case Scheme::TtLock:       return "TTLOCK";
    case Scheme::SfllHd:       return "SFLL-HD";
    case Scheme::Unknown:      return "UNKNOWN";
    }
    return "?";
}

namespace {

class NameAllocator {
public:
    explicit NameAllocator(const Circuit& c) {
        for (const auto& in : c.inputs()) used_.insert(in);
        for (const auto& g : c.gates()) used_.insert(g.output);
    }

    std::string fresh(const std::string& base) {
        if (used_.insert(base).second) return base;
        for (int i = 2;; i++) {
            std::string name = base + "_" + std::to_string(i);
            if (used_.insert(name).second) return name;
        }
    }

private:
    std::unordered_set<std::string> used_;
};

void reject_key_prefixed_inputs(const Circuit& c) {
    for (const auto& in : c.inputs())
        if (in.rfind(kKeyInputPrefix, 0) == 0)
            throw Error(ErrorKind::Argument,
                        "input '" + in + "' collides with the key input prefix");
}

// Claims the canonical names keyinput<base>..keyinput<base+n-1>.
std::vector<std::string> claim_key_inputs(const Circuit& c, std::size_t n) {
    std::vector<std::string> keys;
    keys.reserve(n);
    for (std::size_t i = 0; i < n; i++) {
        std::string name = kKeyInputPrefix + std::to_string(i);
        if (c.has_net(name))
            throw Error(ErrorKind::Argument, "net name '" + name + "' already in use");
        keys.push_back(std::move(name));
    }
    return keys;
}

// Renames the driver of `net` to a fresh name and returns that name, so a
// new gate can take over driving `net`.
std::string detach_driver(const Circuit& c, std::vector<Gate>& gates,
                          NameAllocator& names, const std::string& net) {
    auto di = c.driver_index(net);
    if (!di)
        throw Error(ErrorKind::Argument,
                    "output '" + net + "' is wired directly to a primary input");
    std::string pre = names.fresh(net + "_enc");
    gates[*di].output = pre;
    return pre;
}

std::vector<int> default_taps(int r) {
    std::vector<int> taps(r);
    for (int i = 0; i < r; i++) taps[i] = i;
    return taps;
}

void validate_taps(const Circuit& c, int r, const std::vector<int>& taps) {
    if (r < 1 || static_cast<std::size_t>(r) > c.inputs().size())
        throw Error(ErrorKind::Argument, "block width must be between 1 and the input count");
    if (taps.size() != static_cast<std::size_t>(r))
        throw Error(ErrorKind::Argument, "tap list width does not match the block width");
    std::unordered_set<int> seen;
    for (int t : taps) {
        if (t < 0 || static_cast<std::size_t>(t) >= c.inputs().size())
            throw Error(ErrorKind::Argument, "tap index out of range");
        if (!seen.insert(t).second)
            throw Error(ErrorKind::Argument, "duplicate tap index");
    }
}

// AND/OR cascade over (x_i XOR k_i); complement_last flips the final gate
// (or the single XOR term when r is 1), producing the complement function
// of the plain cascade under equal keys.
std::string emit_cascade(std::vector<Gate>& gates, NameAllocator& names,
                         const std::string& pfx,
                         const std::vector<std::string>& taps,
                         const std::vector<std::string>& keys,
                         const std::vector<int>& or_positions,
                         bool complement_last) {
    int r = static_cast<int>(taps.size());
    std::vector<std::string> terms;
    terms.reserve(r);
    for (int i = 0; i < r; i++) {
        GateKind kind = GateKind::Xor;
        if (r == 1 && complement_last) kind = GateKind::Xnor;
        std::string t = names.fresh(pfx + "_x" + std::to_string(i));
        gates.push_back({t, kind, {taps[i], keys[i]}});
        terms.push_back(std::move(t));
    }
    std::string acc = terms[0];
    for (int j = 1; j < r; j++) {
        bool is_or = std::find(or_positions.begin(), or_positions.end(), j) != or_positions.end();
        GateKind kind = is_or ? GateKind::Or : GateKind::And;
        if (complement_last && j == r - 1)
            kind = is_or ? GateKind::Nor : GateKind::Nand;
        std::string cnet = names.fresh(pfx + "_c" + std::to_string(j));
        gates.push_back({cnet, kind, {acc, terms[j]}});
        acc = std::move(cnet);
    }
    return acc;
}

LockedCircuit build_cascade_lock(const Circuit& c, int r,
                                 const std::vector<int>& or_positions,
                                 const KeyVector& value, std::vector<int> taps,
                                 const std::string& pfx, Scheme scheme) {
    if (c.outputs().size() != 1)
        throw Error(ErrorKind::Argument, "this scheme needs a single-output circuit");
    reject_key_prefixed_inputs(c);
    if (taps.empty()) taps = default_taps(r);
    validate_taps(c, r, taps);
    if (value.size() != static_cast<std::size_t>(r))
        throw Error(ErrorKind::Width, "block value width does not match r");
    std::unordered_set<int> seen_positions;
    for (int p : or_positions) {
        if (p < 1 || p >= r)
            throw Error(ErrorKind::Argument, "OR position out of range (valid: 1..r-1)");
        if (!seen_positions.insert(p).second)
            throw Error(ErrorKind::Argument, "duplicate OR position");
    }

    std::vector<std::string> keys = claim_key_inputs(c, 2 * static_cast<std::size_t>(r));
    NameAllocator names(c);
    for (const auto& k : keys) names.fresh(k);  // reserve

    std::vector<Gate> gates = c.gates();
    std::vector<std::string> tap_nets;
    tap_nets.reserve(r);
    for (int t : taps) tap_nets.push_back(c.inputs()[t]);

    std::vector<std::string> kg(keys.begin(), keys.begin() + r);
    std::vector<std::string> kh(keys.begin() + r, keys.end());
    std::string g = emit_cascade(gates, names, pfx + "_g", tap_nets, kg, or_positions, false);
    std::string h = emit_cascade(gates, names, pfx + "_h", tap_nets, kh, or_positions, true);

    std::string hit = names.fresh(pfx + "_hit");
    gates.push_back({hit, GateKind::And, {g, h}});

    const std::string& y = c.outputs()[0];
    std::string pre = detach_driver(c, gates, names, y);
    gates.push_back({y, GateKind::Xor, {pre, hit}});

    std::vector<std::string> inputs = c.inputs();
    inputs.insert(inputs.end(), keys.begin(), keys.end());

    LockedCircuit lc;
    lc.circuit = Circuit(c.name(), std::move(inputs), c.outputs(), std::move(gates));
    lc.data_inputs = c.inputs();
    lc.key_inputs = std::move(keys);
    lc.correct_key = value;
    lc.correct_key.insert(lc.correct_key.end(), value.begin(), value.end());
    lc.key_known = true;
    lc.scheme = scheme;
    lc.params.r = r;
    lc.params.or_positions = or_positions;
    lc.params.taps = taps;
    for (int i = 0; i < r; i++) lc.blocks.g.push_back(i);
    for (int i = r; i < 2 * r; i++) lc.blocks.gbar.push_back(i);
    return lc;
}

// Net whose value is 1 exactly when the Hamming weight of diff_nets is h.
std::string emit_weight_match(std::vector<Gate>& gates, NameAllocator& names,
                              const std::string& pfx,
                              const std::vector<std::string>& diff_nets, int h) {
    if (h == 0) {
        // all-zero comparator
        if (diff_nets.size() == 1) {
            std::string hit = names.fresh(pfx + "_hit");
            gates.push_back({hit, GateKind::Not, {diff_nets[0]}});
            return hit;
        }
        std::string hit = names.fresh(pfx + "_hit");
        gates.push_back({hit, GateKind::Nor, diff_nets});
        return hit;
    }

    // Ripple popcount: add each difference bit into a binary accumulator.
    std::vector<std::string> acc;
    int step = 0;
    for (const auto& d : diff_nets) {
        std::string carry = d;
        for (auto& bit : acc) {
            std::string sum = names.fresh(pfx + "_s" + std::to_string(step));
            std::string nxt = names.fresh(pfx + "_a" + std::to_string(step));
            gates.push_back({sum, GateKind::Xor, {bit, carry}});
            gates.push_back({nxt, GateKind::And, {bit, carry}});
            bit = sum;
            carry = nxt;
            step++;
        }
        acc.push_back(carry);
    }

    std::vector<std::string> eq;
    eq.reserve(acc.size());
    for (std::size_t j = 0; j < acc.size(); j++) {
        bool want = ((h >> j) & 1) != 0;
        if (want) {
            eq.push_back(acc[j]);
        } else {
            std::string z = names.fresh(pfx + "_z" + std::to_string(j));
            gates.push_back({z, GateKind::Not, {acc[j]}});
            eq.push_back(std::move(z));
        }
    }
    if (eq.size() == 1) return eq[0];
    std::string hit = names.fresh(pfx + "_hit");
    gates.push_back({hit, GateKind::And, eq});
    return hit;
}

} // namespace

LockedCircuit insert_key_gates(const Circuit& c, std::size_t count,
                               const std::vector<std::size_t>& order, const KeyVector& key) {
    if (count > order.size())
        throw Error(ErrorKind::Argument, "not enough insertion positions for the key");
    if (key.size() != count)
        throw Error(ErrorKind::Width, "key width does not match the key gate count");
    reject_key_prefixed_inputs(c);
    {
        std::unordered_set<std::size_t> seen;
        for (std::size_t i = 0; i < count; i++) {
            if (order[i] >= c.gates().size())
                throw Error(ErrorKind::Argument, "insertion position out of range");
            if (!seen.insert(order[i]).second)
                throw Error(ErrorKind::Argument, "duplicate insertion position");
        }
    }

    std::vector<std::string> keys = claim_key_inputs(c, count);
    NameAllocator names(c);
    for (const auto& k : keys) names.fresh(k);

    std::vector<Gate> gates = c.gates();
    for (std::size_t i = 0; i < count; i++) {
        Gate& host = gates[order[i]];
        std::string net = host.output;
        std::string pre = names.fresh(net + "_enc");
        host.output = pre;
        GateKind kind = key[i] ? GateKind::Xnor : GateKind::Xor;
        gates.push_back({net, kind, {keys[i], pre}});
    }

    std::vector<std::string> inputs = c.inputs();
    inputs.insert(inputs.end(), keys.begin(), keys.end());

    LockedCircuit lc;
    lc.circuit = Circuit(c.name(), std::move(inputs), c.outputs(), std::move(gates));
    lc.data_inputs = c.inputs();
    lc.key_inputs = std::move(keys);
    lc.correct_key = key;
    lc.key_known = true;
    lc.scheme = Scheme::XorInsertion;
    for (std::size_t i = 0; i < count; i++) lc.blocks.g.push_back(static_cast<int>(i));
    return lc;
}

LockedCircuit lock_antisat(const Circuit& c, int r, const KeyVector& value,
                           std::vector<int> taps) {
    return build_cascade_lock(c, r, {}, value, std::move(taps), "asat", Scheme::AntiSat);
}

LockedCircuit lock_caslock(const Circuit& c, int r, const std::vector<int>& or_positions,
                           const KeyVector& value, std::vector<int> taps) {
    return build_cascade_lock(c, r, or_positions, value, std::move(taps), "cas",
                              Scheme::CasLock);
}

LockedCircuit lock_sfll_hd(const Circuit& c, const KeyVector& pattern, int hd) {
    if (c.outputs().size() != 1)
        throw Error(ErrorKind::Argument, "this scheme needs a single-output circuit");
    reject_key_prefixed_inputs(c);
    std::size_t width = c.inputs().size();
    if (width == 0)
        throw Error(ErrorKind::Argument, "circuit has no inputs");
    if (pattern.size() != width)
        throw Error(ErrorKind::Width, "pattern width does not match the input count");
    if (hd < 0 || static_cast<std::size_t>(hd) > width)
        throw Error(ErrorKind::Argument, "Hamming distance out of range");

    std::vector<std::string> keys = claim_key_inputs(c, width);
    NameAllocator names(c);
    for (const auto& k : keys) names.fresh(k);

    std::vector<Gate> gates = c.gates();

    // Perturb unit: pattern bits are constants, so a difference bit is
    // either the input itself or its complement.
    std::vector<std::string> pu_d;
    pu_d.reserve(width);
    for (std::size_t i = 0; i < width; i++) {
        if (pattern[i]) {
            std::string d = names.fresh("sfll_p_d" + std::to_string(i));
            gates.push_back({d, GateKind::Not, {c.inputs()[i]}});
            pu_d.push_back(std::move(d));
        } else {
            pu_d.push_back(c.inputs()[i]);
        }
    }
    std::string perturb = emit_weight_match(gates, names, "sfll_p", pu_d, hd);

    std::vector<std::string> ru_d;
    ru_d.reserve(width);
    for (std::size_t i = 0; i < width; i++) {
        std::string d = names.fresh("sfll_r_d" + std::to_string(i));
        gates.push_back({d, GateKind::Xor, {c.inputs()[i], keys[i]}});
        ru_d.push_back(std::move(d));
    }
    std::string restore = emit_weight_match(gates, names, "sfll_r", ru_d, hd);

    const std::string& y = c.outputs()[0];
    std::string pre = detach_driver(c, gates, names, y);
    std::string mid = names.fresh("sfll_flip");
    gates.push_back({mid, GateKind::Xor, {pre, perturb}});
    gates.push_back({y, GateKind::Xor, {mid, restore}});

    std::vector<std::string> inputs = c.inputs();
    inputs.insert(inputs.end(), keys.begin(), keys.end());

    LockedCircuit lc;
    lc.circuit = Circuit(c.name(), std::move(inputs), c.outputs(), std::move(gates));
    lc.data_inputs = c.inputs();
    lc.key_inputs = std::move(keys);
    lc.correct_key = pattern;
    lc.key_known = true;
    lc.scheme = hd == 0 ? Scheme::TtLock : Scheme::SfllHd;
    lc.params.hd = hd;
    lc.params.pattern = pattern;
    for (std::size_t i = 0; i < width; i++) lc.blocks.restore.push_back(static_cast<int>(i));
    return lc;
}

Circuit apply_key(const LockedCircuit& lc, const KeyVector& key) {
    if (key.size() != lc.key_inputs.size())
        throw Error(ErrorKind::Width, "key width does not match the circuit");
    const Circuit& c = lc.circuit;

    std::unordered_map<std::string, bool> consts;
    for (std::size_t i = 0; i < key.size(); i++) consts[lc.key_inputs[i]] = key[i] != 0;

    // Fold constants through in dependency order. Gates that survive keep
    // their output net name; gates that collapse record a constant.
    std::vector<Gate> folded(c.gates().size());
    std::vector<char> alive(c.gates().size(), 0);
    for (std::size_t t : c.topo_gates()) {
        const Gate& g = c.gates()[t];
        std::vector<std::string> live;
        int const_ones = 0, const_zeros = 0, parity = 0;
        for (const auto& in : g.inputs) {
            auto it = consts.find(in);
            if (it == consts.end()) {
                live.push_back(in);
            } else if (it->second) {
                const_ones++;
                parity ^= 1;
            } else {
                const_zeros++;
            }
        }

        auto keep = [&](GateKind kind, std::vector<std::string> ins) {
            folded[t] = Gate{g.output, kind, std::move(ins)};
            alive[t] = 1;
        };
        auto constant = [&](bool v) { consts[g.output] = v; };
        auto unary_or_gate = [&](GateKind many, GateKind one) {
            if (live.size() == 1) keep(one, {live[0]});
            else keep(many, std::move(live));
        };

        switch (g.kind) {
        case GateKind::And:
            if (const_zeros) constant(false);
            else if (live.empty()) constant(true);
            else unary_or_gate(GateKind::And, GateKind::Buf);
            break;
        case GateKind::Nand:
            if (const_zeros) constant(true);
            else if (live.empty()) constant(false);
            else unary_or_gate(GateKind::Nand, GateKind::Not);
            break;
        case GateKind::Or:
            if (const_ones) constant(true);
            else if (live.empty()) constant(false);
            else unary_or_gate(GateKind::Or, GateKind::Buf);
            break;
        case GateKind::Nor:
            if (const_ones) constant(false);
            else if (live.empty()) constant(true);
            else unary_or_gate(GateKind::Nor, GateKind::Not);
            break;
        case GateKind::Xor:
            if (live.empty()) constant(parity != 0);
            else if (live.size() == 1) keep(parity ? GateKind::Not : GateKind::Buf, {live[0]});
            else keep(parity ? GateKind::Xnor : GateKind::Xor, std::move(live));
            break;
        case GateKind::Xnor:
            if (live.empty()) constant(parity == 0);
            else if (live.size() == 1) keep(parity ? GateKind::Buf : GateKind::Not, {live[0]});
            else keep(parity ? GateKind::Xor : GateKind::Xnor, std::move(live));
            break;
        case GateKind::Not:
            if (live.empty()) constant(const_ones == 0);
            else keep(GateKind::Not, {live[0]});
            break;
        case GateKind::Buf:
            if (live.empty()) constant(const_ones != 0);
            else keep(GateKind::Buf, {live[0]});
            break;
        }
    }

    // Constant outputs still need a driver; synthesize one from a data input.
    std::vector<Gate> extra;
    NameAllocator names(c);
    for (const auto& out : c.outputs()) {
        auto it = consts.find(out);
        if (it == consts.end()) continue;
        if (lc.data_inputs.empty())
            throw Error(ErrorKind::Unsupported, "constant output with no data inputs left");
        const std::string& d = lc.data_inputs[0];
        extra.push_back({out, it->second ? GateKind::Xnor : GateKind::Xor,
                         std::vector<std::string>{d, d}});
    }

    // Keep only logic reachable from the outputs.
    std::unordered_map<std::string, const Gate*> driver;
    for (std::size_t i = 0; i < folded.size(); i++)
        if (alive[i]) driver[folded[i].output] = &folded[i];
    for (const auto& g : extra) driver[g.output] = &g;

    std::unordered_set<const Gate*> reachable;
    std::vector<const Gate*> stack;
    auto visit = [&](const std::string& net) {
        auto it = driver.find(net);
        if (it != driver.end() && reachable.insert(it->second).second)
            stack.push_back(it->second);
    };
    for (const auto& out : c.outputs()) visit(out);
    while (!stack.empty()) {
        const Gate* g = stack.back();
        stack.pop_back();
        for (const auto& in : g->inputs) visit(in);
    }

    std::vector<Gate> gates;
    for (std::size_t i = 0; i < folded.size(); i++)
        if (alive[i] && reachable.count(&folded[i])) gates.push_back(folded[i]);
    for (const auto& g : extra)
        if (reachable.count(&g)) gates.push_back(g);

    return Circuit(c.name(), lc.data_inputs, c.outputs(), std::move(gates));
}

LockedCircuit locked_from_circuit(const Circuit& c, const std::string& key_prefix) {
    LockedCircuit lc;
    lc.circuit = c;
    for (const auto& in : c.inputs()) {
        if (in.rfind(key_prefix, 0) == 0) lc.key_inputs.push_back(in);
        else lc.data_inputs.push_back(in);
    }
    lc.key_known = false;
    lc.scheme = Scheme::Unknown;
    return lc;
}

} // namespace locklab
