#include "locklab/locklab.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include <json.hpp>

#include "attack.hpp"
#include "cnf.hpp"
#include "cone.hpp"
#include "harness.hpp"
#include "lock.hpp"
#include "netlist.hpp"
#include "solver.hpp"

using nlohmann::json;
using nlohmann::ordered_json;

struct locklab_circuit {
    locklab::Circuit c;
};

struct locklab_locked {
    locklab::LockedCircuit lc;
};

namespace {

thread_local std::string g_last_error;

locklab_status status_of(locklab::ErrorKind k) {
    using locklab::ErrorKind;
    switch (k) {
    case ErrorKind::Parse:       return LOCKLAB_ERR_PARSE;
    case ErrorKind::Validate:    return LOCKLAB_ERR_VALIDATE;
    case ErrorKind::Argument:    return LOCKLAB_ERR_ARGUMENT;
    case ErrorKind::Width:       return LOCKLAB_ERR_WIDTH;
    case ErrorKind::Replay:      return LOCKLAB_ERR_REPLAY;
    case ErrorKind::Constraint:  return LOCKLAB_ERR_CONSTRAINT;
    case ErrorKind::Unsupported: return LOCKLAB_ERR_UNSUPPORTED;
    case ErrorKind::Internal:    return LOCKLAB_ERR_INTERNAL;
    }
    return LOCKLAB_ERR_INTERNAL;
}

template <typename Fn>
locklab_status guarded(Fn&& fn) {
    try {
        fn();
        return LOCKLAB_OK;
    } catch (const locklab::Error& e) {
        g_last_error = e.what();
        return status_of(e.kind());
    } catch (const json::exception& e) {
        g_last_error = std::string("bad JSON: ") + e.what();
        return LOCKLAB_ERR_PARSE;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return LOCKLAB_ERR_INTERNAL;
    }
}

locklab_status bad_argument(const char* message) {
    g_last_error = message;
    return LOCKLAB_ERR_ARGUMENT;
}

char* dup_string(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (p) std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

std::string bits_to_string(const std::vector<std::uint8_t>& bits) {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

std::vector<std::uint8_t> bits_from_string(const std::string& s, std::size_t width,
                                           const char* what) {
    if (s.size() != width)
        throw locklab::Error(locklab::ErrorKind::Width,
                             std::string(what) + " needs " + std::to_string(width) +
                                 " bits, got " + std::to_string(s.size()));
    std::vector<std::uint8_t> bits;
    bits.reserve(s.size());
    for (char ch : s) {
        if (ch != '0' && ch != '1')
            throw locklab::Error(locklab::ErrorKind::Parse,
                                 std::string(what) + " may contain only 0 and 1");
        bits.push_back(ch == '1');
    }
    return bits;
}

bool all_binary(const std::string& s) {
    if (s.empty()) return false;
    for (char ch : s)
        if (ch != '0' && ch != '1') return false;
    return true;
}

// Exact-width bit strings are taken literally; anything else parses as hex.
locklab::KeyVector key_from_text(const std::string& text, std::size_t width) {
    if (text.size() == width && (all_binary(text) || width == 0))
        return locklab::key_from_bits(text);
    return locklab::key_from_hex(text, width);
}

locklab::Scheme scheme_from_name(const std::string& name) {
    using locklab::Scheme;
    for (Scheme s : {Scheme::XorInsertion, Scheme::AntiSat, Scheme::CasLock,
                     Scheme::TtLock, Scheme::SfllHd, Scheme::Unknown})
        if (name == locklab::scheme_name(s)) return s;
    throw locklab::Error(locklab::ErrorKind::Parse, "unknown scheme name '" + name + "'");
}

locklab::KeyVector key_bits_or_random(const char* bits, std::size_t width,
                                      std::uint64_t seed, const char* what) {
    if (bits == nullptr) return locklab::random_key(width, seed);
    return bits_from_string(bits, width, what);
}

ordered_json key_json_of(const locklab::LockedCircuit& lc) {
    ordered_json j;
    j["scheme"] = locklab::scheme_name(lc.scheme);
    j["width"] = lc.key_inputs.size();
    if (lc.key_known) j["key"] = locklab::key_to_string(lc.correct_key);
    else j["key"] = nullptr;
    j["key_inputs"] = lc.key_inputs;
    j["data_inputs"] = lc.data_inputs;
    j["blocks"] = ordered_json{{"g", lc.blocks.g},
                               {"gbar", lc.blocks.gbar},
                               {"restore", lc.blocks.restore}};
    ordered_json params = ordered_json::object();
    switch (lc.scheme) {
    case locklab::Scheme::AntiSat:
        params["r"] = lc.params.r;
        params["taps"] = lc.params.taps;
        break;
    case locklab::Scheme::CasLock:
        params["r"] = lc.params.r;
        params["or_positions"] = lc.params.or_positions;
        params["taps"] = lc.params.taps;
        break;
    case locklab::Scheme::TtLock:
    case locklab::Scheme::SfllHd:
        params["hd"] = lc.params.hd;
        params["pattern"] = locklab::key_to_string(lc.params.pattern);
        break;
    default:
        break;
    }
    j["params"] = params;
    return j;
}

void key_json_into(const std::string& text, locklab::LockedCircuit& lc) {
    json j = json::parse(text);
    if (j.contains("scheme")) lc.scheme = scheme_from_name(j.at("scheme").get<std::string>());
    if (j.contains("key") && !j.at("key").is_null()) {
        lc.correct_key = locklab::key_from_bits(j.at("key").get<std::string>());
        if (lc.correct_key.size() != lc.key_inputs.size())
            throw locklab::Error(locklab::ErrorKind::Width,
                                 "key width in the key file does not match the circuit");
        lc.key_known = true;
    }
    if (j.contains("blocks")) {
        const json& b = j.at("blocks");
        if (b.contains("g")) lc.blocks.g = b.at("g").get<std::vector<int>>();
        if (b.contains("gbar")) lc.blocks.gbar = b.at("gbar").get<std::vector<int>>();
        if (b.contains("restore")) lc.blocks.restore = b.at("restore").get<std::vector<int>>();
    }
    if (j.contains("params")) {
        const json& p = j.at("params");
        if (p.contains("r")) lc.params.r = p.at("r").get<int>();
        if (p.contains("or_positions"))
            lc.params.or_positions = p.at("or_positions").get<std::vector<int>>();
        if (p.contains("taps")) lc.params.taps = p.at("taps").get<std::vector<int>>();
        if (p.contains("hd")) lc.params.hd = p.at("hd").get<int>();
        if (p.contains("pattern"))
            lc.params.pattern = locklab::key_from_bits(p.at("pattern").get<std::string>());
    }
}

locklab::AttackOptions attack_options_from_json(const char* text) {
    locklab::AttackOptions opts;
    if (text == nullptr || *text == '\0') return opts;
    json j = json::parse(text);
    if (j.contains("constraints"))
        for (const auto& c : j.at("constraints"))
            opts.key_constraints[c.at("index").get<int>()] = c.at("value").get<int>() != 0;
    if (j.contains("replay"))
        for (const auto& v : j.at("replay")) {
            std::string s = v.get<std::string>();
            std::vector<std::uint8_t> bits;
            for (char ch : s) {
                if (ch != '0' && ch != '1')
                    throw locklab::Error(locklab::ErrorKind::Parse,
                                         "replay vectors may contain only 0 and 1");
                bits.push_back(ch == '1');
            }
            opts.replay_dips.push_back(std::move(bits));
        }
    if (j.contains("preload")) opts.preload_vectors = j.at("preload").get<bool>();
    if (j.contains("iteration_cap")) opts.iteration_cap = j.at("iteration_cap").get<int>();
    if (j.contains("time_budget_s")) opts.time_budget_s = j.at("time_budget_s").get<double>();
    return opts;
}

ordered_json trace_to_json(const locklab::AttackTrace& trace) {
    ordered_json j;
    j["status"] = locklab::attack_status_name(trace.status);
    if (trace.status == locklab::AttackStatus::Success)
        j["recovered_key"] = locklab::key_to_string(trace.recovered_key);
    else
        j["recovered_key"] = nullptr;
    j["total_iterations"] = trace.total_iterations;
    j["io_pairs"] = trace.io_pairs();
    j["total_s"] = trace.total_s;
    j["io_pairs_s"] = trace.io_pairs_s;
    j["unsat_s"] = trace.unsat_s;
    ordered_json preloads = ordered_json::array();
    for (const auto& p : trace.preloads)
        preloads.push_back(ordered_json{{"inputs", bits_to_string(p.inputs)},
                                        {"outputs", bits_to_string(p.outputs)}});
    j["preloads"] = preloads;
    ordered_json iters = ordered_json::array();
    for (const auto& it : trace.iterations)
        iters.push_back(ordered_json{{"index", it.index},
                                     {"dip", bits_to_string(it.dip)},
                                     {"response", bits_to_string(it.response)},
                                     {"key_a", locklab::key_to_string(it.model_key_a)},
                                     {"key_b", locklab::key_to_string(it.model_key_b)},
                                     {"solve_s", it.solve_s},
                                     {"clauses_added", it.clauses_added}});
    j["iterations"] = iters;
    return j;
}

} // namespace

extern "C" {

const char* locklab_version(void) { return "0.1.0"; }

const char* locklab_last_error(void) { return g_last_error.c_str(); }

void locklab_string_free(char* s) { std::free(s); }

void locklab_circuit_free(locklab_circuit* c) { delete c; }

void locklab_locked_free(locklab_locked* lc) { delete lc; }

locklab_status locklab_parse_bench(const char* text, const char* name,
                                   locklab_circuit** out) {
    if (!text || !out) return bad_argument("text and out must be non-null");
    return guarded([&] {
        auto* h = new locklab_circuit{locklab::parse_bench(text, name ? name : "")};
        *out = h;
    });
}

locklab_status locklab_write_bench(const locklab_circuit* c, char** out) {
    if (!c || !out) return bad_argument("circuit and out must be non-null");
    return guarded([&] { *out = dup_string(locklab::write_bench(c->c)); });
}

locklab_status locklab_circuit_summary_json(const locklab_circuit* c, char** out) {
    if (!c || !out) return bad_argument("circuit and out must be non-null");
    return guarded([&] {
        ordered_json j;
        j["name"] = c->c.name();
        j["inputs"] = c->c.inputs().size();
        j["outputs"] = c->c.outputs().size();
        j["gates"] = c->c.gates().size();
        j["input_names"] = c->c.inputs();
        j["output_names"] = c->c.outputs();
        *out = dup_string(j.dump(2));
    });
}

locklab_status locklab_simulate(const locklab_circuit* c, const char* input_bits,
                                char** output_bits) {
    if (!c || !input_bits || !output_bits)
        return bad_argument("circuit, input_bits and output_bits must be non-null");
    return guarded([&] {
        auto in = bits_from_string(input_bits, c->c.inputs().size(), "input vector");
        locklab::Assignment named;
        for (std::size_t i = 0; i < in.size(); i++) named[c->c.inputs()[i]] = in[i] != 0;
        locklab::Assignment res = locklab::simulate(c->c, named);
        std::string bits;
        for (const auto& o : c->c.outputs()) bits.push_back(res.at(o) ? '1' : '0');
        *output_bits = dup_string(bits);
    });
}

locklab_status locklab_cones_json(const locklab_circuit* c, char** out) {
    if (!c || !out) return bad_argument("circuit and out must be non-null");
    return guarded([&] {
        ordered_json arr = ordered_json::array();
        for (const auto& cone : locklab::extract_cones(c->c))
            arr.push_back(ordered_json{{"output", cone.root},
                                       {"nodes", cone.node_count()},
                                       {"depth", cone.depth()},
                                       {"gates", cone.gates.size()},
                                       {"inputs", cone.inputs.size()}});
        *out = dup_string(arr.dump(2));
    });
}

locklab_status locklab_largest_cone(const locklab_circuit* c, locklab_circuit** out) {
    if (!c || !out) return bad_argument("circuit and out must be non-null");
    return guarded([&] {
        locklab::Cone cone = locklab::largest_cone(c->c);
        *out = new locklab_circuit{locklab::cone_to_circuit(c->c, cone)};
    });
}

locklab_status locklab_lock_xor(const locklab_circuit* c, size_t count,
                                const char* key_bits, uint64_t seed,
                                locklab_locked** out) {
    if (!c || !out) return bad_argument("circuit and out must be non-null");
    return guarded([&] {
        locklab::KeyVector key = key_bits_or_random(key_bits, count, seed, "key");
        locklab::Cone cone = locklab::largest_cone(c->c);
        std::vector<std::size_t> order = locklab::insertion_order(cone);
        *out = new locklab_locked{locklab::insert_key_gates(c->c, count, order, key)};
    });
}

locklab_status locklab_lock_antisat(const locklab_circuit* c, int r,
                                    const char* value_bits, uint64_t seed,
                                    locklab_locked** out) {
    if (!c || !out) return bad_argument("circuit and out must be non-null");
    return guarded([&] {
        if (r < 0) throw locklab::Error(locklab::ErrorKind::Argument, "r must be positive");
        locklab::KeyVector value =
            key_bits_or_random(value_bits, static_cast<std::size_t>(r), seed, "block value");
        *out = new locklab_locked{locklab::lock_antisat(c->c, r, value)};
    });
}

locklab_status locklab_lock_caslock(const locklab_circuit* c, int r,
                                    const int* or_positions, size_t n_or,
                                    const char* value_bits, uint64_t seed,
                                    locklab_locked** out) {
    if (!c || !out) return bad_argument("circuit and out must be non-null");
    if (n_or > 0 && !or_positions) return bad_argument("or_positions must be non-null");
    return guarded([&] {
        if (r < 0) throw locklab::Error(locklab::ErrorKind::Argument, "r must be positive");
        locklab::KeyVector value =
            key_bits_or_random(value_bits, static_cast<std::size_t>(r), seed, "block value");
        std::vector<int> ors(or_positions, or_positions + n_or);
        *out = new locklab_locked{locklab::lock_caslock(c->c, r, ors, value)};
    });
}

locklab_status locklab_lock_sfll(const locklab_circuit* c, const char* pattern_bits,
                                 int hd, uint64_t seed, locklab_locked** out) {
    if (!c || !out) return bad_argument("circuit and out must be non-null");
    return guarded([&] {
        locklab::KeyVector pattern =
            key_bits_or_random(pattern_bits, c->c.inputs().size(), seed, "pattern");
        *out = new locklab_locked{locklab::lock_sfll_hd(c->c, pattern, hd)};
    });
}

locklab_status locklab_locked_write_bench(const locklab_locked* lc, char** out) {
    if (!lc || !out) return bad_argument("locked circuit and out must be non-null");
    return guarded([&] { *out = dup_string(locklab::write_bench(lc->lc.circuit)); });
}

locklab_status locklab_locked_key_json(const locklab_locked* lc, char** out) {
    if (!lc || !out) return bad_argument("locked circuit and out must be non-null");
    return guarded([&] { *out = dup_string(key_json_of(lc->lc).dump(2)); });
}

locklab_status locklab_locked_from_bench(const char* text, const char* key_json,
                                         locklab_locked** out) {
    if (!text || !out) return bad_argument("text and out must be non-null");
    return guarded([&] {
        locklab::Circuit c = locklab::parse_bench(text, "");
        locklab::LockedCircuit lc = locklab::locked_from_circuit(c);
        if (key_json && *key_json) key_json_into(key_json, lc);
        *out = new locklab_locked{std::move(lc)};
    });
}

locklab_status locklab_apply_key(const locklab_locked* lc, const char* key_text,
                                 locklab_circuit** out) {
    if (!lc || !key_text || !out)
        return bad_argument("locked circuit, key_text and out must be non-null");
    return guarded([&] {
        locklab::KeyVector key = key_from_text(key_text, lc->lc.key_inputs.size());
        *out = new locklab_circuit{locklab::apply_key(lc->lc, key)};
    });
}

locklab_status locklab_attack(const locklab_locked* lc, const locklab_circuit* oracle,
                              const char* options_json, char** trace_json) {
    if (!lc || !oracle || !trace_json)
        return bad_argument("locked circuit, oracle and trace_json must be non-null");
    return guarded([&] {
        locklab::AttackOptions opts = attack_options_from_json(options_json);
        locklab::AttackTrace trace = locklab::sat_attack(lc->lc, oracle->c, opts);
        *trace_json = dup_string(trace_to_json(trace).dump(2));
    });
}

locklab_status locklab_verify_key(const locklab_locked* lc, const locklab_circuit* oracle,
                                  const char* key_text, int* equivalent) {
    if (!lc || !oracle || !key_text || !equivalent)
        return bad_argument("locked circuit, oracle, key_text and equivalent must be non-null");
    return guarded([&] {
        locklab::KeyVector key = key_from_text(key_text, lc->lc.key_inputs.size());
        *equivalent = locklab::verify_key(lc->lc, key, oracle->c) ? 1 : 0;
    });
}

locklab_status locklab_sweep(const locklab_circuit* c, size_t max_keys,
                             const char* options_json, char** records_json) {
    if (!c || !records_json) return bad_argument("circuit and records_json must be non-null");
    return guarded([&] {
        locklab::SweepOptions opts;
        if (options_json && *options_json) {
            json j = json::parse(options_json);
            if (j.contains("seed")) opts.seed = j.at("seed").get<std::uint64_t>();
            if (j.contains("iteration_cap")) opts.iteration_cap = j.at("iteration_cap").get<int>();
            if (j.contains("time_budget_s"))
                opts.time_budget_s = j.at("time_budget_s").get<double>();
        }
        auto records = locklab::sweep(c->c, max_keys, opts);
        *records_json = dup_string(locklab::report(records, locklab::ReportFormat::Json));
    });
}

locklab_status locklab_report_csv(const char* records_json, char** out) {
    if (!records_json || !out) return bad_argument("records_json and out must be non-null");
    return guarded([&] {
        auto records = locklab::records_from_json(records_json);
        *out = dup_string(locklab::report(records, locklab::ReportFormat::Csv));
    });
}

locklab_status locklab_report_text(const char* records_json, char** out) {
    if (!records_json || !out) return bad_argument("records_json and out must be non-null");
    return guarded([&] {
        auto records = locklab::records_from_json(records_json);
        *out = dup_string(locklab::report(records, locklab::ReportFormat::Text));
    });
}

locklab_status locklab_export_cnf(const locklab_circuit* c, char** dimacs) {
    if (!c || !dimacs) return bad_argument("circuit and dimacs must be non-null");
    return guarded([&] {
        locklab::CnfFormula f;
        locklab::encode_circuit(c->c, f, {}, "");
        std::string title = c->c.name().empty() ? "circuit" : c->c.name();
        *dimacs = dup_string(locklab::to_dimacs(f, title + " consistency formula"));
    });
}

locklab_status locklab_export_miter_cnf(const locklab_locked* lc, char** dimacs) {
    if (!lc || !dimacs) return bad_argument("locked circuit and dimacs must be non-null");
    return guarded([&] {
        locklab::MiterEncoding m =
            locklab::build_miter(lc->lc.circuit, lc->lc.data_inputs, lc->lc.key_inputs);
        const std::string& name = lc->lc.circuit.name();
        *dimacs = dup_string(
            locklab::to_dimacs(m.formula, (name.empty() ? "circuit" : name) + " key miter"));
    });
}

locklab_status locklab_sat_solve(const char* dimacs, char** result_json) {
    if (!dimacs || !result_json) return bad_argument("dimacs and result_json must be non-null");
    return guarded([&] {
        locklab::CnfFormula f = locklab::parse_dimacs(dimacs);
        locklab::SatSolver solver;
        solver.ensure_vars(f.var_count);
        bool ok = !f.contradiction;
        for (const auto& cl : f.clauses)
            if (!solver.add_clause(cl)) ok = false;
        ordered_json j;
        if (ok && solver.solve() == locklab::SatSolver::Result::Sat) {
            j["result"] = "sat";
            std::string model;
            for (int v = 1; v <= solver.num_vars(); v++)
                model.push_back(solver.model_value(v) ? '1' : '0');
            j["model"] = model;
        } else {
            j["result"] = "unsat";
            j["model"] = nullptr;
        }
        j["conflicts"] = solver.conflicts();
        j["decisions"] = solver.decisions();
        j["propagations"] = solver.propagations();
        *result_json = dup_string(j.dump(2));
    });
}

} // extern "C"
