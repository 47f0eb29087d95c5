// Command-line front end. Talks to the library strictly through the C API.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "locklab/locklab.h"

namespace {

struct CircuitDeleter {
    void operator()(locklab_circuit* c) const { locklab_circuit_free(c); }
};
struct LockedDeleter {
    void operator()(locklab_locked* lc) const { locklab_locked_free(lc); }
};
using CircuitPtr = std::unique_ptr<locklab_circuit, CircuitDeleter>;
using LockedPtr = std::unique_ptr<locklab_locked, LockedDeleter>;

// Owns strings returned by the library.
class ApiString {
public:
    ApiString() = default;
    ~ApiString() { locklab_string_free(s_); }
    ApiString(const ApiString&) = delete;
    ApiString& operator=(const ApiString&) = delete;
    char** slot() { return &s_; }
    const char* get() const { return s_ ? s_ : ""; }
    std::string str() const { return get(); }

private:
    char* s_ = nullptr;
};

[[noreturn]] void fail(const std::string& message) {
    std::cerr << "error: " << message << "\n";
    std::exit(1);
}

void check(locklab_status st) {
    if (st != LOCKLAB_OK) fail(locklab_last_error());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("cannot write '" + path + "'");
    out << text;
}

std::string stem_of(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

CircuitPtr load_circuit(const std::string& path) {
    std::string text = read_file(path);
    locklab_circuit* c = nullptr;
    check(locklab_parse_bench(text.c_str(), stem_of(path).c_str(), &c));
    return CircuitPtr(c);
}

LockedPtr load_locked(const std::string& path) {
    std::string text = read_file(path);
    locklab_locked* lc = nullptr;
    check(locklab_locked_from_bench(text.c_str(), nullptr, &lc));
    return LockedPtr(lc);
}

// "k3=1,k4=0" (the k prefix is optional) -> [{"index":3,"value":1}, ...]
std::string constraints_json(const std::string& fix) {
    std::string out = "[";
    std::stringstream ss(fix);
    std::string item;
    bool first = true;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t eq = item.find('=');
        if (eq == std::string::npos) fail("bad --fix entry '" + item + "', expected k<i>=<bit>");
        std::string idx = item.substr(0, eq);
        std::string val = item.substr(eq + 1);
        if (!idx.empty() && (idx[0] == 'k' || idx[0] == 'K')) idx = idx.substr(1);
        if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos)
            fail("bad --fix index in '" + item + "'");
        if (val != "0" && val != "1") fail("bad --fix value in '" + item + "', expected 0 or 1");
        if (!first) out += ",";
        first = false;
        out += "{\"index\":" + idx + ",\"value\":" + val + "}";
    }
    return out + "]";
}

std::vector<std::string> read_replay_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open '" + path + "'");
    std::vector<std::string> vectors;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::size_t a = line.find_first_not_of(" \t");
        if (a == std::string::npos) continue;
        std::size_t b = line.find_last_not_of(" \t");
        vectors.push_back(line.substr(a, b - a + 1));
    }
    return vectors;
}

std::string json_string_array(const std::vector<std::string>& items) {
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); i++) {
        if (i) out += ",";
        out += "\"" + items[i] + "\"";
    }
    return out + "]";
}

// Minimal value lookup for the flat JSON documents the library emits.
std::string json_field(const std::string& json, const std::string& key) {
    std::string needle = "\"" + key + "\":";
    std::size_t at = json.find(needle);
    if (at == std::string::npos) return "";
    std::size_t p = at + needle.size();
    while (p < json.size() && (json[p] == ' ' || json[p] == '\n')) p++;
    if (p >= json.size()) return "";
    if (json[p] == '"') {
        std::size_t end = json.find('"', p + 1);
        return end == std::string::npos ? "" : json.substr(p + 1, end - p - 1);
    }
    std::size_t end = json.find_first_of(",}\n", p);
    return json.substr(p, end - p);
}

int cmd_parse(const std::string& file) {
    CircuitPtr c = load_circuit(file);
    ApiString summary;
    check(locklab_circuit_summary_json(c.get(), summary.slot()));
    std::cout << summary.get() << "\n";
    return 0;
}

int cmd_cones(const std::string& file, bool largest_only, const std::string& emit) {
    CircuitPtr c = load_circuit(file);
    ApiString cones;
    check(locklab_cones_json(c.get(), cones.slot()));

    CircuitPtr largest;
    ApiString largest_summary;
    std::string largest_root;
    {
        locklab_circuit* raw = nullptr;
        check(locklab_largest_cone(c.get(), &raw));
        largest.reset(raw);
        check(locklab_circuit_summary_json(largest.get(), largest_summary.slot()));
        largest_root = json_field(largest_summary.str(), "name");
    }

    if (largest_only) {
        std::cout << "largest cone: " << largest_root << "\n"
                  << largest_summary.get() << "\n";
    } else {
        std::cout << cones.get() << "\n";
    }
    if (!emit.empty()) {
        ApiString bench;
        check(locklab_write_bench(largest.get(), bench.slot()));
        write_file(emit, bench.str());
        std::cout << "wrote " << emit << "\n";
    }
    return 0;
}

int cmd_lock(const std::string& file, const std::string& scheme, std::size_t keys, int r,
             int h, std::uint64_t seed, const std::vector<int>& or_positions,
             const std::string& out_path, const std::string& key_out) {
    CircuitPtr c = load_circuit(file);
    locklab_locked* raw = nullptr;
    if (scheme == "xor") {
        check(locklab_lock_xor(c.get(), keys, nullptr, seed, &raw));
    } else if (scheme == "antisat" || scheme == "caslock") {
        int width = r;
        if (width == 0) {
            if (keys == 0 || keys % 2 != 0)
                fail("give --r, or an even --keys (the key is two blocks of r bits)");
            width = static_cast<int>(keys / 2);
        } else if (keys != 0 && keys != 2 * static_cast<std::size_t>(width)) {
            fail("--keys disagrees with --r (the key is 2r bits)");
        }
        if (scheme == "antisat") {
            check(locklab_lock_antisat(c.get(), width, nullptr, seed, &raw));
        } else {
            std::vector<int> ors = or_positions;
            if (ors.empty() && width >= 2) ors.push_back((width + 1) / 2);
            check(locklab_lock_caslock(c.get(), width, ors.data(), ors.size(), nullptr, seed,
                                       &raw));
        }
    } else if (scheme == "sfll") {
        check(locklab_lock_sfll(c.get(), nullptr, h, seed, &raw));
    } else {
        fail("unknown scheme '" + scheme + "' (use xor, antisat, caslock, or sfll)");
    }
    LockedPtr locked(raw);

    ApiString bench, key_json;
    check(locklab_locked_write_bench(locked.get(), bench.slot()));
    check(locklab_locked_key_json(locked.get(), key_json.slot()));
    write_file(out_path, bench.str());
    write_file(key_out, key_json.str() + "\n");
    std::cout << "scheme " << json_field(key_json.str(), "scheme") << ", key "
              << json_field(key_json.str(), "key") << "\n"
              << "wrote " << out_path << " and " << key_out << "\n";
    return 0;
}

int cmd_attack(const std::string& locked_path, const std::string& oracle_path,
               const std::string& fix, const std::string& replay_path, bool preload,
               int cap, double budget, const std::string& trace_out) {
    LockedPtr locked = load_locked(locked_path);
    CircuitPtr oracle = load_circuit(oracle_path);

    std::string options = "{";
    options += "\"preload\":" + std::string(preload ? "true" : "false");
    options += ",\"iteration_cap\":" + std::to_string(cap);
    options += ",\"time_budget_s\":" + std::to_string(budget);
    if (!fix.empty()) options += ",\"constraints\":" + constraints_json(fix);
    if (!replay_path.empty())
        options += ",\"replay\":" + json_string_array(read_replay_file(replay_path));
    options += "}";

    ApiString trace;
    check(locklab_attack(locked.get(), oracle.get(), options.c_str(), trace.slot()));
    std::string t = trace.str();
    std::string status = json_field(t, "status");
    std::cout << "status: " << status << "\n"
              << "iterations: " << json_field(t, "total_iterations")
              << " (io pairs: " << json_field(t, "io_pairs") << ")\n"
              << "solver time: " << json_field(t, "total_s") << " s\n";
    if (status == "success") std::cout << "key: " << json_field(t, "recovered_key") << "\n";
    if (!trace_out.empty()) {
        write_file(trace_out, t + "\n");
        std::cout << "wrote " << trace_out << "\n";
    }
    return status == "success" ? 0 : 2;
}

int cmd_sweep(const std::string& file, std::size_t max_keys, const std::string& scheme,
              std::uint64_t seed, int cap, double budget, const std::string& csv_out,
              const std::string& json_out) {
    if (scheme != "xor") fail("sweep supports only --scheme xor");
    CircuitPtr c = load_circuit(file);
    std::string options = "{\"seed\":" + std::to_string(seed) +
                          ",\"iteration_cap\":" + std::to_string(cap) +
                          ",\"time_budget_s\":" + std::to_string(budget) + "}";
    ApiString records;
    check(locklab_sweep(c.get(), max_keys, options.c_str(), records.slot()));
    ApiString text;
    check(locklab_report_text(records.get(), text.slot()));
    std::cout << text.get();
    if (!csv_out.empty()) {
        ApiString csv;
        check(locklab_report_csv(records.get(), csv.slot()));
        write_file(csv_out, csv.str());
        std::cout << "wrote " << csv_out << "\n";
    }
    if (!json_out.empty()) {
        write_file(json_out, records.str());
        std::cout << "wrote " << json_out << "\n";
    }
    return 0;
}

int cmd_verify(const std::string& locked_path, const std::string& oracle_path,
               const std::string& key) {
    LockedPtr locked = load_locked(locked_path);
    CircuitPtr oracle = load_circuit(oracle_path);
    int equivalent = 0;
    check(locklab_verify_key(locked.get(), oracle.get(), key.c_str(), &equivalent));
    std::cout << (equivalent ? "equivalent" : "NOT equivalent") << "\n";
    return equivalent ? 0 : 2;
}

int cmd_export_cnf(const std::string& file, bool miter, const std::string& out_path) {
    ApiString dimacs;
    if (miter) {
        LockedPtr locked = load_locked(file);
        check(locklab_export_miter_cnf(locked.get(), dimacs.slot()));
    } else {
        CircuitPtr c = load_circuit(file);
        check(locklab_export_cnf(c.get(), dimacs.slot()));
    }
    if (out_path.empty()) {
        std::cout << dimacs.get();
    } else {
        write_file(out_path, dimacs.str());
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

int cmd_sat(const std::string& file) {
    std::string text = read_file(file);
    ApiString result;
    check(locklab_sat_solve(text.c_str(), result.slot()));
    std::string r = result.str();
    bool sat = json_field(r, "result") == "sat";
    std::cout << "s " << (sat ? "SATISFIABLE" : "UNSATISFIABLE") << "\n";
    if (sat) {
        std::string model = json_field(r, "model");
        std::cout << "v ";
        for (std::size_t i = 0; i < model.size(); i++) {
            if (model[i] == '0') std::cout << "-";
            std::cout << (i + 1) << " ";
        }
        std::cout << "0\n";
    }
    std::cout << "c conflicts " << json_field(r, "conflicts") << ", decisions "
              << json_field(r, "decisions") << ", propagations "
              << json_field(r, "propagations") << "\n";
    return sat ? 10 : 20;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"logic locking laboratory"};
    app.set_help_flag("--help", "print help");  // frees -h for the lock --h option
    app.set_version_flag("--version", std::string("locklab ") + locklab_version());
    app.require_subcommand(1);

    std::string file, oracle, key, scheme = "xor", fix, replay, trace, emit;
    std::string out_path, key_out, csv_out, json_out;
    std::size_t keys = 0, max_keys = 0;
    int r = 0, h = 0, cap = 0;
    double budget = 0;
    std::uint64_t seed = 1;
    bool largest = false, miter = false, preload = false;
    std::vector<int> or_positions;

    auto* parse = app.add_subcommand("parse", "validate a bench file and print a summary");
    parse->add_option("file", file)->required();

    auto* cones = app.add_subcommand("cones", "list output cones");
    cones->add_option("file", file)->required();
    cones->add_flag("--largest", largest, "show only the largest cone");
    cones->add_option("--emit", emit, "write the largest cone as a bench file");

    auto* lock = app.add_subcommand("lock", "insert key logic");
    lock->add_option("file", file)->required();
    lock->add_option("--scheme", scheme, "xor, antisat, caslock, or sfll");
    lock->add_option("--keys", keys, "key width (xor: gate count; antisat/caslock: 2r)");
    lock->add_option("--r", r, "block width for antisat/caslock");
    lock->add_option("--h", h, "Hamming distance for sfll");
    lock->add_option("--or", or_positions, "caslock OR step positions (1..r-1)");
    lock->add_option("--seed", seed, "seed for the generated key bits");
    lock->add_option("--out", out_path, "locked bench output")->required();
    lock->add_option("--key-out", key_out, "key JSON output")->required();

    auto* attack = app.add_subcommand("attack", "recover the key with oracle access");
    attack->add_option("locked", file)->required();
    attack->add_option("--oracle", oracle, "unlocked bench file")->required();
    attack->add_option("--fix", fix, "pin key bits, e.g. k3=1,k4=0");
    attack->add_option("--replay", replay, "file with one input vector per line");
    attack->add_flag("--preload", preload, "seed with the all-zeros/all-ones pairs");
    attack->add_option("--cap", cap, "iteration cap, 0 = unlimited");
    attack->add_option("--budget", budget, "solver time budget in seconds");
    attack->add_option("--trace", trace, "write the attack trace JSON here");

    auto* sweep = app.add_subcommand("sweep", "attack at key sizes 1..N and tabulate");
    sweep->add_option("file", file)->required();
    sweep->add_option("--max-keys", max_keys)->required();
    sweep->add_option("--scheme", scheme, "only xor is supported");
    sweep->add_option("--seed", seed);
    sweep->add_option("--cap", cap, "per-attack iteration cap");
    sweep->add_option("--budget", budget, "per-attack time budget in seconds");
    sweep->add_option("--csv", csv_out, "write the CSV table here");
    sweep->add_option("--json", json_out, "write the records JSON here");

    auto* verify = app.add_subcommand("verify", "check a key against the oracle");
    verify->add_option("locked", file)->required();
    verify->add_option("--oracle", oracle)->required();
    verify->add_option("--key", key, "key as bits or hex")->required();

    auto* export_cnf = app.add_subcommand("export-cnf", "write the DIMACS encoding");
    export_cnf->add_option("file", file)->required();
    export_cnf->add_flag("--miter", miter, "two-copy key miter of a locked circuit");
    export_cnf->add_option("--out", out_path, "output path (default: stdout)");

    auto* sat = app.add_subcommand("sat", "solve a DIMACS file");
    sat->add_option("file", file)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (parse->parsed()) return cmd_parse(file);
        if (cones->parsed()) return cmd_cones(file, largest || !emit.empty(), emit);
        if (lock->parsed())
            return cmd_lock(file, scheme, keys, r, h, seed, or_positions, out_path, key_out);
        if (attack->parsed())
            return cmd_attack(file, oracle, fix, replay, preload, cap, budget, trace);
        if (sweep->parsed())
            return cmd_sweep(file, max_keys, scheme, seed, cap, budget, csv_out, json_out);
        if (verify->parsed()) return cmd_verify(file, oracle, key);
        if (export_cnf->parsed()) return cmd_export_cnf(file, miter, out_path);
        if (sat->parsed()) return cmd_sat(file);
    } catch (const std::exception& e) {
        fail(e.what());
    }
    return 0;
}
