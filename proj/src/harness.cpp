#include "harness.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "cone.hpp"

namespace locklab {

SweepRecord record_from_trace(std::size_t key_size, const AttackTrace& trace) {
    SweepRecord r;
    r.key_size = key_size;
    r.io_pairs = trace.io_pairs();
    r.total_iters = trace.total_iterations;
    r.total_s = trace.total_s;
    r.io_pairs_s = trace.io_pairs_s;
    r.avg_s = r.io_pairs ? trace.io_pairs_s / static_cast<double>(r.io_pairs) : 0.0;
    r.unsat_s = trace.unsat_s;
    r.unsat_pct = trace.total_s > 0 ? trace.unsat_s / trace.total_s * 100.0 : 0.0;
    r.complete = trace.status == AttackStatus::Success;
    return r;
}

std::vector<SweepRecord> sweep(const Circuit& c, std::size_t max_keys,
                               const SweepOptions& opts) {
    if (opts.scheme != Scheme::XorInsertion)
        throw Error(ErrorKind::Unsupported, "sweep supports only iterative key gate insertion");
    Cone cone = largest_cone(c);
    std::vector<std::size_t> order = insertion_order(cone);
    if (max_keys > order.size())
        throw Error(ErrorKind::Argument,
                    "not enough insertion positions in the largest cone for " +
                        std::to_string(max_keys) + " keys");
    KeyVector bits = random_key(max_keys, opts.seed);

    AttackOptions attack_opts;
    attack_opts.iteration_cap = opts.iteration_cap;
    attack_opts.time_budget_s = opts.time_budget_s;

    std::vector<SweepRecord> records;
    records.reserve(max_keys);
    for (std::size_t k = 1; k <= max_keys; k++) {
        KeyVector key(bits.begin(), bits.begin() + k);
        LockedCircuit lc = insert_key_gates(c, k, order, key);
        AttackTrace trace = sat_attack(lc, c, attack_opts);
        records.push_back(record_from_trace(k, trace));
    }
    return records;
}

TrendFit fit_linear(const std::vector<SweepRecord>& records) {
    if (records.size() < 2)
        throw Error(ErrorKind::Argument, "trend fit needs at least two records");
    const double n = static_cast<double>(records.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : records) {
        double x = static_cast<double>(r.key_size);
        double y = static_cast<double>(r.total_iters);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0)
        throw Error(ErrorKind::Argument, "trend fit needs at least two distinct key sizes");
    TrendFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    fit.deviations.reserve(records.size());
    for (const auto& r : records) {
        double x = static_cast<double>(r.key_size);
        double y = static_cast<double>(r.total_iters);
        double d = y - (fit.slope * x + fit.intercept);
        fit.deviations.push_back(d);
        fit.residual_sum += d * d;
    }
    return fit;
}

namespace {

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

nlohmann::ordered_json record_to_json(const SweepRecord& r) {
    return nlohmann::ordered_json{
        {"key_size", r.key_size},   {"io_pairs", r.io_pairs},
        {"total_iters", r.total_iters}, {"total_s", r.total_s},
        {"io_pairs_s", r.io_pairs_s},   {"avg_s", r.avg_s},
        {"unsat_s", r.unsat_s},         {"unsat_pct", r.unsat_pct},
        {"complete", r.complete},
    };
}

} // namespace

std::string report(const std::vector<SweepRecord>& records, ReportFormat fmt) {
    std::ostringstream os;
    switch (fmt) {
    case ReportFormat::Csv:
        os << "key_size,io_pairs,total_iters,total_s,io_pairs_s,avg_s,unsat_s,unsat_pct\n";
        for (const auto& r : records)
            os << r.key_size << "," << r.io_pairs << "," << r.total_iters << ","
               << fixed6(r.total_s) << "," << fixed6(r.io_pairs_s) << "," << fixed6(r.avg_s)
               << "," << fixed6(r.unsat_s) << "," << fixed6(r.unsat_pct) << "\n";
        return os.str();
    case ReportFormat::Json: {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& r : records) arr.push_back(record_to_json(r));
        return arr.dump(2) + "\n";
    }
    case ReportFormat::Text: {
        os << "sweep points: " << records.size() << "\n";
        for (const auto& r : records) {
            os << "|K|=" << r.key_size << "  pairs=" << r.io_pairs
               << "  iters=" << r.total_iters << "  total=" << fixed6(r.total_s)
               << "s  unsat=" << fixed6(r.unsat_pct) << "%";
            if (!r.complete) os << "  [incomplete]";
            os << "\n";
        }
        for (std::size_t i = 1; i < records.size(); i++)
            if (records[i].total_iters < records[i - 1].total_iters)
                os << "iteration drop at |K|=" << records[i].key_size << ": "
                   << records[i - 1].total_iters << " -> " << records[i].total_iters << "\n";
        return os.str();
    }
    }
    throw Error(ErrorKind::Argument, "unknown report format");
}

std::vector<SweepRecord> records_from_json(const std::string& text) {
    nlohmann::json arr;
    try {
        arr = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("bad sweep JSON: ") + e.what());
    }
    if (!arr.is_array())
        throw Error(ErrorKind::Parse, "bad sweep JSON: expected an array of records");
    std::vector<SweepRecord> records;
    try {
        for (const auto& j : arr) {
            SweepRecord r;
            r.key_size = j.at("key_size").get<std::size_t>();
            r.io_pairs = j.at("io_pairs").get<std::size_t>();
            r.total_iters = j.at("total_iters").get<int>();
            r.total_s = j.at("total_s").get<double>();
            r.io_pairs_s = j.at("io_pairs_s").get<double>();
            r.avg_s = j.at("avg_s").get<double>();
            r.unsat_s = j.at("unsat_s").get<double>();
            r.unsat_pct = j.at("unsat_pct").get<double>();
            r.complete = j.value("complete", true);
            records.push_back(r);
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("bad sweep JSON: ") + e.what());
    }
    return records;
}

} // namespace locklab
