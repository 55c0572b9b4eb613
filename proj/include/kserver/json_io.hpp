#pragma once

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "kserver/sweep.hpp"
#include "kserver/wfa.hpp"

namespace kserver {

using nlohmann::json;

// Metric descriptor: {"type": "cycle", "n": 8} | {"type": "hypercube", "dim": 3}
// | {"type": "matrix", "matrix": [[...], ...]}.
struct MetricDescriptor {
    std::string type;
    std::shared_ptr<const FiniteMetric> metric;
};

inline MetricDescriptor metric_from_json(const json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw std::invalid_argument("metric descriptor needs a \"type\" string");
    MetricDescriptor d;
    d.type = j["type"].get<std::string>();
    if (d.type == "cycle") {
        if (!j.contains("n") || !j["n"].is_number_integer())
            throw std::invalid_argument("cycle metric needs integer \"n\"");
        d.metric = std::make_shared<const FiniteMetric>(FiniteMetric::cycle(j["n"].get<int>()));
    } else if (d.type == "hypercube") {
        if (!j.contains("dim") || !j["dim"].is_number_integer())
            throw std::invalid_argument("hypercube metric needs integer \"dim\"");
        d.metric = std::make_shared<const FiniteMetric>(FiniteMetric::hypercube(j["dim"].get<int>()));
    } else if (d.type == "matrix") {
        if (!j.contains("matrix") || !j["matrix"].is_array())
            throw std::invalid_argument("matrix metric needs a \"matrix\" array");
        std::vector<std::vector<int>> rows;
        for (const auto& row : j["matrix"]) {
            if (!row.is_array()) throw std::invalid_argument("matrix rows must be arrays");
            rows.push_back(row.get<std::vector<int>>());
        }
        d.metric = std::make_shared<const FiniteMetric>(FiniteMetric::from_matrix(rows));
    } else {
        throw std::invalid_argument("unknown metric type \"" + d.type + "\"");
    }
    return d;
}

inline std::vector<int> int_array(const json& j, const std::string& what) {
    if (!j.is_array()) throw std::invalid_argument(what + " must be an array of integers");
    for (const auto& v : j)
        if (!v.is_number_integer()) throw std::invalid_argument(what + " must contain only integers");
    return j.get<std::vector<int>>();
}

struct ParsedInstance {
    Instance instance;
    MetricDescriptor metric;
    json raw;
};

// {"metric": {...}, "k": 3, "X0": [..], "requests": [..]}
inline ParsedInstance instance_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("instance must be a JSON object");
    for (const char* key : {"metric", "k", "X0", "requests"})
        if (!j.contains(key)) throw std::invalid_argument(std::string("instance is missing \"") + key + "\"");
    ParsedInstance p;
    p.raw = j;
    p.metric = metric_from_json(j["metric"]);
    p.instance.metric = p.metric.metric;
    if (!j["k"].is_number_integer()) throw std::invalid_argument("\"k\" must be an integer");
    p.instance.k = j["k"].get<int>();
    p.instance.x0 = Config(int_array(j["X0"], "\"X0\""));
    p.instance.requests = int_array(j["requests"], "\"requests\"");
    p.instance.validate();
    return p;
}

struct ParsedSupport {
    SupportWF support;
    MetricDescriptor metric;
    std::string name;
};

// {"metric": {...}, "k": 3, "r": 4, "supports": [{"S": [..], "v": 8}, ...],
//  "name": optional}
inline ParsedSupport support_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("support file must be a JSON object");
    for (const char* key : {"metric", "k", "r", "supports"})
        if (!j.contains(key)) throw std::invalid_argument(std::string("support file is missing \"") + key + "\"");
    ParsedSupport p;
    p.metric = metric_from_json(j["metric"]);
    int k = j["k"].get<int>();
    p.support.space = make_space(p.metric.metric, k);
    p.support.r = j["r"].get<int>();
    if (!j["supports"].is_array() )
        throw std::invalid_argument("\"supports\" must be an array");
    for (const auto& e : j["supports"]) {
        if (!e.is_object() || !e.contains("S") || !e.contains("v"))
            throw std::invalid_argument("each support needs \"S\" and \"v\"");
        if (!e["v"].is_number_integer()) throw std::invalid_argument("support \"v\" must be an integer");
        int v = e["v"].get<int>();
        if (v > (1 << 20))
            throw std::invalid_argument("support value " + std::to_string(v) + " exceeds the supported range");
        p.support.pairs.push_back({Config(int_array(e["S"], "support \"S\"")), v});
    }
    p.support.validate();
    p.name = j.value("name", "");
    return p;
}

// Work-function table as a JSON array in enumeration order.
inline json wf_values_json(const WorkFunction& wf) { return json(wf.values()); }

inline json trace_to_json(const Trace& tr, const json& instance_json) {
    json steps = json::array();
    for (const TraceStep& s : tr.steps) {
        json step{{"t", s.t},
                  {"request", s.request},
                  {"config", s.config.pts()},
                  {"cost", s.cost},
                  {"extcost", s.ext_cost},
                  {"wf_hash", s.wf_hash}};
        if (s.phi) step["phi"] = *s.phi;
        steps.push_back(std::move(step));
    }
    json out{{"instance", instance_json},
             {"steps", std::move(steps)},
             {"alg", tr.alg},
             {"opt", tr.opt},
             {"ext_sum", tr.ext_sum},
             {"final_wf_hash", tr.final_wf_hash}};
    if (tr.phi0) out["phi0"] = *tr.phi0;
    return out;
}

// CSV summary: t, request, cost, extcost, ALG so far, phi.
inline std::string trace_to_csv(const Trace& tr) {
    std::ostringstream os;
    os << "t,request,cost,extcost,alg,phi\n";
    long long alg = 0;
    for (const TraceStep& s : tr.steps) {
        alg += s.cost;
        os << s.t << ',' << s.request << ',' << s.cost << ',' << s.ext_cost << ',' << alg << ',';
        if (s.phi) os << *s.phi;
        os << '\n';
    }
    return os.str();
}

inline std::string mask_hex(uint32_t mask) {
    static const char* digits = "0123456789abcdef";
    std::string s(4, '0');
    for (int i = 3; i >= 0; --i) {
        s[static_cast<size_t>(i)] = digits[mask & 0xf];
        mask >>= 4;
    }
    return s;
}

inline json sweep_report_to_json(const SweepReport& rep) {
    json survivors = json::object();
    json orbits = json::object();
    std::string key;
    for (size_t c = 0; c < rep.case_names.size(); ++c) {
        key += rep.case_names[c];
        json list = json::array();
        for (uint32_t m : rep.survivors(c + 1)) list.push_back(mask_hex(m));
        survivors[key] = std::move(list);
        json olist = json::array();
        for (uint32_t m : rep.orbit_survivors(c + 1)) olist.push_back(mask_hex(m));
        orbits[key] = std::move(olist);
    }
    json rows = json::array();
    for (uint32_t m = rep.lo; m < rep.hi; ++m)
        rows.push_back({mask_hex(m), rep.matrix[static_cast<size_t>(m - rep.lo)]});
    return json{{"testcases", rep.case_names},
                {"range", {rep.lo, rep.hi}},
                {"total", rep.hi - rep.lo},
                {"pass_all", rep.pass_all_count()},
                {"survivors", std::move(survivors)},
                {"orbits", std::move(orbits)},
                {"rows", std::move(rows)},
                {"matrix_hash", rep.matrix_hash()},
                {"seconds", rep.seconds},
                {"threads", rep.threads}};
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << text;
}

} // namespace kserver
