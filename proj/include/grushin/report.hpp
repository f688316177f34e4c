#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

#include <json.hpp>

#include "grushin/cutlocus.hpp"
#include "grushin/distance.hpp"
#include "grushin/errors.hpp"
#include "grushin/mcp.hpp"

// JSON report assembly shared by the CLI and its tests. Reports use a fixed
// schema {"command", "config", "result", "witness"?, "diagnostics"?} with
// insertion-ordered keys and all floats rounded to 12 significant digits, so
// identical inputs produce byte-identical documents.

namespace grushin::report {

using json = nlohmann::ordered_json;

// Round-trips through a 12-significant-digit decimal representation.
inline double round12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::strtod(buf, nullptr);
}

inline json num(double x) { return json(round12(x)); }

inline json point_json(const Point& p) {
    json j;
    j["x"] = num(p.x);
    j["y"] = num(p.y);
    return j;
}

inline json covector_json(const Covector& c) {
    json j;
    j["u"] = num(c.u);
    j["v"] = num(c.v);
    return j;
}

inline json distance_json(const DistanceResult& r) {
    json j;
    j["value"] = num(r.value);
    j["status"] = to_string(r.status);
    j["method"] = to_string(r.method);
    if (r.witness) j["witness"] = covector_json(*r.witness);
    return j;
}

inline json scan_json(const ScanReport& r) {
    json j;
    j["n_min"] = num(r.n_min);
    j["attained"] = r.attained;
    if (r.analytic_limit) j["analytic_limit"] = num(*r.analytic_limit);
    json sups;
    for (const auto& [tag, val] : r.branch_sups) sups[to_string(tag)] = num(val);
    j["branch_sups"] = sups;
    j["samples"] = r.samples;
    j["estimator_n_min"] = num(r.estimator_n_min);
    return j;
}

inline json ratio_point_json(const RatioPoint& w, BranchTag branch) {
    json j;
    j["q"] = point_json(w.q);
    j["lam"] = covector_json(w.lam);
    j["t"] = num(w.t);
    j["branch"] = to_string(branch);
    if (w.a) j["a"] = num(*w.a);
    return j;
}

inline json witness_json(const Witness& w) {
    json j;
    j["q"] = point_json(w.q);
    j["lam"] = covector_json(w.lam);
    j["t"] = num(w.t);
    j["pointwise_n"] = num(w.pointwise_n);
    return j;
}

inline json cut_json(const CutDescription& c) {
    json j;
    j["kind"] = to_string(c.kind);
    if (c.kind == CutKind::TwoVerticalHalfLines) {
        j["x_c_signed"] = num(c.x_c_signed);
        j["y_base"] = num(c.y_base);
        j["y_offset"] = num(c.y_offset);
    }
    return j;
}

inline json make_report(const std::string& command, json config, json result) {
    json j;
    j["command"] = command;
    j["config"] = std::move(config);
    j["result"] = std::move(result);
    return j;
}

// Schema check used by the round-trip tests and by the CLI before emission.
inline void validate_report(const json& j) {
    if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "report must be an object");
    for (const char* key : {"command", "config", "result"})
        if (!j.contains(key))
            throw Error(ErrorCode::InvalidArgument, std::string("report missing key ") + key);
    if (!j["command"].is_string())
        throw Error(ErrorCode::InvalidArgument, "report command must be a string");
    if (!j["config"].is_object())
        throw Error(ErrorCode::InvalidArgument, "report config must be an object");
    for (const auto& [key, val] : j.items()) {
        if (key != "command" && key != "config" && key != "result" && key != "witness" &&
            key != "diagnostics")
            throw Error(ErrorCode::InvalidArgument, "unexpected report key " + key);
        (void)val;
    }
}

}  // namespace grushin::report
