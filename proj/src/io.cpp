#include "lostwork/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <json.hpp>

namespace lw::io {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void schema_error(const std::string& path, const std::string& msg) {
    throw Error("schema_violation", path + ": " + msg);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* a : allowed)
            if (it.key() == a) {
                known = true;
                break;
            }
        if (!known)
            throw Error("unknown_field",
                        path + ": unknown field '" + it.key() + "'");
    }
}

const json& require(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end())
        schema_error(path, std::string("missing required field '") + key + "'");
    return *it;
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) schema_error(path, "expected a number");
    return v.get<double>();
}

std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) schema_error(path, "expected a string");
    return v.get<std::string>();
}

bool as_bool(const json& v, const std::string& path) {
    if (!v.is_boolean()) schema_error(path, "expected a boolean");
    return v.get<bool>();
}

const json& as_object(const json& v, const std::string& path) {
    if (!v.is_object()) schema_error(path, "expected an object");
    return v;
}

const json& as_array(const json& v, const std::string& path) {
    if (!v.is_array()) schema_error(path, "expected an array");
    return v;
}

json parse_document(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        std::size_t stop = e.byte > 0 ? e.byte - 1 : 0;
        for (std::size_t i = 0; i < stop && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error("syntax_error", "line " + std::to_string(line) +
                                        ", column " + std::to_string(col) +
                                        ": malformed JSON");
    }
}

thermo::Stream parse_stream(const json& v, const std::string& path) {
    as_object(v, path);
    check_keys(v, path, {"name", "direction", "G", "h", "s", "v", "z"});
    thermo::Stream st;
    st.name = as_string(require(v, path, "name"), path + ".name");
    std::string dir =
        as_string(require(v, path, "direction"), path + ".direction");
    if (dir == "inlet")
        st.direction = thermo::Direction::inlet;
    else if (dir == "outlet")
        st.direction = thermo::Direction::outlet;
    else
        schema_error(path + ".direction", "must be 'inlet' or 'outlet'");
    st.G = as_number(require(v, path, "G"), path + ".G");
    if (st.G < 0) schema_error(path + ".G", "mass flow must be >= 0");
    st.h = as_number(require(v, path, "h"), path + ".h");
    st.s = as_number(require(v, path, "s"), path + ".s");
    if (v.contains("v")) st.v = as_number(v["v"], path + ".v");
    if (v.contains("z")) st.z = as_number(v["z"], path + ".z");
    return st;
}

thermo::HeatBath parse_bath(const json& v, const std::string& path) {
    as_object(v, path);
    check_keys(v, path, {"name", "T", "Qdot"});
    thermo::HeatBath b;
    b.name = as_string(require(v, path, "name"), path + ".name");
    b.T = as_number(require(v, path, "T"), path + ".T");
    if (!(b.T > 0)) schema_error(path + ".T", "temperature must be > 0");
    b.Qdot = as_number(require(v, path, "Qdot"), path + ".Qdot");
    return b;
}

thermo::SystemSnapshot parse_snapshot(const json& v, const std::string& path,
                                      const AnalysisConfig& cfg) {
    as_object(v, path);
    check_keys(v, path,
               {"t", "streams", "baths", "accumulation", "Wdot_effective"});
    thermo::SystemSnapshot snap;
    snap.t = as_number(require(v, path, "t"), path + ".t");
    snap.ambient = cfg.ambient;
    snap.stationary = cfg.flags.stationary;
    snap.mass_closed = cfg.flags.mass_closed;

    if (v.contains("streams")) {
        const json& arr = as_array(v["streams"], path + ".streams");
        for (std::size_t i = 0; i < arr.size(); ++i)
            snap.streams.push_back(parse_stream(
                arr[i], path + ".streams[" + std::to_string(i) + "]"));
    }
    if (v.contains("baths")) {
        const json& arr = as_array(v["baths"], path + ".baths");
        for (std::size_t i = 0; i < arr.size(); ++i)
            snap.baths.push_back(
                parse_bath(arr[i], path + ".baths[" + std::to_string(i) + "]"));
    }
    if (v.contains("accumulation")) {
        const std::string apath = path + ".accumulation";
        const json& a = as_object(v["accumulation"], apath);
        check_keys(a, apath, {"dSdt", "dEdt", "dSdt_total"});
        double dS = as_number(require(a, apath, "dSdt"), apath + ".dSdt");
        double dE = as_number(require(a, apath, "dEdt"), apath + ".dEdt");
        double dS_total = a.contains("dSdt_total")
                              ? as_number(a["dSdt_total"], apath + ".dSdt_total")
                              : dS;
        snap.accumulation = thermo::Accumulation(dS, dE, dS_total);
    }
    if (v.contains("Wdot_effective"))
        snap.Wdot_effective_declared =
            as_number(v["Wdot_effective"], path + ".Wdot_effective");
    return snap;
}

// fixed 17-significant-digit form used in reports; re-emitting the same
// report must give identical bytes
std::string num17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

// shortest exact form used in normalized configs (round-trips to the same
// double)
std::string num_exact(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    double back = std::strtod(buf, nullptr);
    if (back != x) std::snprintf(buf, sizeof buf, "%.17e", x);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

AnalysisConfig parse_config(const std::string& text) {
    json doc = parse_document(text);
    as_object(doc, "$");
    check_keys(doc, "$", {"version", "ambient", "flags", "constants", "timeline"});

    AnalysisConfig cfg;
    cfg.version = as_string(require(doc, "$", "version"), "version");
    if (cfg.version != "1")
        schema_error("version", "unsupported schema version '" + cfg.version + "'");

    {
        const json& amb = as_object(require(doc, "$", "ambient"), "ambient");
        check_keys(amb, "ambient", {"T_a"});
        cfg.ambient.T_a = as_number(require(amb, "ambient", "T_a"), "ambient.T_a");
        if (!(cfg.ambient.T_a > 0))
            schema_error("ambient.T_a", "ambient temperature must be > 0");
    }
    if (doc.contains("flags")) {
        const json& f = as_object(doc["flags"], "flags");
        check_keys(f, "flags", {"stationary", "mass_closed"});
        if (f.contains("stationary"))
            cfg.flags.stationary = as_bool(f["stationary"], "flags.stationary");
        if (f.contains("mass_closed"))
            cfg.flags.mass_closed = as_bool(f["mass_closed"], "flags.mass_closed");
    }
    if (doc.contains("constants")) {
        const json& c = as_object(doc["constants"], "constants");
        check_keys(c, "constants", {"g"});
        if (c.contains("g")) {
            double g = as_number(c["g"], "constants.g");
            if (!(g > 0)) schema_error("constants.g", "gravity must be > 0");
            cfg.g_override = g;
        }
    }
    {
        const json& tl = as_object(require(doc, "$", "timeline"), "timeline");
        check_keys(tl, "timeline", {"tau", "snapshots"});
        cfg.timeline.tau = as_number(require(tl, "timeline", "tau"), "timeline.tau");
        if (!(cfg.timeline.tau > 0))
            schema_error("timeline.tau", "lifetime must be > 0");
        const json& snaps =
            as_array(require(tl, "timeline", "snapshots"), "timeline.snapshots");
        if (snaps.empty())
            schema_error("timeline.snapshots", "need at least one snapshot");
        for (std::size_t i = 0; i < snaps.size(); ++i)
            cfg.timeline.snapshots.push_back(parse_snapshot(
                snaps[i], "timeline.snapshots[" + std::to_string(i) + "]", cfg));
    }

    // per-snapshot invariants; the >= 2 snapshot rule is left to the audit
    // operations, which report timeline_too_short
    for (std::size_t i = 0; i < cfg.timeline.snapshots.size(); ++i) {
        const std::string path = "timeline.snapshots[" + std::to_string(i) + "]";
        thermo::ValidationReport rep =
            thermo::validate_snapshot(cfg.timeline.snapshots[i]);
        if (!rep.ok()) {
            const thermo::Violation& v = rep.violations.front();
            schema_error(path, v.code + (v.detail.empty() ? "" : " (" + v.detail + ")"));
        }
        if (i > 0 && !(cfg.timeline.snapshots[i - 1].t < cfg.timeline.snapshots[i].t))
            schema_error(path + ".t", "snapshot times must strictly increase");
    }
    if (cfg.timeline.snapshots.front().t != 0)
        schema_error("timeline.snapshots[0].t", "first snapshot must be at t = 0");
    if (cfg.timeline.snapshots.size() >= 2 &&
        cfg.timeline.snapshots.back().t != cfg.timeline.tau)
        schema_error("timeline", "last snapshot time must equal tau");
    return cfg;
}

std::string emit_config(const AnalysisConfig& cfg) {
    ordered_json doc;
    doc["version"] = cfg.version;
    doc["ambient"] = {{"T_a", cfg.ambient.T_a}};
    doc["flags"] = {{"stationary", cfg.flags.stationary},
                    {"mass_closed", cfg.flags.mass_closed}};
    if (cfg.g_override) doc["constants"] = {{"g", *cfg.g_override}};
    ordered_json snaps = ordered_json::array();
    for (const thermo::SystemSnapshot& s : cfg.timeline.snapshots) {
        ordered_json snap;
        snap["t"] = s.t;
        ordered_json streams = ordered_json::array();
        for (const thermo::Stream& st : s.streams)
            streams.push_back(
                {{"name", st.name},
                 {"direction",
                  st.direction == thermo::Direction::inlet ? "inlet" : "outlet"},
                 {"G", st.G},
                 {"h", st.h},
                 {"s", st.s},
                 {"v", st.v},
                 {"z", st.z}});
        snap["streams"] = std::move(streams);
        ordered_json baths = ordered_json::array();
        for (const thermo::HeatBath& b : s.baths)
            baths.push_back({{"name", b.name}, {"T", b.T}, {"Qdot", b.Qdot}});
        snap["baths"] = std::move(baths);
        snap["accumulation"] = {{"dSdt", s.accumulation.dSdt},
                                {"dEdt", s.accumulation.dEdt},
                                {"dSdt_total", s.accumulation.dSdt_total}};
        if (s.Wdot_effective_declared)
            snap["Wdot_effective"] = *s.Wdot_effective_declared;
        snaps.push_back(std::move(snap));
    }
    doc["timeline"] = {{"tau", cfg.timeline.tau}, {"snapshots", std::move(snaps)}};
    return doc.dump(2) + "\n";
}

std::string content_hash(const std::string& text) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

Report analyze(const AnalysisConfig& cfg, const std::string& config_text) {
    const double g = cfg.g_override.value_or(thermo::kStandardGravity);

    Report r;
    r.config_hash = content_hash(config_text);
    r.T_a = cfg.ambient.T_a;
    r.tau = cfg.timeline.tau;

    for (const thermo::SystemSnapshot& s : cfg.timeline.snapshots) {
        r.rows.push_back({s.t, balance::lost_power(s, g)});
        if (s.Wdot_effective_declared) r.effective_power_declared = true;
    }
    r.lifetime = balance::gouy_stodola_audit(cfg.timeline, g);
    r.Delta_S_e = balance::integrate_over_lifetime(
                      cfg.timeline,
                      [](const thermo::SystemSnapshot& s) {
                          return s.accumulation.dSdt;
                      }) -
                  r.lifetime.S_g;
    r.residual_within_tolerance =
        r.lifetime.residual_gouy_stodola <= balance::kResidualTolerance;

    for (std::size_t i = 0; i < r.rows.size(); ++i)
        if (r.rows[i].lp.exergy.Sdot_g < 0)
            r.warnings.push_back(
                {"negative_entropy_generation",
                 "snapshots[" + std::to_string(i) +
                     "]: Sdot_g = " + num_exact(r.rows[i].lp.exergy.Sdot_g)});
    if (r.effective_power_declared && !r.residual_within_tolerance)
        r.warnings.push_back(
            {"declared_power_mismatch",
             "Gouy-Stodola residual " + num_exact(r.lifetime.residual_gouy_stodola) +
                 " with declared effective power"});
    return r;
}

namespace {

std::string emit_report_json(const Report& r) {
    std::string o;
    o += "{\n";
    o += "  \"tool\": \"" + escape(r.tool) + "\",\n";
    o += "  \"version\": \"" + escape(r.version) + "\",\n";
    o += "  \"config_hash\": \"" + escape(r.config_hash) + "\",\n";
    o += "  \"T_a\": " + num17(r.T_a) + ",\n";
    o += "  \"tau\": " + num17(r.tau) + ",\n";
    o += "  \"snapshots\": [\n";
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const SnapshotRow& row = r.rows[i];
        o += "    {\"t\": " + num17(row.t);
        o += ", \"Sdot_g\": " + num17(row.lp.exergy.Sdot_g);
        o += ", \"Wdot_max\": " + num17(row.lp.exergy.Wdot_max);
        o += ", \"Wdot_eff\": " + num17(row.lp.exergy.Wdot_eff);
        o += ", \"Wdot_lost\": " + num17(row.lp.exergy.Wdot_lost);
        o += ", \"Wdot_lost_entropy_route\": " + num17(row.lp.entropy.Wdot_lost);
        o += ", \"route_discrepancy\": " + num17(row.lp.rel_discrepancy);
        o += i + 1 < r.rows.size() ? "},\n" : "}\n";
    }
    o += "  ],\n";
    o += "  \"lifetime\": {\n";
    o += "    \"S_g\": " + num17(r.lifetime.S_g) + ",\n";
    o += "    \"W_lambda\": " + num17(r.lifetime.W_lambda) + ",\n";
    o += "    \"T_a_S_g\": " + num17(r.T_a * r.lifetime.S_g) + ",\n";
    o += "    \"Delta_S_e\": " + num17(r.Delta_S_e) + ",\n";
    o += "    \"residual\": " + num17(r.lifetime.residual_gouy_stodola) + ",\n";
    o += std::string("    \"within_tolerance\": ") +
         (r.residual_within_tolerance ? "true" : "false") + ",\n";
    o += std::string("    \"effective_power_declared\": ") +
         (r.effective_power_declared ? "true" : "false") + "\n";
    o += "  },\n";
    o += "  \"warnings\": [";
    for (std::size_t i = 0; i < r.warnings.size(); ++i) {
        o += i == 0 ? "\n" : ",\n";
        o += "    {\"code\": \"" + escape(r.warnings[i].code) + "\", \"detail\": \"" +
             escape(r.warnings[i].detail) + "\"}";
    }
    o += r.warnings.empty() ? "]\n" : "\n  ]\n";
    o += "}\n";
    return o;
}

std::string emit_report_table(const Report& r) {
    char line[256];
    std::string o;
    o += std::string(r.tool) + " audit report  (" + r.version + ", " +
         r.config_hash + ")\n";
    std::snprintf(line, sizeof line, "ambient T_a %.6g K, lifetime tau %.6g s\n\n",
                  r.T_a, r.tau);
    o += line;

    std::snprintf(line, sizeof line, "%12s %15s %15s %15s %15s %15s\n", "t [s]",
                  "Sdot_g [W/K]", "Wdot_max [W]", "Wdot_eff [W]",
                  "Wdot_lost [W]", "T_a*Sdot_g [W]");
    o += line;
    for (const SnapshotRow& row : r.rows) {
        std::snprintf(line, sizeof line, "%12.5g %15.5g %15.5g %15.5g %15.5g %15.5g\n",
                      row.t, row.lp.exergy.Sdot_g, row.lp.exergy.Wdot_max,
                      row.lp.exergy.Wdot_eff, row.lp.exergy.Wdot_lost,
                      row.lp.entropy.Wdot_lost);
        o += line;
    }

    o += "\nlifetime integrals\n";
    std::snprintf(line, sizeof line, "  %-12s %.5g J/K\n", "S_g", r.lifetime.S_g);
    o += line;
    std::snprintf(line, sizeof line, "  %-12s %.5g J\n", "W_lambda",
                  r.lifetime.W_lambda);
    o += line;
    std::snprintf(line, sizeof line, "  %-12s %.5g J\n", "T_a*S_g",
                  r.T_a * r.lifetime.S_g);
    o += line;
    std::snprintf(line, sizeof line, "  %-12s %.5g J/K\n", "Delta_S_e", r.Delta_S_e);
    o += line;
    if (r.effective_power_declared)
        std::snprintf(line, sizeof line,
                      "  %-12s %.5g   reported only (declared effective power)\n",
                      "residual", r.lifetime.residual_gouy_stodola);
    else
        std::snprintf(line, sizeof line, "  %-12s %.5g   residual <= 1e-10: %s\n",
                      "residual", r.lifetime.residual_gouy_stodola,
                      r.residual_within_tolerance ? "PASS" : "FAIL");
    o += line;

    if (r.warnings.empty()) {
        o += "\nwarnings: none\n";
    } else {
        o += "\nwarnings:\n";
        for (const Warning& w : r.warnings)
            o += "  [" + w.code + "] " + w.detail + "\n";
    }
    return o;
}

}  // namespace

std::string emit_report(const Report& r, Format format) {
    return format == Format::json ? emit_report_json(r) : emit_report_table(r);
}

// ---- design documents --------------------------------------------------------

namespace {

thermo::ProcessTimeline conduction_timeline(double T_a, double tau,
                                            double Sdot_g_target) {
    // hot bath at 2 T_a feeding a cold bath at T_a realizes any prescribed
    // entropy generation rate with zero effective power
    const double Qdot = 2.0 * T_a * Sdot_g_target;
    thermo::SystemSnapshot snap;
    snap.ambient.T_a = T_a;
    snap.stationary = true;
    snap.baths = {{"hot", 2.0 * T_a, Qdot}, {"cold", T_a, -Qdot}};
    thermo::ProcessTimeline tl;
    tl.tau = tau;
    snap.t = 0;
    tl.snapshots.push_back(snap);
    snap.t = tau;
    tl.snapshots.push_back(snap);
    return tl;
}

double template_param(const DesignConfig& dc, const std::string& name) {
    for (const auto& [k, v] : dc.template_params)
        if (k == name) return v;
    schema_error("template_params", "missing required parameter '" + name + "'");
}

}  // namespace

DesignConfig parse_design(const std::string& text) {
    json doc = parse_document(text);
    as_object(doc, "$");
    check_keys(doc, "$",
               {"version", "template", "ambient", "tau", "template_params",
                "params", "viewpoint"});

    DesignConfig dc;
    dc.version = as_string(require(doc, "$", "version"), "version");
    if (dc.version != "1")
        schema_error("version", "unsupported schema version '" + dc.version + "'");
    dc.template_name = as_string(require(doc, "$", "template"), "template");

    const json& amb = as_object(require(doc, "$", "ambient"), "ambient");
    check_keys(amb, "ambient", {"T_a"});
    dc.ambient.T_a = as_number(require(amb, "ambient", "T_a"), "ambient.T_a");
    if (!(dc.ambient.T_a > 0))
        schema_error("ambient.T_a", "ambient temperature must be > 0");

    dc.tau = as_number(require(doc, "$", "tau"), "tau");
    if (!(dc.tau > 0)) schema_error("tau", "lifetime must be > 0");

    if (doc.contains("template_params")) {
        const json& tp = as_object(doc["template_params"], "template_params");
        for (auto it = tp.begin(); it != tp.end(); ++it)
            dc.template_params.emplace_back(
                it.key(), as_number(it.value(), "template_params." + it.key()));
    }

    const json& params = as_array(require(doc, "$", "params"), "params");
    for (std::size_t i = 0; i < params.size(); ++i) {
        const std::string path = "params[" + std::to_string(i) + "]";
        const json& p = as_object(params[i], path);
        check_keys(p, path, {"name", "lower", "upper"});
        design::Param dp;
        dp.name = as_string(require(p, path, "name"), path + ".name");
        dp.lower = as_number(require(p, path, "lower"), path + ".lower");
        dp.upper = as_number(require(p, path, "upper"), path + ".upper");
        if (!(dp.lower < dp.upper))
            schema_error(path, "lower bound must be below upper bound");
        dc.params.push_back(std::move(dp));
    }
    if (dc.params.empty() || dc.params.size() > 4)
        schema_error("params", "need 1 to 4 search parameters");

    if (doc.contains("viewpoint")) {
        std::string vp = as_string(doc["viewpoint"], "viewpoint");
        if (vp == "system")
            dc.viewpoint = design::Viewpoint::system;
        else if (vp == "environment")
            dc.viewpoint = design::Viewpoint::environment;
        else
            schema_error("viewpoint", "must be 'system' or 'environment'");
    }
    return dc;
}

design::DesignSpace build_design_space(const DesignConfig& dc) {
    design::DesignSpace ds;
    ds.params = dc.params;

    if (dc.template_name == "conduction_tradeoff") {
        // Sdot_g(x) = a/x + b x : competing irreversibility contributions
        if (dc.params.size() != 1)
            schema_error("params", "conduction_tradeoff takes one parameter");
        const double a = template_param(dc, "a");
        const double b = template_param(dc, "b");
        const double T_a = dc.ambient.T_a, tau = dc.tau;
        ds.builder = [a, b, T_a, tau](std::span<const double> x) {
            return conduction_timeline(T_a, tau, a / x[0] + b * x[0]);
        };
    } else if (dc.template_name == "quadratic_well") {
        // W_lambda(theta) = curvature (theta - center)^2 + offset, J
        if (dc.params.size() != 1)
            schema_error("params", "quadratic_well takes one parameter");
        const double c = template_param(dc, "curvature");
        const double center = template_param(dc, "center");
        const double offset = template_param(dc, "offset");
        const double T_a = dc.ambient.T_a, tau = dc.tau;
        ds.builder = [c, center, offset, T_a, tau](std::span<const double> x) {
            double W = c * (x[0] - center) * (x[0] - center) + offset;
            return conduction_timeline(T_a, tau, W / (T_a * tau));
        };
    } else {
        schema_error("template",
                     "unknown template '" + dc.template_name +
                         "' (built-ins: conduction_tradeoff, quadratic_well)");
    }
    return ds;
}

}  // namespace lw::io
