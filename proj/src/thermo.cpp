#include "lostwork/thermo.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace lw::thermo {

namespace {

std::string num(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

bool ValidationReport::has(std::string_view code) const {
    for (const auto& v : violations)
        if (v.code == code) return true;
    return false;
}

ValidationReport validate_snapshot(const SystemSnapshot& snap) {
    ValidationReport rep;
    auto add = [&rep](const char* code, const std::string& detail) {
        rep.violations.push_back({code, detail});
    };

    if (!finite(snap.t))
        add("snapshot_nonfinite_time", "t is not finite");

    std::set<std::string> seen;
    double G_in = 0, G_out = 0;
    for (std::size_t i = 0; i < snap.streams.size(); ++i) {
        const Stream& st = snap.streams[i];
        if (!seen.insert(st.name).second)
            add("duplicate_stream_name", "stream '" + st.name + "'");
        if (st.G < 0)
            add("stream_negative_flow", "stream '" + st.name + "' G=" + num(st.G));
        if (!(finite(st.G) && finite(st.h) && finite(st.s) && finite(st.v) && finite(st.z)))
            add("stream_nonfinite", "stream '" + st.name + "'");
        else
            (st.direction == Direction::inlet ? G_in : G_out) += st.G;
    }

    seen.clear();
    for (const HeatBath& b : snap.baths) {
        if (!seen.insert(b.name).second)
            add("duplicate_bath_name", "bath '" + b.name + "'");
        if (!(b.T > 0) || !finite(b.T))
            add("bath_nonpositive_temperature", "bath '" + b.name + "' T=" + num(b.T));
        if (!finite(b.Qdot))
            add("bath_nonfinite", "bath '" + b.name + "' Qdot not finite");
    }

    if (!(snap.ambient.T_a > 0) || !finite(snap.ambient.T_a))
        add("ambient_nonpositive_temperature", "T_a=" + num(snap.ambient.T_a));

    const Accumulation& a = snap.accumulation;
    if (!(finite(a.dSdt) && finite(a.dEdt) && finite(a.dSdt_total)))
        add("accumulation_nonfinite", "");
    else if (a.dSdt_total != a.dSdt)
        add("accumulation_split_bookkeeping",
            "dSdt_total=" + num(a.dSdt_total) + " differs from dSdt=" + num(a.dSdt));

    if (snap.stationary && (a.dSdt != 0 || a.dEdt != 0))
        add("stationary_accumulation_nonzero",
            "dSdt=" + num(a.dSdt) + " dEdt=" + num(a.dEdt));

    if (snap.Wdot_effective_declared && !finite(*snap.Wdot_effective_declared))
        add("declared_power_nonfinite", "");

    if (snap.mass_closed) {
        double tol = 1e-9 * std::max(1.0, G_in + G_out);
        if (std::abs(G_in - G_out) > tol)
            add("mass_not_closed",
                "sum_in G=" + num(G_in) + " sum_out G=" + num(G_out));
    }

    return rep;
}

ValidationReport validate_timeline(const ProcessTimeline& tl) {
    ValidationReport rep;
    auto add = [&rep](const char* code, const std::string& detail) {
        rep.violations.push_back({code, detail});
    };

    if (tl.snapshots.size() < 2)
        add("timeline_too_short", "need at least 2 snapshots, have " +
                                      std::to_string(tl.snapshots.size()));
    if (!(tl.tau > 0) || !finite(tl.tau))
        add("tau_nonpositive", "tau=" + num(tl.tau));

    for (std::size_t i = 0; i + 1 < tl.snapshots.size(); ++i)
        if (!(tl.snapshots[i].t < tl.snapshots[i + 1].t)) {
            add("timeline_time_order", "snapshots[" + std::to_string(i + 1) +
                                           "].t does not increase");
            break;
        }

    if (!tl.snapshots.empty()) {
        if (tl.snapshots.front().t != 0)
            add("timeline_endpoint_mismatch",
                "first time " + num(tl.snapshots.front().t) + " != 0");
        if (tl.snapshots.back().t != tl.tau)
            add("timeline_endpoint_mismatch",
                "last time " + num(tl.snapshots.back().t) + " != tau");
        const AmbientReference& amb = tl.snapshots.front().ambient;
        for (std::size_t i = 1; i < tl.snapshots.size(); ++i)
            if (!(tl.snapshots[i].ambient == amb)) {
                add("ambient_not_constant",
                    "snapshots[" + std::to_string(i) + "] changes T_a");
                break;
            }
    }

    for (std::size_t i = 0; i < tl.snapshots.size(); ++i) {
        ValidationReport snap_rep = validate_snapshot(tl.snapshots[i]);
        for (auto& v : snap_rep.violations)
            rep.violations.push_back(
                {v.code, "snapshots[" + std::to_string(i) + "]: " + v.detail});
    }

    return rep;
}

double stream_exergy_flux(const Stream& st, const AmbientReference& amb, double g) {
    // availability form: the entropy term enters with -T_a s so that
    // Wdot_max - Wdot = T_a Sdot_g closes exactly
    double flux = st.G * (st.h + 0.5 * st.v * st.v + g * st.z - amb.T_a * st.s);
    if (!std::isfinite(flux))
        throw Error("numeric_overflow",
                    "stream '" + st.name + "' exergy flux is not finite");
    return flux;
}

}  // namespace lw::thermo
