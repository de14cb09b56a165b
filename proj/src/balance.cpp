#include "lostwork/balance.hpp"

#include <algorithm>
#include <cmath>

namespace lw::balance {

using thermo::Direction;
using thermo::HeatBath;
using thermo::ProcessTimeline;
using thermo::Stream;
using thermo::SystemSnapshot;

double entropy_generation_rate(const SystemSnapshot& snap) {
    double rate = snap.accumulation.dSdt;
    for (const Stream& st : snap.streams)
        rate += (st.direction == Direction::outlet ? 1.0 : -1.0) * st.G * st.s;
    for (const HeatBath& b : snap.baths) {
        if (!(b.T > 0))
            throw Error("invalid_bath", "bath '" + b.name + "' has T <= 0");
        rate -= b.Qdot / b.T;
    }
    return rate;
}

double max_power(const SystemSnapshot& snap, double g) {
    double power = 0;
    for (const Stream& st : snap.streams) {
        double flux = thermo::stream_exergy_flux(st, snap.ambient, g);
        power += (st.direction == Direction::inlet ? flux : -flux);
    }
    for (const HeatBath& b : snap.baths) {
        if (!(b.T > 0))
            throw Error("invalid_bath", "bath '" + b.name + "' has T <= 0");
        power += b.Qdot * (1.0 - snap.ambient.T_a / b.T);
    }
    power -= snap.accumulation.dEdt - snap.ambient.T_a * snap.accumulation.dSdt_total;
    return power;
}

double effective_power(const SystemSnapshot& snap, double g) {
    if (snap.Wdot_effective_declared)
        return *snap.Wdot_effective_declared;
    return max_power(snap, g) - snap.ambient.T_a * entropy_generation_rate(snap);
}

LostPowerResult lost_power(const SystemSnapshot& snap, double g) {
    LostPowerResult r;
    double Sdot_g = entropy_generation_rate(snap);
    double Wmax = max_power(snap, g);

    r.exergy.Sdot_g = Sdot_g;
    r.exergy.Wdot_max = Wmax;
    r.exergy.Wdot_eff = effective_power(snap, g);
    r.exergy.Wdot_lost = Wmax - r.exergy.Wdot_eff;
    r.exergy.route = Route::from_exergy_balance;

    r.entropy.Sdot_g = Sdot_g;
    r.entropy.Wdot_max = Wmax;
    r.entropy.Wdot_eff = Wmax - snap.ambient.T_a * Sdot_g;
    r.entropy.Wdot_lost = Wmax - r.entropy.Wdot_eff;
    r.entropy.route = Route::from_entropy_balance;

    double a = r.exergy.Wdot_lost, b = r.entropy.Wdot_lost;
    r.rel_discrepancy =
        std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
    return r;
}

LifetimeResult gouy_stodola_audit(const ProcessTimeline& tl, double g) {
    if (tl.snapshots.size() < 2)
        throw Error("timeline_too_short", "audit needs at least 2 snapshots");

    const thermo::AmbientReference amb = tl.snapshots.front().ambient;
    for (const SystemSnapshot& s : tl.snapshots)
        if (!(s.ambient == amb))
            throw Error("ambient_not_constant",
                        "timeline mixes ambient temperatures");

    thermo::ValidationReport rep = thermo::validate_timeline(tl);
    if (!rep.ok()) {
        std::string codes;
        for (const auto& v : rep.violations)
            codes += (codes.empty() ? "" : ", ") + v.code;
        throw Error("invalid_timeline", "timeline fails validation: " + codes);
    }

    LifetimeResult out;
    out.S_g = integrate_over_lifetime(
        tl, [](const SystemSnapshot& s) { return entropy_generation_rate(s); });
    out.W_lambda = integrate_over_lifetime(tl, [g](const SystemSnapshot& s) {
        return lost_power(s, g).exergy.Wdot_lost;
    });

    double gs = amb.T_a * out.S_g;
    out.residual_gouy_stodola =
        std::abs(out.W_lambda - gs) /
        std::max({std::abs(out.W_lambda), std::abs(gs), kResidualFloor});
    return out;
}

}  // namespace lw::balance
