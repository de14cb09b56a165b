#ifndef LOSTWORK_BALANCE_HPP
#define LOSTWORK_BALANCE_HPP

#include <cstddef>

#include "lostwork/thermo.hpp"

namespace lw::balance {

enum class Route { from_entropy_balance, from_exergy_balance };

/// One snapshot's power bookkeeping. Wdot_lost is always the literal
/// difference Wdot_max - Wdot_eff of the stored fields; the route tag says
/// where Wdot_eff came from (declared/computed effective power for the exergy
/// route, Wdot_max - T_a*Sdot_g for the entropy route).
struct BalanceResult {
    double Sdot_g = 0;     // entropy generation rate, W/K
    double Wdot_max = 0;   // maximum (reversible) power, W
    double Wdot_eff = 0;   // effective power, W
    double Wdot_lost = 0;  // lost power, W
    Route route = Route::from_exergy_balance;
};

/// Lost power computed by both routes plus their relative discrepancy.
/// With a computed effective power the two agree to round-off.
struct LostPowerResult {
    BalanceResult exergy;   // route (a): Wdot_max - Wdot_eff
    BalanceResult entropy;  // route (b): T_a * Sdot_g
    double rel_discrepancy = 0;
};

struct LifetimeResult {
    double S_g = 0;       // entropy generation over tau, J/K
    double W_lambda = 0;  // lost work over tau, J
    double residual_gouy_stodola = 0;  // relative, see kResidualFloor
};

inline constexpr double kResidualFloor = 1e-30;
inline constexpr double kResidualTolerance = 1e-10;

/// Sdot_g = dS/dt + sum_out G s - sum_in G s - sum_i Qdot_i / T_i.
/// May be negative for inconsistent input data; callers decide what to do
/// with that (the reporting layer flags it as a warning).
double entropy_generation_rate(const thermo::SystemSnapshot& snap);

/// Reversible power: stream availability fluxes in minus out, plus the
/// Carnot-weighted bath term sum_i Qdot_i (1 - T_a/T_i), minus the exergy
/// accumulation dE/dt - T_a dS/dt.
double max_power(const thermo::SystemSnapshot& snap,
                 double g = thermo::kStandardGravity);

/// Declared effective power when present, otherwise Wdot_max - T_a*Sdot_g.
double effective_power(const thermo::SystemSnapshot& snap,
                       double g = thermo::kStandardGravity);

LostPowerResult lost_power(const thermo::SystemSnapshot& snap,
                           double g = thermo::kStandardGravity);

/// Composite trapezoid over the (possibly nonuniform) snapshot time grid;
/// exact for rates piecewise linear in t. RateFn: double(const SystemSnapshot&).
template <class RateFn>
double integrate_over_lifetime(const thermo::ProcessTimeline& tl, RateFn&& rate) {
    if (tl.snapshots.size() < 2)
        throw Error("timeline_too_short",
                    "integration needs at least 2 snapshots");
    double sum = 0;
    double prev = rate(tl.snapshots[0]);
    for (std::size_t i = 1; i < tl.snapshots.size(); ++i) {
        double cur = rate(tl.snapshots[i]);
        double dt = tl.snapshots[i].t - tl.snapshots[i - 1].t;
        sum += 0.5 * dt * (prev + cur);
        prev = cur;
    }
    return sum;
}

/// Integrates Sdot_g and the exergy-route lost power independently over the
/// lifetime and forms the relative Gouy-Stodola residual. With computed
/// effective power the residual is below kResidualTolerance; with declared
/// power it measures the model-vs-data mismatch and is only reported.
LifetimeResult gouy_stodola_audit(const thermo::ProcessTimeline& tl,
                                  double g = thermo::kStandardGravity);

}  // namespace lw::balance

#endif
