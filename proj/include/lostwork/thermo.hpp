#ifndef LOSTWORK_THERMO_HPP
#define LOSTWORK_THERMO_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lostwork/error.hpp"

namespace lw::thermo {

// Standard values; g may be overridden per run through the config file,
// k_B is fixed.
inline constexpr double kStandardGravity = 9.80665;      // m/s^2
inline constexpr double kBoltzmann       = 1.380649e-23; // J/K

struct PhysicalConstants {
    double g   = kStandardGravity;
    double k_B = kBoltzmann;
    bool operator==(const PhysicalConstants&) const = default;
};

enum class Direction { inlet, outlet };

/// One inlet or outlet mass flow with its specific state. G is stored
/// non-negative; the direction carries the sign in every balance.
struct Stream {
    std::string name;
    Direction direction = Direction::inlet;
    double G = 0;  // mass flow rate, kg/s
    double h = 0;  // specific enthalpy, J/kg
    double s = 0;  // specific entropy, J/(kg K)
    double v = 0;  // bulk velocity, m/s
    double z = 0;  // elevation, m
    bool operator==(const Stream&) const = default;
};

/// Reservoir at fixed temperature. Qdot > 0 means heat flows into the system.
struct HeatBath {
    std::string name;
    double T = 0;     // absolute temperature, K
    double Qdot = 0;  // heat power into the system, W
    bool operator==(const HeatBath&) const = default;
};

struct AmbientReference {
    double T_a = 0;  // ambient absolute temperature, K
    bool operator==(const AmbientReference&) const = default;
};

/// Accumulation terms of the system inventory. dSdt_total is the entropy rate
/// used inside the d/dt(E - T_a S) exergy term and is kept equal to dSdt
/// (single entropy bookkeeping); the validator flags any split.
struct Accumulation {
    double dSdt = 0;        // dS/dt, W/K
    double dEdt = 0;        // dE/dt, W
    double dSdt_total = 0;  // entropy rate in the exergy accumulation term, W/K

    Accumulation() = default;
    Accumulation(double dS, double dE) : dSdt(dS), dEdt(dE), dSdt_total(dS) {}
    Accumulation(double dS, double dE, double dS_total)
        : dSdt(dS), dEdt(dE), dSdt_total(dS_total) {}
    bool operator==(const Accumulation&) const = default;
};

/// Full instantaneous description of an open control volume.
struct SystemSnapshot {
    double t = 0;  // time, s
    std::vector<Stream> streams;
    std::vector<HeatBath> baths;
    Accumulation accumulation;
    AmbientReference ambient;
    std::optional<double> Wdot_effective_declared;  // measured/declared W, if any
    bool stationary = false;
    bool mass_closed = false;
    bool operator==(const SystemSnapshot&) const = default;
};

/// Time-ordered snapshots over a process lifetime tau. Times run from 0 to
/// tau and every snapshot shares one ambient reference.
struct ProcessTimeline {
    std::vector<SystemSnapshot> snapshots;
    double tau = 0;  // lifetime, s
    bool operator==(const ProcessTimeline&) const = default;
};

struct Violation {
    std::string code;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    bool has(std::string_view code) const;
};

/// Checks every snapshot invariant and returns all violations; never throws.
/// When the snapshot is flagged mass_closed, inlet and outlet mass flows must
/// balance to 1e-9 relative.
ValidationReport validate_snapshot(const SystemSnapshot& snap);

/// Timeline-level checks (time ordering, endpoints, single ambient) plus
/// validate_snapshot on every entry.
ValidationReport validate_timeline(const ProcessTimeline& tl);

/// Flow availability carried by one stream: G * (h + v^2/2 + g z - T_a s),
/// in W. Direction is not applied; the caller signs inlet/outlet terms.
double stream_exergy_flux(const Stream& st, const AmbientReference& amb,
                          double g = kStandardGravity);

}  // namespace lw::thermo

#endif
