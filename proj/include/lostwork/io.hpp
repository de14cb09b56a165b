#ifndef LOSTWORK_IO_HPP
#define LOSTWORK_IO_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lostwork/balance.hpp"
#include "lostwork/design.hpp"
#include "lostwork/thermo.hpp"

namespace lw::io {

inline constexpr const char* kToolName = "lostwork";
inline constexpr const char* kToolVersion = "1.0.0";

/// Analysis input, schema version "1". All numbers are SI without unit
/// suffixes; units per field are documented in the README schema table.
struct Flags {
    bool stationary = false;
    bool mass_closed = false;
    bool operator==(const Flags&) const = default;
};

struct AnalysisConfig {
    std::string version;  // always "1"
    thermo::AmbientReference ambient;
    Flags flags;
    std::optional<double> g_override;
    thermo::ProcessTimeline timeline;
    bool operator==(const AnalysisConfig&) const = default;
};

/// Strict parse: unknown fields are errors (`unknown_field`), malformed JSON
/// is `syntax_error` with line/column, value violations are
/// `schema_violation` with a path. The returned config is fully validated.
AnalysisConfig parse_config(const std::string& text);

/// Normalized JSON form of a config; parse(emit_config(c)) == c.
std::string emit_config(const AnalysisConfig& cfg);

struct Warning {
    std::string code;
    std::string detail;
};

struct SnapshotRow {
    double t = 0;
    balance::LostPowerResult lp;
};

/// Everything `analyze` reports: per-snapshot balance rows, lifetime
/// integrals, warnings with machine-readable codes, and provenance.
struct Report {
    std::string tool = kToolName;
    std::string version = kToolVersion;
    std::string config_hash;
    double T_a = 0;
    double tau = 0;
    bool effective_power_declared = false;
    std::vector<SnapshotRow> rows;
    balance::LifetimeResult lifetime;
    double Delta_S_e = 0;  // reversible-exchange entropy variation, J/K
    bool residual_within_tolerance = false;
    std::vector<Warning> warnings;
};

enum class Format { table, json };

/// Runs the Gouy-Stodola audit over the config's timeline and assembles the
/// report. `config_text` is hashed for provenance.
Report analyze(const AnalysisConfig& cfg, const std::string& config_text);

/// Renders the report. The json form is byte-stable: fixed field order and
/// fixed 17-significant-digit numbers, so re-emitting gives identical bytes.
std::string emit_report(const Report& r, Format format);

/// FNV-1a 64-bit content hash, "fnv1a64:<16 hex digits>".
std::string content_hash(const std::string& text);

// ---- design documents for `optimize` ----------------------------------------

struct DesignConfig {
    std::string version;        // always "1"
    std::string template_name;  // built-in parametrized design family
    thermo::AmbientReference ambient;
    double tau = 0;
    std::vector<std::pair<std::string, double>> template_params;
    std::vector<design::Param> params;
    design::Viewpoint viewpoint = design::Viewpoint::system;
};

/// Strict parse of a design document (same error contract as parse_config).
DesignConfig parse_design(const std::string& text);

/// Instantiates the named built-in template as a searchable design space.
design::DesignSpace build_design_space(const DesignConfig& dc);

}  // namespace lw::io

#endif
