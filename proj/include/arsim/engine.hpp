#pragma once

#include "arsim/ars.hpp"
#include "arsim/chart.hpp"
#include "arsim/dynamics.hpp"
#include "arsim/performance.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace arsim::engine {

enum class Procedure { Conventional, Ars };

struct ScenarioConfig {
    chart::ApproachChart approach;
    performance::PerformanceModel perf;

    double spacing_s = 90.0;   // T_s
    double threshold_s = 240.0; // T_1
    int gap_period = 0;        // >0: every Nth spawn is delayed to open a gap; 0: auto placement
    int distance_to_gap = 4;   // aircraft between the missed one and the gap
    int lead_aircraft = -1;  // aircraft landing ahead of the missed one; -1: distance_to_gap + 4
    int trail_aircraft = -1; // aircraft behind the gap follower; -1: distance_to_gap + 4

    int lead_count() const { return lead_aircraft >= 0 ? lead_aircraft : distance_to_gap + 4; }
    int trail_count() const { return trail_aircraft >= 0 ? trail_aircraft : distance_to_gap + 4; }
    double gap_margin_s = 15.0; // extra width beyond 2*T_s so the gap test stays strict
    Procedure procedure = Procedure::Ars;
    dynamics::GuidanceLimits limits;
    double goaround_altitude_m = 2133.6;
    double upstream_allowance_s = 1800.0; // how far beyond the entry fix gaps may sit
    double run_cap_s = 10800.0;
    unsigned seed = 0; // reserved for jitter; the default scenario is jitter-free
    bool record_trace = true;

    void validate() const; // throws chart::ValidationError
};

struct TraceRow {
    double t_s;
    std::string aircraft_id;
    double x_m, y_m, z_m;
    double v_ms, vdot_ms2, gamma_rad, hdot_ms;
    double thrust_n, flow_kgmin, aggregated_kg;
};

enum class Outcome { Landed, FallbackConventional, Timeout };

std::string_view to_string(Outcome o);
std::string_view to_string(Procedure p);

struct RunReport {
    Outcome outcome = Outcome::Timeout;
    Procedure procedure = Procedure::Conventional;
    double maneuver_time_s = 0.0; // between the two MAPt crossings
    double maneuver_fuel_kg = 0.0;
    double goaround_time_s = -1.0;
    double landing_time_s = -1.0;
    std::optional<double> separation_min_s; // none when fewer than two monitored aircraft
    std::optional<ars::ReinjectionPlan> plan;
    std::vector<TraceRow> trace;
};

RunReport run(const ScenarioConfig& config);

struct SweepCell {
    double spacing_s = 0.0;
    int distance_to_gap = 0;
    double t_conv_s = 0.0;
    double t_ars_s = 0.0;
    double f_conv_kg = 0.0;
    double f_ars_kg = 0.0;
    double time_saving = 0.0; // 1 - t_ars/t_conv
    double fuel_saving = 0.0; // 1 - f_ars/f_conv
    Outcome ars_outcome = Outcome::Timeout;
    bool failed = false;
    std::string error;
};

/// Paired conventional/ARS runs over the (T_s, distance) grid; both cells of
/// a pair share the spawn schedule so the ratios isolate the procedure.
std::vector<SweepCell> sweep(const ScenarioConfig& base, const std::vector<double>& spacings,
                             const std::vector<int>& distances, int jobs = 1);

/// Minimum consecutive ETA difference over an ETA-sorted flow snapshot;
/// nullopt for fewer than two aircraft.
std::optional<double> separation_monitor(const std::vector<ars::FlowEntry>& flow);

// --- serialization shared by the CLI and the acceptance suite ---
std::string trace_to_csv(const std::vector<TraceRow>& rows);
std::string sweep_to_csv(const std::vector<SweepCell>& cells);
std::string report_to_json(const RunReport& report, const ScenarioConfig& config);

/// Parse a scenario document; chart/performance file references resolve
/// relative to base_dir. Throws chart::ValidationError on schema problems.
ScenarioConfig load_scenario(const std::string& json_text, const std::string& base_dir);

} // namespace arsim::engine
