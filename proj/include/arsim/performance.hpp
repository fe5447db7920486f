#pragma once

#include <string>

namespace arsim::performance {

inline constexpr double kGravity = 9.80665;
inline constexpr double kMetersPerFoot = 0.3048;
inline constexpr double kMetersPerSecondPerKnot = 0.514444;

enum class Config { Cruise, InitialClimb, Approach };

struct DragPolar {
    double cd0 = 0.0;
    double cd2 = 0.0;
};

struct FuelCoefficients {
    double cf1 = 0.0;  // kg/(min*kN)
    double cf2 = 0.0;  // kt
    double cf3 = 0.0;  // kg/min
    double cf4 = 0.0;  // ft
    double cfcr = 0.0; // stored for file fidelity, unused by the model
};

struct PerformanceModel {
    std::string type;
    double mass_kg = 0.0;
    double wing_area_m2 = 0.0;
    DragPolar cruise;
    DragPolar initial_climb;
    DragPolar approach;
    FuelCoefficients fuel;
    double idle_altitude_ft = 2000.0;

    const DragPolar& polar(Config c) const;
};

struct FlightSample {
    double speed_ms = 0.0;       // true airspeed V
    double accel_ms2 = 0.0;      // Vdot
    double path_angle_rad = 0.0; // gamma
    double altitude_m = 0.0;     // h
    double climb_rate_ms = 0.0;  // hdot
};

struct FuelLedger {
    double flow_kgmin = 0.0;    // F
    double aggregated_kg = 0.0; // F_a
};

/// Drag configuration as a function of vertical rate: climb above +1 m/s,
/// approach below -1 m/s, cruise in between (both boundaries inclusive of
/// their outer branch).
Config select_config(double climb_rate_ms);

double lift_coefficient(const PerformanceModel& model, double density_kgm3,
                        const FlightSample& sample);
double drag_force(const PerformanceModel& model, double density_kgm3, const FlightSample& sample,
                  Config config);

/// Thrust from the total-energy balance; density taken from the ISA model at
/// the sample altitude. May be negative in steep decelerating descents.
double instant_thrust(const PerformanceModel& model, const FlightSample& sample);

/// Fuel flow (kg/min): nominal thrust-proportional model when climbing or
/// below the idle altitude, idle model otherwise. Thrust is clamped at zero
/// here so fuel flow stays nonnegative.
double instant_fuel(const PerformanceModel& model, const FlightSample& sample, double thrust_n);

/// One 1-second tick of the aggregated-fuel loop.
void aggregate_step(FuelLedger& ledger, double flow_kgmin, double dt_s = 1.0);

/// Parse a performance config document; throws chart::ValidationError with
/// the offending field path.
PerformanceModel load_performance(const std::string& json_text);
std::string save_performance(const PerformanceModel& model);

} // namespace arsim::performance
