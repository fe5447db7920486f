#pragma once

namespace arsim::atmosphere {

// ISA troposphere constants
inline constexpr double kSeaLevelTemperatureK = 288.15;
inline constexpr double kSeaLevelPressurePa = 101325.0;
inline constexpr double kLapseRateKPerM = 0.0065;
inline constexpr double kGravity = 9.80665;          // m/s^2
inline constexpr double kGasConstantAir = 287.05287; // m^2/(K s^2)

inline constexpr double kMinAltitudeM = -500.0;
inline constexpr double kMaxAltitudeM = 20000.0;

struct AirSample {
    double temperature_k;
    double pressure_pa;
    double density_kgm3;
};

/// Standard-atmosphere state at geometric altitude h (meters).
/// Valid for h in [-500, 20000] m; throws std::out_of_range otherwise.
AirSample isa_sample(double altitude_m);

} // namespace arsim::atmosphere
