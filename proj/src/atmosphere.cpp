#include "arsim/atmosphere.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace arsim::atmosphere {

AirSample isa_sample(double altitude_m) {
    if (!(altitude_m >= kMinAltitudeM && altitude_m <= kMaxAltitudeM)) {
        throw std::out_of_range("isa_sample: altitude " + std::to_string(altitude_m) +
                                " m outside [" + std::to_string(kMinAltitudeM) + ", " +
                                std::to_string(kMaxAltitudeM) + "]");
    }
    // Troposphere lapse; geometric altitude stands in for geopotential here.
    const double t = kSeaLevelTemperatureK - kLapseRateKPerM * altitude_m;
    const double exponent = kGravity / (kGasConstantAir * kLapseRateKPerM);
    const double p = kSeaLevelPressurePa * std::pow(t / kSeaLevelTemperatureK, exponent);
    return AirSample{t, p, p / (kGasConstantAir * t)};
}

} // namespace arsim::atmosphere
