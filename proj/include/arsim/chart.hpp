#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace arsim::chart {

/// Configuration/chart validation failure; `path` names the offending field.
class ValidationError : public std::runtime_error {
  public:
    ValidationError(std::string path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

  private:
    std::string path_;
};

struct Waypoint {
    std::string name;
    double x = 0.0; // m, runway-touchdown-centered frame
    double y = 0.0;
    double z = 0.0;
    double speed = 0.0; // commanded horizontal speed toward this fix, m/s

    // Guidance hint, not part of the chart file: climb/descend at the rate
    // limit instead of the co-reach profile (published missed-approach legs).
    bool expedite_altitude = false;

    // Fly-by heading override for ETA prediction. Set on interception plan
    // waypoints so the predicted track follows the planned path tangents
    // instead of chord bearings.
    std::optional<double> fly_heading;
};

struct ApproachSequence {
    std::vector<Waypoint> waypoints;
};

struct ApproachChart {
    std::string name;
    std::vector<Waypoint> waypoints;  // every fix the chart knows about
    std::vector<std::string> nominal; // flown approach, entry..LTP
    std::string mapt;                 // missed approach point, on the nominal sequence
    std::vector<std::string> missed_route;
    std::string entry;

    const Waypoint& find(const std::string& name) const;
    ApproachSequence nominal_sequence() const;
    /// Conventional go-around route: missed_route then the nominal sequence
    /// from the rejoin fix onward.
    ApproachSequence conventional_route() const;
    /// Index of a fix within the nominal sequence, or npos.
    std::size_t nominal_index(const std::string& name) const;

    void validate() const; // throws ValidationError
};

/// The Málaga RWY13 procedure with its conventional missed-approach route.
ApproachChart builtin_malaga_rwy13();

ApproachChart load_chart(const std::string& json_text);
std::string save_chart(const ApproachChart& chart);

} // namespace arsim::chart
