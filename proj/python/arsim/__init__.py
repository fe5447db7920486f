"""Python face of the approach-flow simulator core."""

from arsim._arsim import (
    AirSample,
    DubinsPath,
    FlightSample,
    PerformanceModel,
    Pose2D,
    builtin_chart_json,
    dubins_shortest,
    isa_sample,
    run_scenario,
    sweep_scenario,
)

__all__ = [
    "AirSample",
    "DubinsPath",
    "FlightSample",
    "PerformanceModel",
    "Pose2D",
    "builtin_chart_json",
    "dubins_shortest",
    "isa_sample",
    "run_scenario",
    "sweep_scenario",
]
