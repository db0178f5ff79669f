#pragma once

#include "petsim/engine.hpp"
#include "petsim/thermal_network.hpp"

namespace petsim::testing {

// Calibration runs a few hundred eigendecompositions; share one result.
inline const ThermalNetwork& calibrated_network() {
    static const ThermalNetwork net =
        calibrate_network(build_network(default_geometry(), default_materials()), 0.040, 7.0);
    return net;
}

inline const ThermalNetwork& raw_network() {
    static const ThermalNetwork net = build_network(default_geometry(), default_materials());
    return net;
}

inline ScenarioConfig scenario(const WorkloadTrace& trace, const GovernorSpec& governor) {
    ScenarioConfig cfg;
    cfg.name = trace.name + "-" + governor.label();
    cfg.workload = trace;
    cfg.governors = {governor};
    return cfg;
}

}  // namespace petsim::testing
