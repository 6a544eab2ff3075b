#pragma once

#include "pfl/optics_geometry.hpp"

// Scalability estimates for PFL arrays on segmented surface traps.

namespace pfl::budget {

struct TrapArraySpec {
    double electrode_distance = 0.0;     // d [m]
    int segments_per_site = 7;
    double segment_length_factor = 0.5;  // segment length / d
    double measured_site_fraction = 0.2;
    double focal_length_factor = 3.0;    // f / d

    void validate() const;
};

struct DetectorSpec {
    double quantum_efficiency = 0.2;

    void validate() const;
};

/// Pitch of detection regions [m]: site pitch / sqrt(measured fraction), the measured sites
/// being diluted over a 2-D array.
double detection_site_spacing(const TrapArraySpec& spec);

/// NA of a lens with f = focal_length_factor * d filling the detection spacing.
geometry::NumericalAperture achievable_array_na(const TrapArraySpec& spec);

struct FaultToleranceResult {
    double p_coll = 0.0;             // polar-sigma collection times eta_diff
    double detected_fraction = 0.0;  // p_coll times detector quantum efficiency
    double required_p_coll = 0.0;
    bool pass = false;
};

inline constexpr double default_required_p_coll = 0.05;

FaultToleranceResult fault_tolerance_check(geometry::NumericalAperture na, double eta_diff,
                                           const DetectorSpec& detector = {},
                                           double required_p_coll = default_required_p_coll);

/// (p_coh_new / p_coh_ref)^2
double entanglement_rate_gain(double p_coh_new, double p_coh_ref);

}  // namespace pfl::budget
