#include "pfl/budget.hpp"

#include <cmath>

#include "pfl/dipole_collection.hpp"
#include "pfl/errors.hpp"

namespace pfl::budget {

void TrapArraySpec::validate() const
{
    if (!(electrode_distance > 0.0) || segments_per_site <= 0 || !(segment_length_factor > 0.0) ||
        !(focal_length_factor > 0.0)) {
        throw DomainError("trap array dimensions must be positive");
    }
    if (!(measured_site_fraction > 0.0 && measured_site_fraction <= 1.0)) {
        throw DomainError("measured site fraction must lie in (0, 1]");
    }
}

void DetectorSpec::validate() const
{
    if (!(quantum_efficiency > 0.0 && quantum_efficiency <= 1.0)) {
        throw DomainError("detector quantum efficiency must lie in (0, 1]");
    }
}

double detection_site_spacing(const TrapArraySpec& spec)
{
    spec.validate();
    const double pitch = spec.segments_per_site * spec.segment_length_factor * spec.electrode_distance;
    return pitch / std::sqrt(spec.measured_site_fraction);
}

geometry::NumericalAperture achievable_array_na(const TrapArraySpec& spec)
{
    const double spacing = detection_site_spacing(spec);
    return geometry::na_from_geometry({spec.focal_length_factor * spec.electrode_distance, spacing});
}

FaultToleranceResult fault_tolerance_check(geometry::NumericalAperture na, double eta_diff,
                                           const DetectorSpec& detector, double required_p_coll)
{
    detector.validate();
    if (!(required_p_coll >= 0.0 && required_p_coll <= 1.0)) {
        throw DomainError("required collection probability must lie in [0, 1]");
    }
    const dipole::EmissionChannel channel{dipole::Polarization::SigmaPlus, dipole::Orientation::Polar};
    FaultToleranceResult r;
    r.p_coll = dipole::collection_probability(channel, geometry::cone_from_na(na), eta_diff);
    r.detected_fraction = r.p_coll * detector.quantum_efficiency;
    r.required_p_coll = required_p_coll;
    r.pass = r.p_coll >= required_p_coll;
    return r;
}

double entanglement_rate_gain(double p_coh_new, double p_coh_ref)
{
    if (!(p_coh_new > 0.0 && p_coh_new <= 1.0) || !(p_coh_ref > 0.0 && p_coh_ref <= 1.0)) {
        throw DomainError("coupling probabilities must lie in (0, 1]");
    }
    const double ratio = p_coh_new / p_coh_ref;
    return ratio * ratio;
}

}  // namespace pfl::budget
