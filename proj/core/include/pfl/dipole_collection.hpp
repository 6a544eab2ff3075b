#pragma once

#include <iosfwd>
#include <string>

#include "pfl/optics_geometry.hpp"

// Dipole emission collected by a lens: collection fractions, mode-matched coupling and
// the polarization fidelity of sigma photons viewed along the quantization axis.

namespace pfl::dipole {

enum class Polarization { SigmaPlus, SigmaMinus, Pi };
enum class Orientation { Polar, Equatorial };  // optical axis parallel / perpendicular to B

struct EmissionChannel {
    Polarization polarization = Polarization::SigmaPlus;
    Orientation orientation = Orientation::Polar;

    friend bool operator==(const EmissionChannel&, const EmissionChannel&) = default;
};

std::string to_string(Polarization p);
std::string to_string(Orientation o);
std::string to_string(const EmissionChannel& c);  // e.g. "polar-sigma_plus"
Polarization polarization_from_string(const std::string& s);
Orientation orientation_from_string(const std::string& s);

// Far-field divergence half-angle and beam propagation factor of the collected mode.
class BeamQuality {
public:
    BeamQuality(double divergence_half_angle, double m2);

    double divergence_half_angle() const noexcept { return theta_; }
    double m2() const noexcept { return m2_; }

private:
    double theta_;
    double m2_;
};

// How the M in theta / (M sqrt 2) is obtained from a measured M^2.
enum class MConvention {
    SqrtM2,  // M = sqrt(M^2)
    M2AsM,   // M = M^2
    Unity,   // M = 1
};

std::string to_string(MConvention c);
MConvention m_convention_from_string(const std::string& s);  // sqrt_m2 | m2_as_m | unity

/// Angular intensity of the channel normalised to 1 over the sphere; theta from the
/// optical axis, phi measured from the plane containing B (equatorial view).
double dipole_intensity(const EmissionChannel& channel, double theta, double phi);

/// Fraction of all emitted photons inside a cone of half-angle theta_m about the optical axis.
double collection_fraction(const EmissionChannel& channel, geometry::ConeAngle theta_m);

/// Low-NA power series of the collection fraction.
double collection_fraction_series(const EmissionChannel& channel, geometry::NumericalAperture na);

/// f(theta_max) * eta_diff, with 0 <= eta_diff <= 1.
double collection_probability(const EmissionChannel& channel, geometry::ConeAngle theta_max, double eta_diff);

/// theta / (M sqrt 2).
geometry::ConeAngle effective_divergence(const BeamQuality& beam, MConvention convention = MConvention::SqrtM2);

/// f(effective divergence) * eta_diff.
double coherent_coupling(const EmissionChannel& channel, const BeamQuality& beam, double eta_diff,
                         MConvention convention = MConvention::SqrtM2);

struct CouplingBudget {
    double p_coll = 0.0;
    double p_coh = 0.0;
    double eta_diff = 0.0;
    double effective_divergence = 0.0;  // after clipping to the aperture cone
    EmissionChannel channel;
};

/// Collection and coherent coupling through the same aperture; the effective divergence is
/// clipped to the aperture half-angle since light outside the lens is not collected.
CouplingBudget coupling_budget(const EmissionChannel& channel, geometry::NumericalAperture na, const BeamQuality& beam,
                               double eta_diff, MConvention convention = MConvention::SqrtM2);

/// Overlap |<sqrt(I), g>|^2 / <g, g> over the forward hemisphere between the dipole far-field
/// amplitude and the Gaussian g = exp(-2 theta^2 / divergence^2). Throws AccuracyError when
/// the adaptive quadrature misses its tolerance.
double gaussian_overlap_oracle(const EmissionChannel& channel, double gaussian_divergence);

/// sqrt(1 - sin^2(theta) / 2): circular-polarization fidelity of a sigma photon at angle theta.
double polarization_fidelity_single(double theta);

/// Emission-weighted mean of polarization_fidelity_single over the collected sigma light.
double polarization_fidelity_collected(geometry::NumericalAperture na);

/// 1 - NA^2/8 - NA^4/96 - 7 NA^6/1536
double fidelity_series(double na);

/// "na,polar_sigma,polar_pi,equatorial_sigma,equatorial_pi,polar_sigma_series,polar_pi_series,equatorial_sigma_series"
void write_collection_curve(std::ostream& os, int steps = 100);
/// "na,fidelity,fidelity_series"
void write_fidelity_curve(std::ostream& os, int steps = 100);

}  // namespace pfl::dipole
