#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "pfl/optics_geometry.hpp"

namespace pfl::design {

// Fused silica near 370 nm; reproduces a 390 nm binary etch depth at 369.5 nm.
inline constexpr double default_substrate_index = 1.4738;

// A phase Fresnel lens. Lengths in metres.
class LensDesign {
public:
    LensDesign(double focal_length, double clear_aperture_diameter, double design_wavelength,
               int phase_levels = 2, double substrate_index = default_substrate_index);

    double focal_length() const noexcept { return focal_length_; }
    double clear_aperture_diameter() const noexcept { return diameter_; }
    double aperture_radius() const noexcept { return 0.5 * diameter_; }
    double design_wavelength() const noexcept { return wavelength_; }
    int phase_levels() const noexcept { return levels_; }
    double substrate_index() const noexcept { return index_; }

    geometry::LensGeometry geometry() const { return {focal_length_, diameter_}; }

private:
    double focal_length_;
    double diameter_;
    double wavelength_;
    int levels_;
    double index_;
};

// Annular phase-step pattern. Annulus k spans [boundaries[k-1], boundaries[k]) with
// boundaries[-1] = 0 and the last annulus ending at the aperture; it carries the phase
// -2 pi (k mod levels) / levels. Everything beyond the aperture is opaque.
struct PhaseProfile {
    std::vector<double> boundaries;
    int levels = 2;
    double aperture_radius = 0.0;

    // Phase in radians at radius r inside the aperture.
    double phase_at(double r) const;
    // Width of the outermost complete annulus; 0 when there are no boundaries.
    double outermost_annulus_width() const;
};

// Ring radii of a lens: r_p^2 = 2 f p lambda + p^2 lambda^2, i.e. the contours where the
// optical path to the focus grows by a whole wavelength. Each ring-to-ring period holds
// one full 2 pi cycle of the lens phase, quantised into phase_levels steps.
struct ZoneLayout {
    LensDesign design;
    std::vector<double> ring_radii;  // r_1 .. r_pmax, strictly increasing, <= D/2
    double etch_depth = 0.0;         // depth of one phase step

    std::size_t zone_count() const noexcept { return ring_radii.size(); }
    // Width of the outermost full period r_pmax - r_(pmax-1).
    double outermost_zone_width() const;
    // Phase-step contours for the configured number of levels.
    PhaseProfile phase_profile() const;
};

/// Radius of the contour p (p may be fractional) from the design equation.
double ring_radius(const LensDesign& d, double p);

/// Largest ring index whose radius fits inside the clear aperture.
std::size_t max_ring_index(const LensDesign& d);

ZoneLayout zone_layout(const LensDesign& d);

/// Etch depth giving a 2 pi / N phase step: lambda / (N (n - 1)). For N = 2 this is the
/// half-wave depth lambda / (2 (n - 1)).
double step_etch_depth(double wavelength, double substrate_index, int phase_levels);

/// Scalar first-order efficiency [sin(pi/N) / (pi/N)]^2, optionally times transmission.
double multilevel_efficiency(int phase_levels, bool include_fresnel_losses = false,
                             double surface_transmission = 1.0);

/// Normal-incidence two-surface plate transmission (1 - R)^2, R = ((n-1)/(n+1))^2.
double fresnel_plate_transmission(double substrate_index);

// Fractional wavelength (or frequency) detuning, |x| < 1e-2.
class ChromaticSpec {
public:
    explicit ChromaticSpec(double fractional_detuning);

    double fractional_detuning() const noexcept { return detuning_; }

    static ChromaticSpec from_frequency_offset(double frequency_offset, double wavelength);

private:
    double detuning_;
};

/// Signed focal shift f0 * dlambda / lambda0.
double chromatic_focal_shift(const LensDesign& d, ChromaticSpec c);

/// Rayleigh range of a focused cone, 4 lambda / (pi NA^2).
double cone_rayleigh_range(geometry::NumericalAperture na, double wavelength);

/// Gaussian-beam Rayleigh range pi w0^2 / lambda.
double gaussian_rayleigh_range(double waist, double wavelength);

/// Longest focal length whose chromatic shift stays inside cone_rayleigh_range:
/// 4 lambda / (pi (dlambda/lambda) NA^2).
double max_focal_length_for_dof(geometry::NumericalAperture na, ChromaticSpec c, double wavelength);

/// CSV with columns p,r_p_m (17 significant digits).
void write_zone_csv(std::ostream& os, const ZoneLayout& layout);
std::vector<double> read_zone_csv(std::istream& is);

}  // namespace pfl::design
