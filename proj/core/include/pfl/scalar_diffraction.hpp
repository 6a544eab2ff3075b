#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "pfl/hankel_transform.hpp"
#include "pfl/pfl_design.hpp"

// Nonparaxial scalar propagation of radially symmetric fields (angular spectrum on a
// quasi-discrete Hankel grid) and virtual knife-edge analysis of the focus.

namespace pfl::diffraction {

inline constexpr std::size_t default_grid_points = 8192;
inline constexpr double default_grid_radius_factor = 1.2;

struct GridSpec {
    std::size_t points;
    double radius;
};

/// Grid of radius radius_factor * aperture that puts at least `samples_per_zone` samples
/// across the outermost zone of the layout; points are rounded up to a multiple of 1024
/// and never fall below default_grid_points.
GridSpec recommended_grid(const design::ZoneLayout& layout, double radius_factor = default_grid_radius_factor,
                          double samples_per_zone = 4.4);

std::shared_ptr<const HankelTransform> make_grid(const GridSpec& spec);

class RadialField {
public:
    RadialField(std::shared_ptr<const HankelTransform> grid, std::vector<std::complex<double>> amplitude,
                double wavelength);

    const std::shared_ptr<const HankelTransform>& grid() const noexcept { return grid_; }
    const std::vector<double>& radii() const noexcept { return grid_->radii(); }
    const std::vector<std::complex<double>>& amplitude() const noexcept { return amplitude_; }
    double wavelength() const noexcept { return wavelength_; }
    double wavenumber() const noexcept;

    // 2 pi int |E|^2 r dr
    double power() const;

    RadialField with_amplitude(std::vector<std::complex<double>> amplitude) const;

private:
    std::shared_ptr<const HankelTransform> grid_;
    std::vector<std::complex<double>> amplitude_;
    double wavelength_;
};

/// exp(-r^2 / w^2) scaled to the given peak amplitude.
RadialField make_gaussian_field(std::shared_ptr<const HankelTransform> grid, double waist, double wavelength,
                                double peak_amplitude = 1.0);
RadialField make_plane_wave(std::shared_ptr<const HankelTransform> grid, double wavelength);

/// Multiplies by exp(i phase(r)) inside the profile's aperture and zeroes the field outside.
RadialField apply_phase_profile(const RadialField& field, const design::PhaseProfile& profile);

/// Stepped PFL phase (2 pi / N steps) of the layout. Throws DomainError when the grid does not
/// cover the aperture and ResolutionError when the outermost zone gets fewer than 4 samples or
/// the lens NA exceeds the grid band limit.
RadialField apply_binary_pfl(const RadialField& field, const design::ZoneLayout& layout);

enum class LensPhase {
    Hyperbolic,  // exp(-i k (sqrt(f^2 + r^2) - f)), stigmatic focus at f
    Paraxial,    // exp(-i k r^2 / (2 f))
};

RadialField apply_ideal_lens(const RadialField& field, double focal_length, double aperture_radius,
                             LensPhase phase = LensPhase::Hyperbolic);

struct PropagationOptions {
    // Throw ResolutionError if the grid cannot represent this NA.
    double required_na = 0.0;
    // Evanescent rows attenuated below this at the shortest distance are dropped.
    double attenuation_floor = 1e-20;
};

/// Angular spectrum of a field, prepared for evaluation at any z >= min_distance.
class AngularSpectrum {
public:
    explicit AngularSpectrum(const RadialField& field, double min_distance = 0.0,
                             const PropagationOptions& options = {});

    const HankelTransform& grid() const noexcept { return *grid_; }
    double wavelength() const noexcept { return wavelength_; }
    std::size_t rows() const noexcept { return spectrum_.size(); }
    const std::vector<std::complex<double>>& spectrum() const noexcept { return spectrum_; }

    // Power carried by the retained rows with kappa < k; conserved by propagation.
    double propagating_power() const;
    // Power of the source field.
    double field_power() const noexcept { return field_power_; }
    // sqrt(2 <kappa^2>) over the propagating spectrum.
    double rms_wavenumber() const noexcept { return rms_wavenumber_; }

    // Spectrum multiplied by the propagator and the inverse weights for distance z.
    std::vector<std::complex<double>> weighted_at(double z) const;

    std::complex<double> field_at(double z, double rho) const;
    std::vector<std::complex<double>> field_at(double z, std::span<const double> rho) const;
    std::complex<double> on_axis(double z) const;

    RadialField propagate(double z) const;

private:
    std::shared_ptr<const HankelTransform> grid_;
    double wavelength_;
    double min_distance_;
    double field_power_;
    double rms_wavenumber_ = 0.0;
    std::size_t propagating_rows_ = 0;
    std::vector<std::complex<double>> spectrum_;
};

/// Exact angular-spectrum propagation over `distance` >= 0, sampled back on the field's grid.
RadialField propagate(const RadialField& field, double distance, const PropagationOptions& options = {});

struct FocalScanOptions {
    std::size_t radial_samples = 192;   // intensity samples inside the knife-edge window
    std::size_t blade_positions = 41;
    double window_factor = 5.0;         // window radius in units of the estimated beam radius
    double encircled_extent = 20.0;     // encircled-power curve out to this many fitted waists
    std::size_t encircled_samples = 400;
    std::size_t cross_section_samples = 200;
    PropagationOptions propagation;
};

struct FocalScanResult {
    double wavelength = 0.0;
    std::vector<double> z_positions;
    std::vector<double> fitted_waists;          // virtual knife-edge 1/e^2 radii
    std::vector<double> waist_uncertainties;
    std::vector<double> on_axis_intensity;
    std::size_t best_index = 0;
    bool interior_minimum = false;
    // Best focus: encircled power as a fraction of field_power, and the normalised intensity.
    std::vector<double> encircled_radius;
    std::vector<double> encircled_power;
    std::vector<double> cross_section_radius;
    std::vector<double> cross_section_intensity;
    double input_power = 0.0;        // before the lens
    double field_power = 0.0;        // after the lens
    double propagating_power = 0.0;  // part of field_power that reaches the focal region

    double best_z() const { return z_positions.at(best_index); }
    double best_waist() const { return fitted_waists.at(best_index); }
};

/// Virtual knife-edge scan of an already-lensed field at n_steps positions in [z_min, z_max].
FocalScanResult focal_scan(const RadialField& field, double z_min, double z_max, std::size_t n_steps,
                           const FocalScanOptions& options = {});

/// Applies the layout's stepped phase to `field`, then scans.
FocalScanResult focal_scan(const RadialField& field, const design::ZoneLayout& layout, double z_min,
                           double z_max, std::size_t n_steps, const FocalScanOptions& options = {});

/// Virtual knife-edge waist of the field at a single plane (one point of focal_scan).
struct KnifeEdgeEstimate {
    double w;
    double uncertainty;
};
KnifeEdgeEstimate virtual_knife_edge(const AngularSpectrum& spectrum, double z, double window_radius,
                                     const FocalScanOptions& options = {});

/// 2 pi int_0^radius |E(rho, z)|^2 rho drho
double encircled_power(const AngularSpectrum& spectrum, double z, double radius, std::size_t samples = 400);

/// Power within capture_radius_multiplier x the best fitted waist, over input_power. An
/// infinite multiplier returns the propagating fraction. Radii past the stored encircled
/// curve use its last value.
double efficiency_into_focus(const FocalScanResult& scan, double input_power, double capture_radius_multiplier = 3.0);

// "z_m,waist_m,waist_uncertainty_m"
void write_focal_scan_csv(std::ostream& os, const FocalScanResult& scan);
struct WaistCurve {
    std::vector<double> z;
    std::vector<double> waist;
    std::vector<double> uncertainty;
};
WaistCurve read_focal_scan_csv(std::istream& is);

// "r_m,normalized_intensity"
void write_cross_section_csv(std::ostream& os, const FocalScanResult& scan);
struct CrossSection {
    std::vector<double> r;
    std::vector<double> intensity;
};
CrossSection read_cross_section_csv(std::istream& is);

}  // namespace pfl::diffraction
