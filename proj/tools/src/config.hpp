#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "pfl/dipole_collection.hpp"
#include "pfl/pfl_design.hpp"
#include "pfl/units.hpp"

namespace pfl::cli {

// Flat key/value project configuration. Keys carry their unit in the name; values are stored
// here in SI. Every key is optional and defaults to the characterized f = 3 mm lens.
struct ProjectConfig {
    // lens
    double focal_length = 3.0 * units::mm;
    double clear_aperture = 5.0 * units::mm;
    double design_wavelength = 369.5 * units::nm;
    int phase_levels = 2;
    double substrate_index = design::default_substrate_index;

    // simulation
    double input_waist = 1.1 * units::mm;
    std::size_t grid_points = 0;  // 0: size from the outermost zone
    double grid_radius_factor = 1.2;
    double capture_radius_multiplier = 3.0;
    double scan_half_range = 3.0 * units::um;
    std::size_t scan_steps = 25;

    // ion
    double transition_wavelength = 369.5 * units::nm;
    double raman_shift = 12.6 * units::GHz;
    double magnetic_field = 67.0 * units::gauss;
    double zeeman_coefficient = 160.0 * units::MHz / (67.0 * units::gauss);

    // coupling
    double eta_diff = 0.30;
    double divergence = 348.0 * units::mrad;
    double m2 = 1.08;
    dipole::MConvention m_convention = dipole::MConvention::SqrtM2;
    dipole::EmissionChannel channel{};

    // spectral filtering; unset FSRs default to twice the Raman shift / Zeeman splitting
    double pi_etalon_finesse = 50.0;
    std::optional<double> pi_etalon_fsr;
    double sigma_etalon_finesse = 16.0;  // 0 disables the sigma etalon
    std::optional<double> sigma_etalon_fsr;
    double filter_na = 0.95;

    // array budget
    double electrode_distance = 100.0 * units::um;
    int segments_per_site = 7;
    double segment_length_factor = 0.5;
    double measured_site_fraction = 0.2;
    double focal_length_factor = 3.0;
    double quantum_efficiency = 0.2;
    double required_p_coll = 0.05;
    double array_na = 0.6;
    double array_eta_diff = 0.6;
    double microlens_na = 0.3;
    double baseline_p_coh = 0.0032;
    double networking_na = 0.8;
    double networking_m2 = 1.5;
    double networking_eta_diff = 0.5;

    design::LensDesign lens() const;
    // Throws DomainError for values outside their module's domain.
    void validate() const;
};

/// Parses a YAML mapping of scalars. Unknown keys, nested values and unconvertible scalars
/// raise SchemaError carrying the key and 1-based line.
ProjectConfig parse_config(const std::string& text);
ProjectConfig load_config(const std::string& path);

}  // namespace pfl::cli
