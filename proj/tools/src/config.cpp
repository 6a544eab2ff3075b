#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "pfl/errors.hpp"
#include "pfl/optics_geometry.hpp"

namespace pfl::cli {
namespace {

using Setter = std::function<void(ProjectConfig&, const YAML::Node&, const std::string&)>;

int line_of(const YAML::Node& n)
{
    return n.Mark().line + 1;
}

template <class T>
T as(const YAML::Node& n, const std::string& key)
{
    try {
        return n.as<T>();
    } catch (const YAML::BadConversion&) {
        throw SchemaError("line " + std::to_string(line_of(n)) + ": '" + key + "' has an invalid value '" +
                              n.Scalar() + "'",
                          key, line_of(n));
    }
}

Setter length(double ProjectConfig::*field, double unit)
{
    return [=](ProjectConfig& c, const YAML::Node& n, const std::string& key) { c.*field = as<double>(n, key) * unit; };
}

template <class T>
Setter plain(T ProjectConfig::*field)
{
    return [=](ProjectConfig& c, const YAML::Node& n, const std::string& key) { c.*field = as<T>(n, key); };
}

Setter optional_scaled(std::optional<double> ProjectConfig::*field, double unit)
{
    return [=](ProjectConfig& c, const YAML::Node& n, const std::string& key) { c.*field = as<double>(n, key) * unit; };
}

const std::map<std::string, Setter>& setters()
{
    using namespace units;
    static const std::map<std::string, Setter> table = {
        {"focal_length_mm", length(&ProjectConfig::focal_length, mm)},
        {"clear_aperture_mm", length(&ProjectConfig::clear_aperture, mm)},
        {"design_wavelength_nm", length(&ProjectConfig::design_wavelength, nm)},
        {"phase_levels", plain(&ProjectConfig::phase_levels)},
        {"substrate_index", plain(&ProjectConfig::substrate_index)},
        {"input_waist_mm", length(&ProjectConfig::input_waist, mm)},
        {"grid_points", plain(&ProjectConfig::grid_points)},
        {"grid_radius_factor", plain(&ProjectConfig::grid_radius_factor)},
        {"capture_radius_multiplier", plain(&ProjectConfig::capture_radius_multiplier)},
        {"scan_half_range_um", length(&ProjectConfig::scan_half_range, um)},
        {"scan_steps", plain(&ProjectConfig::scan_steps)},
        {"transition_wavelength_nm", length(&ProjectConfig::transition_wavelength, nm)},
        {"raman_shift_ghz", length(&ProjectConfig::raman_shift, GHz)},
        {"magnetic_field_gauss", length(&ProjectConfig::magnetic_field, gauss)},
        {"zeeman_coefficient_mhz_per_gauss", length(&ProjectConfig::zeeman_coefficient, MHz / gauss)},
        {"eta_diff", plain(&ProjectConfig::eta_diff)},
        {"divergence_mrad", length(&ProjectConfig::divergence, mrad)},
        {"m2", plain(&ProjectConfig::m2)},
        {"m_convention",
         [](ProjectConfig& c, const YAML::Node& n, const std::string&) {
             c.m_convention = dipole::m_convention_from_string(as<std::string>(n, "m_convention"));
         }},
        {"polarization",
         [](ProjectConfig& c, const YAML::Node& n, const std::string&) {
             c.channel.polarization = dipole::polarization_from_string(as<std::string>(n, "polarization"));
         }},
        {"orientation",
         [](ProjectConfig& c, const YAML::Node& n, const std::string&) {
             c.channel.orientation = dipole::orientation_from_string(as<std::string>(n, "orientation"));
         }},
        {"pi_etalon_finesse", plain(&ProjectConfig::pi_etalon_finesse)},
        {"pi_etalon_fsr_ghz", optional_scaled(&ProjectConfig::pi_etalon_fsr, GHz)},
        {"sigma_etalon_finesse", plain(&ProjectConfig::sigma_etalon_finesse)},
        {"sigma_etalon_fsr_mhz", optional_scaled(&ProjectConfig::sigma_etalon_fsr, MHz)},
        {"filter_na", plain(&ProjectConfig::filter_na)},
        {"electrode_distance_um", length(&ProjectConfig::electrode_distance, um)},
        {"segments_per_site", plain(&ProjectConfig::segments_per_site)},
        {"segment_length_factor", plain(&ProjectConfig::segment_length_factor)},
        {"measured_site_fraction", plain(&ProjectConfig::measured_site_fraction)},
        {"focal_length_factor", plain(&ProjectConfig::focal_length_factor)},
        {"quantum_efficiency", plain(&ProjectConfig::quantum_efficiency)},
        {"required_p_coll", plain(&ProjectConfig::required_p_coll)},
        {"array_na", plain(&ProjectConfig::array_na)},
        {"array_eta_diff", plain(&ProjectConfig::array_eta_diff)},
        {"microlens_na", plain(&ProjectConfig::microlens_na)},
        {"baseline_p_coh", plain(&ProjectConfig::baseline_p_coh)},
        {"networking_na", plain(&ProjectConfig::networking_na)},
        {"networking_m2", plain(&ProjectConfig::networking_m2)},
        {"networking_eta_diff", plain(&ProjectConfig::networking_eta_diff)},
    };
    return table;
}

void require(bool ok, const std::string& message)
{
    if (!ok) {
        throw DomainError(message);
    }
}

}  // namespace

design::LensDesign ProjectConfig::lens() const
{
    return design::LensDesign(focal_length, clear_aperture, design_wavelength, phase_levels, substrate_index);
}

void ProjectConfig::validate() const
{
    (void)lens();
    require(input_waist > 0.0, "input_waist_mm must be positive");
    require(grid_radius_factor >= 1.0, "grid_radius_factor must be at least 1");
    require(capture_radius_multiplier > 0.0, "capture_radius_multiplier must be positive");
    require(scan_half_range > 0.0, "scan_half_range_um must be positive");
    require(scan_steps >= 5, "scan_steps must be at least 5");
    require(transition_wavelength > 0.0, "transition_wavelength_nm must be positive");
    require(raman_shift >= 0.0 && magnetic_field >= 0.0 && zeeman_coefficient >= 0.0,
            "ion frequencies and field must be non-negative");
    require(eta_diff >= 0.0 && eta_diff <= 1.0, "eta_diff must lie in [0, 1]");
    (void)dipole::BeamQuality(divergence, m2);
    require(pi_etalon_finesse > 0.0, "pi_etalon_finesse must be positive");
    require(sigma_etalon_finesse >= 0.0, "sigma_etalon_finesse must be non-negative");
    require(!pi_etalon_fsr || *pi_etalon_fsr > 0.0, "pi_etalon_fsr_ghz must be positive");
    require(!sigma_etalon_fsr || *sigma_etalon_fsr > 0.0, "sigma_etalon_fsr_mhz must be positive");
    (void)geometry::NumericalAperture(filter_na);
    (void)geometry::NumericalAperture(array_na);
    (void)geometry::NumericalAperture(microlens_na);
    (void)geometry::NumericalAperture(networking_na);
    require(electrode_distance > 0.0 && segments_per_site > 0 && segment_length_factor > 0.0 &&
                focal_length_factor > 0.0,
            "trap array dimensions must be positive");
    require(measured_site_fraction > 0.0 && measured_site_fraction <= 1.0,
            "measured_site_fraction must lie in (0, 1]");
    require(quantum_efficiency > 0.0 && quantum_efficiency <= 1.0, "quantum_efficiency must lie in (0, 1]");
    require(required_p_coll >= 0.0 && required_p_coll <= 1.0, "required_p_coll must lie in [0, 1]");
    require(array_eta_diff >= 0.0 && array_eta_diff <= 1.0, "array_eta_diff must lie in [0, 1]");
    require(baseline_p_coh > 0.0 && baseline_p_coh <= 1.0, "baseline_p_coh must lie in (0, 1]");
    require(networking_m2 >= 1.0, "networking_m2 must be at least 1");
    require(networking_eta_diff > 0.0 && networking_eta_diff <= 1.0, "networking_eta_diff must lie in (0, 1]");
}

ProjectConfig parse_config(const std::string& text)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw SchemaError("config is not valid YAML: " + e.msg, {}, e.mark.line + 1);
    }
    ProjectConfig config;
    if (root.IsNull()) {
        return config;
    }
    if (!root.IsMap()) {
        throw SchemaError("config must be a mapping of key: value pairs", {}, line_of(root));
    }
    std::set<std::string> seen;
    for (const auto& kv : root) {
        const auto key = kv.first.as<std::string>();
        const int line = line_of(kv.first);
        const auto it = setters().find(key);
        if (it == setters().end()) {
            throw SchemaError("line " + std::to_string(line) + ": unknown key '" + key + "'", key, line);
        }
        if (!seen.insert(key).second) {
            throw SchemaError("line " + std::to_string(line) + ": duplicate key '" + key + "'", key, line);
        }
        if (!kv.second.IsScalar()) {
            throw SchemaError("line " + std::to_string(line) + ": '" + key + "' must be a scalar", key, line);
        }
        try {
            it->second(config, kv.second, key);
        } catch (const SchemaError& e) {
            if (e.line() != 0) {
                throw;
            }
            throw SchemaError("line " + std::to_string(line) + ": " + e.what(), key, line);
        }
    }
    return config;
}

ProjectConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw SchemaError("cannot open config file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace pfl::cli
