#include "pfl/serialization.hpp"

#include "pfl/errors.hpp"

using nlohmann::json;

namespace pfl::io {

json report(const std::string& kind, json payload)
{
    json out = {{"schema_version", schema_version}, {"kind", kind}};
    for (auto& [key, value] : payload.items()) {
        out[key] = std::move(value);
    }
    return out;
}

const json& check_report(const json& doc, const std::string& kind)
{
    if (!doc.is_object() || !doc.contains("schema_version") || doc.at("schema_version") != schema_version) {
        throw SchemaError("report lacks schema_version " + std::to_string(schema_version), "schema_version");
    }
    if (doc.value("kind", std::string{}) != kind) {
        throw SchemaError("expected a '" + kind + "' report", "kind");
    }
    return doc;
}

}  // namespace pfl::io

namespace pfl::design {

void to_json(json& j, const ZoneLayout& layout)
{
    const auto& d = layout.design;
    j = {{"focal_length_m", d.focal_length()},
         {"clear_aperture_m", d.clear_aperture_diameter()},
         {"design_wavelength_m", d.design_wavelength()},
         {"phase_levels", d.phase_levels()},
         {"substrate_index", d.substrate_index()},
         {"zone_count", layout.zone_count()},
         {"etch_depth_m", layout.etch_depth},
         {"first_ring_radius_m", layout.ring_radii.empty() ? 0.0 : layout.ring_radii.front()},
         {"outermost_zone_width_m", layout.zone_count() >= 2 ? layout.outermost_zone_width() : 0.0}};
}

}  // namespace pfl::design

namespace pfl::beam {

void to_json(json& j, const WaistPoint& p)
{
    j = {{"z_m", p.z}, {"w_m", p.w}, {"w_uncertainty_m", p.w_uncertainty}, {"direction", to_string(p.direction)}};
}

void from_json(const json& j, WaistPoint& p)
{
    p.z = j.at("z_m").get<double>();
    p.w = j.at("w_m").get<double>();
    p.w_uncertainty = j.at("w_uncertainty_m").get<double>();
    p.direction = direction_from_string(j.at("direction").get<std::string>());
}

void to_json(json& j, const KnifeEdgeFit& f)
{
    j = {{"total_power", f.total_power},
         {"center_m", f.center},
         {"w_m", f.w},
         {"background", f.background},
         {"uncertainties", f.uncertainties},
         {"rms_residual", f.rms_residual},
         {"iterations", f.iterations},
         {"residuals", f.residuals}};
}

void to_json(json& j, const CausticFit& f)
{
    j = {{"w0_m", f.w0},
         {"m2", f.m2},
         {"z0_m", f.z0},
         {"direction_offset_m", f.direction_offset},
         {"offset_fixed", f.offset_fixed},
         {"uncertainties", {{"w0_m", f.uncertainty(0)},
                            {"m2", f.uncertainty(1)},
                            {"z0_m", f.uncertainty(2)},
                            {"direction_offset_m", f.uncertainty(3)}}},
         {"covariance", f.covariance},
         {"covariance_order", {"w0_m", "m2", "z0_m", "direction_offset_m"}},
         {"wavelength_m", f.wavelength},
         {"iterations", f.iterations},
         {"residuals_m", f.residuals},
         {"warnings", f.warnings}};
}

void from_json(const json& j, CausticFit& f)
{
    f.w0 = j.at("w0_m").get<double>();
    f.m2 = j.at("m2").get<double>();
    f.z0 = j.at("z0_m").get<double>();
    f.direction_offset = j.at("direction_offset_m").get<double>();
    f.offset_fixed = j.at("offset_fixed").get<bool>();
    f.covariance = j.at("covariance").get<std::array<double, 16>>();
    f.wavelength = j.at("wavelength_m").get<double>();
    f.iterations = j.at("iterations").get<int>();
    f.residuals = j.at("residuals_m").get<std::vector<double>>();
    f.warnings = j.at("warnings").get<std::vector<std::string>>();
}

}  // namespace pfl::beam

namespace pfl::diffraction {

void to_json(json& j, const FocalScanResult& s)
{
    j = {{"wavelength_m", s.wavelength},
         {"best_z_m", s.best_z()},
         {"best_waist_m", s.best_waist()},
         {"best_waist_uncertainty_m", s.waist_uncertainties.at(s.best_index)},
         {"interior_minimum", s.interior_minimum},
         {"input_power", s.input_power},
         {"field_power", s.field_power},
         {"propagating_power", s.propagating_power},
         {"z_m", s.z_positions},
         {"waist_m", s.fitted_waists}};
}

}  // namespace pfl::diffraction

namespace pfl::dipole {

void to_json(json& j, const EmissionChannel& c)
{
    j = {{"polarization", to_string(c.polarization)}, {"orientation", to_string(c.orientation)}};
}

void from_json(const json& j, EmissionChannel& c)
{
    c.polarization = polarization_from_string(j.at("polarization").get<std::string>());
    c.orientation = orientation_from_string(j.at("orientation").get<std::string>());
}

void to_json(json& j, const CouplingBudget& b)
{
    j = {{"p_coll", b.p_coll},
         {"p_coh", b.p_coh},
         {"eta_diff", b.eta_diff},
         {"effective_divergence_rad", b.effective_divergence},
         {"channel", b.channel}};
}

void from_json(const json& j, CouplingBudget& b)
{
    b.p_coll = j.at("p_coll").get<double>();
    b.p_coh = j.at("p_coh").get<double>();
    b.eta_diff = j.at("eta_diff").get<double>();
    b.effective_divergence = j.at("effective_divergence_rad").get<double>();
    b.channel = j.at("channel").get<EmissionChannel>();
}

}  // namespace pfl::dipole

namespace pfl::filtering {

void to_json(json& j, const SchemeErrorBudget& b)
{
    j = {{"pi_fraction", b.pi_fraction},
         {"pi_leakage", b.pi_leakage},
         {"polarization_error", b.polarization_error},
         {"combined_infidelity", b.combined_infidelity}};
}

void from_json(const json& j, SchemeErrorBudget& b)
{
    b.pi_fraction = j.at("pi_fraction").get<double>();
    b.pi_leakage = j.at("pi_leakage").get<double>();
    b.polarization_error = j.at("polarization_error").get<double>();
    b.combined_infidelity = j.at("combined_infidelity").get<double>();
}

}  // namespace pfl::filtering

namespace pfl::budget {

void to_json(json& j, const FaultToleranceResult& r)
{
    j = {{"p_coll", r.p_coll},
         {"detected_fraction", r.detected_fraction},
         {"required_p_coll", r.required_p_coll},
         {"pass", r.pass}};
}

void from_json(const json& j, FaultToleranceResult& r)
{
    r.p_coll = j.at("p_coll").get<double>();
    r.detected_fraction = j.at("detected_fraction").get<double>();
    r.required_p_coll = j.at("required_p_coll").get<double>();
    r.pass = j.at("pass").get<bool>();
}

}  // namespace pfl::budget
