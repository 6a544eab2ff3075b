#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>

#include "pfl/beam_analysis.hpp"
#include "pfl/budget.hpp"
#include "pfl/csv.hpp"
#include "pfl/dipole_collection.hpp"
#include "pfl/errors.hpp"
#include "pfl/scalar_diffraction.hpp"
#include "pfl/serialization.hpp"
#include "pfl/spectral_filtering.hpp"

using nlohmann::json;

namespace pfl::cli {
namespace {

const dipole::EmissionChannel polar_sigma{dipole::Polarization::SigmaPlus, dipole::Orientation::Polar};

json coupling_by_convention(const dipole::EmissionChannel& channel, const dipole::BeamQuality& beam, double eta)
{
    json out = json::object();
    for (auto c : {dipole::MConvention::SqrtM2, dipole::MConvention::M2AsM, dipole::MConvention::Unity}) {
        out[dipole::to_string(c)] = dipole::coherent_coupling(channel, beam, eta, c);
    }
    return out;
}

filtering::FrequencyLayout frequency_layout(const ProjectConfig& c)
{
    filtering::FrequencyLayout layout;
    layout.raman_shift = c.raman_shift;
    layout.zeeman_coefficient = c.zeeman_coefficient;
    layout.zeeman_splitting = filtering::zeeman_splitting(c.magnetic_field, c.zeeman_coefficient);
    layout.validate();
    return layout;
}

}  // namespace

json cmd_design(const ProjectConfig& config, std::ostream* zone_csv)
{
    config.validate();
    const auto lens = config.lens();
    const auto layout = design::zone_layout(lens);
    const auto na = geometry::na_from_geometry(lens.geometry());
    json out = layout;
    out["numerical_aperture"] = na.value();
    out["f_number"] = lens.geometry().f_number();
    out["solid_angle_fraction"] = geometry::solid_angle_fraction(na);
    out["first_order_efficiency"] = design::multilevel_efficiency(lens.phase_levels());
    out["first_order_efficiency_with_surface_losses"] =
        design::multilevel_efficiency(lens.phase_levels(), true, design::fresnel_plate_transmission(lens.substrate_index()));
    const auto chromatic =
        design::ChromaticSpec::from_frequency_offset(config.raman_shift, config.transition_wavelength);
    out["chromatic_focal_shift_m"] = design::chromatic_focal_shift(lens, chromatic);
    out["cone_rayleigh_range_m"] = design::cone_rayleigh_range(na, config.transition_wavelength);
    out["warnings"] = json::array();
    if (layout.zone_count() == 0) {
        out["warnings"].push_back("clear aperture is smaller than the first ring radius; the layout is empty");
    }
    if (zone_csv != nullptr) {
        design::write_zone_csv(*zone_csv, layout);
    }
    return io::report("design", std::move(out));
}

LensModel lens_model_from_string(const std::string& s)
{
    if (s == "pfl") {
        return LensModel::Pfl;
    }
    if (s == "ideal") {
        return LensModel::Ideal;
    }
    if (s == "paraxial") {
        return LensModel::Paraxial;
    }
    throw SchemaError("unknown lens model '" + s + "' (pfl, ideal, paraxial)", "lens");
}

json cmd_simulate(const ProjectConfig& config, const SimulateOptions& options)
{
    config.validate();
    const auto lens = config.lens();
    const auto layout = design::zone_layout(lens);
    auto grid = diffraction::recommended_grid(layout, config.grid_radius_factor);
    json warnings = json::array();
    if (config.grid_points != 0) {
        grid.points = config.grid_points;
    } else if (grid.points != diffraction::default_grid_points) {
        warnings.push_back("grid sized to " + std::to_string(grid.points) +
                           " points to resolve the outermost zone");
    }
    const auto hankel = diffraction::make_grid(grid);
    const auto input = diffraction::make_gaussian_field(hankel, config.input_waist, lens.design_wavelength());

    diffraction::RadialField lensed = input;
    switch (options.lens) {
    case LensModel::Pfl:
        lensed = diffraction::apply_binary_pfl(input, layout);
        break;
    case LensModel::Ideal:
        lensed = diffraction::apply_ideal_lens(input, lens.focal_length(), lens.aperture_radius());
        break;
    case LensModel::Paraxial:
        lensed = diffraction::apply_ideal_lens(input, lens.focal_length(), lens.aperture_radius(),
                                               diffraction::LensPhase::Paraxial);
        break;
    }
    const double z_min = lens.focal_length() + options.z_min.value_or(-config.scan_half_range);
    const double z_max = lens.focal_length() + options.z_max.value_or(config.scan_half_range);
    const std::size_t steps = options.steps.value_or(config.scan_steps);
    auto scan = diffraction::focal_scan(lensed, z_min, z_max, steps);
    scan.input_power = input.power();

    if (!scan.interior_minimum) {
        warnings.push_back("scan range does not bracket the focus; no interior waist minimum");
    }
    json out;
    out["lens_model"] = options.lens == LensModel::Pfl ? "pfl" : options.lens == LensModel::Ideal ? "ideal" : "paraxial";
    out["grid_points"] = grid.points;
    out["grid_radius_m"] = grid.radius;
    out["scan"] = scan;
    out["best_focus_offset_m"] = scan.best_z() - lens.focal_length();
    const double eff = diffraction::efficiency_into_focus(scan, scan.input_power, config.capture_radius_multiplier);
    out["capture_radius_multiplier"] = config.capture_radius_multiplier;
    out["efficiency_into_focus"] = eff;
    out["efficiency_into_focus_with_surface_losses"] = eff * design::fresnel_plate_transmission(lens.substrate_index());
    out["propagating_fraction"] = scan.propagating_power / scan.input_power;

    std::vector<beam::WaistPoint> points;
    for (std::size_t i = 0; i < scan.z_positions.size(); ++i) {
        points.push_back({scan.z_positions[i], scan.fitted_waists[i], 0.0, beam::Direction::Out});
    }
    try {
        auto fit = beam::fit_caustic(points, lens.design_wavelength());
        fit.z0 -= lens.focal_length();
        out["caustic"] = fit;
        out["caustic"]["z0_relative_to_focal_length"] = true;
    } catch (const FitError& e) {
        warnings.push_back(std::string("caustic fit failed: ") + e.what());
    }
    out["warnings"] = warnings;

    if (options.scan_csv != nullptr) {
        diffraction::write_focal_scan_csv(*options.scan_csv, scan);
    }
    if (options.cross_section_csv != nullptr) {
        diffraction::write_cross_section_csv(*options.cross_section_csv, scan);
    }
    return io::report("simulate", std::move(out));
}

json cmd_fit(std::istream& knife_edge_csv, const FitOptions& options)
{
    const auto scans = beam::read_knife_edge_csv(knife_edge_csv);
    if (scans.size() == 1) {
        const auto fit = beam::fit_knife_edge(scans.front());
        const beam::WaistPoint point{scans.front().z(), fit.w, fit.uncertainties[2], scans.front().direction()};
        return io::report("waist_point", {{"waist", point}, {"knife_edge", fit}});
    }

    json per_scan = json::array();
    json failures = json::array();
    std::vector<beam::WaistPoint> points;
    for (std::size_t i = 0; i < scans.size(); ++i) {
        try {
            const auto fit = beam::fit_knife_edge(scans[i]);
            points.push_back({scans[i].z(), fit.w, fit.uncertainties[2], scans[i].direction()});
            per_scan.push_back({{"waist", points.back()}, {"rms_residual", fit.rms_residual}});
        } catch (const FitError& e) {
            failures.push_back({{"scan", i},
                                {"z_m", scans[i].z()},
                                {"direction", beam::to_string(scans[i].direction())},
                                {"error", e.what()},
                                {"final_residual", e.final_residual()}});
        }
    }
    const auto caustic = beam::fit_caustic(points, options.wavelength);
    const auto derived = beam::derived_beam_parameters(caustic, options.wavelength);

    if (options.waist_csv != nullptr) {
        beam::write_waist_csv(*options.waist_csv, points);
    }
    if (options.curve_csv != nullptr) {
        const auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                                  [](const auto& a, const auto& b) { return a.z < b.z; });
        *options.curve_csv << "z_m,w_in_m,w_out_m\n";
        const int n = 200;
        for (int i = 0; i <= n; ++i) {
            const double z = lo->z + (hi->z - lo->z) * i / n;
            *options.curve_csv << csv::format(z) << ','
                               << csv::format(beam::caustic_waist(caustic, z, beam::Direction::In)) << ','
                               << csv::format(beam::caustic_waist(caustic, z, beam::Direction::Out)) << '\n';
        }
    }
    return io::report("caustic_fit", {{"caustic", caustic},
                                      {"divergence_half_angle_rad", derived.divergence_half_angle},
                                      {"rayleigh_range_m", derived.rayleigh_range},
                                      {"paraxial_valid", derived.paraxial_valid},
                                      {"scans", per_scan},
                                      {"failed_scans", failures}});
}

json cmd_coupling(const ProjectConfig& config, const CouplingOptions& options)
{
    config.validate();
    const auto lens_na = geometry::na_from_geometry(config.lens().geometry());
    const geometry::NumericalAperture na(options.na.value_or(lens_na.value()));
    const dipole::BeamQuality beam(options.divergence.value_or(config.divergence), options.m2.value_or(config.m2));
    const double eta = options.eta_diff.value_or(config.eta_diff);
    const auto channel = options.channel.value_or(config.channel);
    const auto convention = options.convention.value_or(config.m_convention);

    const auto budget = dipole::coupling_budget(channel, na, beam, eta, convention);
    json out = budget;
    out["numerical_aperture"] = na.value();
    out["collection_half_angle_rad"] = geometry::cone_from_na(na).radians();
    out["collection_fraction"] = dipole::collection_fraction(channel, geometry::cone_from_na(na));
    out["divergence_half_angle_rad"] = beam.divergence_half_angle();
    out["m2"] = beam.m2();
    out["m_convention"] = dipole::to_string(convention);
    out["p_coh_by_convention"] = coupling_by_convention(channel, beam, eta);
    out["polarization_fidelity"] = dipole::polarization_fidelity_collected(na);
    out["polarization_fidelity_series"] = dipole::fidelity_series(na.value());
    return io::report("coupling", std::move(out));
}

json cmd_filter(const ProjectConfig& config, std::optional<double> na_override)
{
    config.validate();
    const auto layout = frequency_layout(config);
    const filtering::EtalonSpec pi_etalon(config.pi_etalon_finesse,
                                          config.pi_etalon_fsr.value_or(2.0 * layout.raman_shift));
    std::optional<filtering::EtalonSpec> sigma_etalon;
    if (config.sigma_etalon_finesse > 0.0) {
        sigma_etalon.emplace(config.sigma_etalon_finesse,
                             config.sigma_etalon_fsr.value_or(2.0 * layout.zeeman_splitting));
    }
    const geometry::NumericalAperture na(na_override.value_or(config.filter_na));
    json out;
    out["numerical_aperture"] = na.value();
    out["raman_shift_hz"] = layout.raman_shift;
    out["zeeman_splitting_hz"] = layout.zeeman_splitting;
    out["pi_etalon"] = {{"finesse", pi_etalon.finesse()},
                        {"free_spectral_range_hz", pi_etalon.free_spectral_range()},
                        {"transmission", filtering::etalon_transmission(pi_etalon, layout.raman_shift)},
                        {"suppression", filtering::suppression_factor(pi_etalon, layout.raman_shift)}};
    if (sigma_etalon) {
        out["sigma_etalon"] = {
            {"finesse", sigma_etalon->finesse()},
            {"free_spectral_range_hz", sigma_etalon->free_spectral_range()},
            {"transmission", filtering::etalon_transmission(*sigma_etalon, layout.zeeman_splitting)},
            {"suppression", filtering::suppression_factor(*sigma_etalon, layout.zeeman_splitting)}};
    } else {
        out["sigma_etalon"] = nullptr;
    }
    out["error_budget"] = filtering::scheme_error_budget(na, pi_etalon, sigma_etalon, layout);
    return io::report("filter", std::move(out));
}

json cmd_budget(const ProjectConfig& config, const std::string& profile)
{
    config.validate();
    budget::TrapArraySpec array;
    array.electrode_distance = config.electrode_distance;
    array.segments_per_site = config.segments_per_site;
    array.segment_length_factor = config.segment_length_factor;
    array.measured_site_fraction = config.measured_site_fraction;
    array.focal_length_factor = config.focal_length_factor;
    const budget::DetectorSpec detector{config.quantum_efficiency};

    double check_na = config.array_na;
    double check_eta = config.array_eta_diff;
    if (profile == "microlens") {
        check_na = config.microlens_na;
        check_eta = 1.0;
    } else if (profile != "default" && profile != "networking") {
        throw SchemaError("unknown budget profile '" + profile + "' (default, microlens, networking)", "profile");
    }

    const double spacing = budget::detection_site_spacing(array);
    json out;
    out["profile"] = profile;
    out["detection_spacing_m"] = spacing;
    out["detection_spacing_d"] = spacing / array.electrode_distance;
    out["achievable_na"] = budget::achievable_array_na(array).value();
    out["fault_tolerance"] =
        budget::fault_tolerance_check(geometry::NumericalAperture(check_na), check_eta, detector, config.required_p_coll);
    out["fault_tolerance"]["numerical_aperture"] = check_na;
    out["fault_tolerance"]["eta_diff"] = check_eta;

    const geometry::NumericalAperture net_na(config.networking_na);
    const dipole::BeamQuality net_beam(geometry::cone_from_na(net_na).radians(), config.networking_m2);
    const double p_coh = dipole::coherent_coupling(polar_sigma, net_beam, config.networking_eta_diff, config.m_convention);
    out["networking"] = {{"numerical_aperture", config.networking_na},
                         {"m2", config.networking_m2},
                         {"eta_diff", config.networking_eta_diff},
                         {"m_convention", dipole::to_string(config.m_convention)},
                         {"p_coh", p_coh},
                         {"p_coh_by_convention", coupling_by_convention(polar_sigma, net_beam, config.networking_eta_diff)},
                         {"baseline_p_coh", config.baseline_p_coh},
                         {"rate_gain", budget::entanglement_rate_gain(p_coh, config.baseline_p_coh)}};

    const auto layout = frequency_layout(config);
    const filtering::EtalonSpec pi_etalon(config.pi_etalon_finesse,
                                          config.pi_etalon_fsr.value_or(2.0 * layout.raman_shift));
    std::optional<filtering::EtalonSpec> sigma_etalon;
    if (config.sigma_etalon_finesse > 0.0) {
        sigma_etalon.emplace(config.sigma_etalon_finesse,
                             config.sigma_etalon_fsr.value_or(2.0 * layout.zeeman_splitting));
    }
    out["filter_error_budget"] =
        filtering::scheme_error_budget(geometry::NumericalAperture(config.filter_na), pi_etalon, sigma_etalon, layout);
    out["filter_error_budget"]["numerical_aperture"] = config.filter_na;
    return io::report("budget", std::move(out));
}

void cmd_curves(const std::string& kind, int steps, std::ostream& out)
{
    if (kind == "collection") {
        dipole::write_collection_curve(out, steps);
    } else if (kind == "fidelity") {
        dipole::write_fidelity_curve(out, steps);
    } else {
        throw SchemaError("unknown curve kind '" + kind + "' (collection, fidelity)", "kind");
    }
}

void cmd_synth(const SynthOptions& o, std::ostream& out)
{
    if (!(o.w0 > 0.0) || !(o.m2 >= 1.0) || !(o.wavelength > 0.0) || !(o.noise >= 0.0) || o.z_steps < 5 ||
        o.blade_positions < 8 || !(o.z_half_range > 0.0) || !(o.power > 0.0)) {
        throw DomainError("invalid synthesis parameters");
    }
    std::mt19937_64 rng(o.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const beam::CausticParameters truth{o.w0, o.m2, o.z0, o.direction_offset};
    std::vector<beam::KnifeEdgeScan> scans;
    for (std::size_t i = 0; i < o.z_steps; ++i) {
        const double z = o.z0 - o.z_half_range + 2.0 * o.z_half_range * static_cast<double>(i) /
                                                     static_cast<double>(o.z_steps - 1);
        for (auto dir : {beam::Direction::In, beam::Direction::Out}) {
            const double w = std::sqrt(beam::caustic_model(truth, o.wavelength, z, dir));
            std::vector<beam::KnifeEdgeSample> samples;
            for (std::size_t j = 0; j < o.blade_positions; ++j) {
                const double x =
                    -2.5 * w + 5.0 * w * static_cast<double>(j) / static_cast<double>(o.blade_positions - 1);
                const double p = beam::knife_edge_model(x, o.power, 0.0, w, dir);
                samples.push_back({x, std::max(0.0, p * (1.0 + o.noise * gauss(rng)))});
            }
            if (dir == beam::Direction::Out) {
                std::reverse(samples.begin(), samples.end());
            }
            scans.emplace_back(z, dir, std::move(samples));
        }
    }
    beam::write_knife_edge_csv(out, scans);
}

}  // namespace pfl::cli
