#include "pfl/pfl_design.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "pfl/csv.hpp"
#include "pfl/errors.hpp"
#include "pfl/units.hpp"

namespace pfl::design {

LensDesign::LensDesign(double focal_length, double clear_aperture_diameter, double design_wavelength,
                       int phase_levels, double substrate_index)
    : focal_length_(focal_length),
      diameter_(clear_aperture_diameter),
      wavelength_(design_wavelength),
      levels_(phase_levels),
      index_(substrate_index)
{
    if (!(focal_length > 0.0) || !(clear_aperture_diameter > 0.0) || !(design_wavelength > 0.0)) {
        throw DomainError("focal length, aperture and wavelength must be strictly positive");
    }
    if (phase_levels < 2) {
        throw DomainError("a phase Fresnel lens needs at least 2 phase levels");
    }
    if (!(substrate_index > 1.0)) {
        throw DomainError("substrate index must exceed 1");
    }
}

double PhaseProfile::phase_at(double r) const
{
    const auto k = static_cast<std::size_t>(
        std::upper_bound(boundaries.begin(), boundaries.end(), r) - boundaries.begin());
    return -2.0 * units::pi * static_cast<double>(k % static_cast<std::size_t>(levels)) / levels;
}

double PhaseProfile::outermost_annulus_width() const
{
    if (boundaries.empty()) {
        return 0.0;
    }
    if (boundaries.size() == 1) {
        return boundaries.front();
    }
    return boundaries.back() - boundaries[boundaries.size() - 2];
}

double ZoneLayout::outermost_zone_width() const
{
    if (ring_radii.empty()) {
        return 0.0;
    }
    if (ring_radii.size() == 1) {
        return ring_radii.front();
    }
    return ring_radii.back() - ring_radii[ring_radii.size() - 2];
}

PhaseProfile ZoneLayout::phase_profile() const
{
    PhaseProfile profile;
    profile.levels = design.phase_levels();
    profile.aperture_radius = design.aperture_radius();
    const double n = design.phase_levels();
    for (std::size_t j = 1;; ++j) {
        const double r = ring_radius(design, static_cast<double>(j) / n);
        if (r > profile.aperture_radius) {
            break;
        }
        profile.boundaries.push_back(r);
    }
    return profile;
}

double ring_radius(const LensDesign& d, double p)
{
    const double lambda = d.design_wavelength();
    return std::sqrt(2.0 * d.focal_length() * p * lambda + p * p * lambda * lambda);
}

std::size_t max_ring_index(const LensDesign& d)
{
    // Positive root of lambda^2 p^2 + 2 f lambda p - R^2 = 0, then fix up the floor
    // against the design equation itself so the aperture edge is decided exactly.
    const double f = d.focal_length();
    const double a = d.aperture_radius();
    const double root = a * a / (d.design_wavelength() * (std::hypot(f, a) + f));
    auto p = static_cast<std::size_t>(std::floor(root));
    while (ring_radius(d, static_cast<double>(p + 1)) <= a) {
        ++p;
    }
    while (p > 0 && ring_radius(d, static_cast<double>(p)) > a) {
        --p;
    }
    return p;
}

ZoneLayout zone_layout(const LensDesign& d)
{
    ZoneLayout layout{d, {}, step_etch_depth(d.design_wavelength(), d.substrate_index(), d.phase_levels())};
    const std::size_t pmax = max_ring_index(d);
    layout.ring_radii.reserve(pmax);
    for (std::size_t p = 1; p <= pmax; ++p) {
        layout.ring_radii.push_back(ring_radius(d, static_cast<double>(p)));
    }
    return layout;
}

double step_etch_depth(double wavelength, double substrate_index, int phase_levels)
{
    if (!(wavelength > 0.0) || !(substrate_index > 1.0) || phase_levels < 2) {
        throw DomainError("etch depth needs wavelength > 0, index > 1 and at least 2 levels");
    }
    return wavelength / (phase_levels * (substrate_index - 1.0));
}

double multilevel_efficiency(int phase_levels, bool include_fresnel_losses, double surface_transmission)
{
    if (phase_levels < 2) {
        throw DomainError("multilevel efficiency needs at least 2 levels");
    }
    if (!(surface_transmission > 0.0 && surface_transmission <= 1.0)) {
        throw DomainError("surface transmission must lie in (0, 1]");
    }
    const double x = units::pi / phase_levels;
    const double sinc = std::sin(x) / x;
    const double eta = sinc * sinc;
    return include_fresnel_losses ? eta * surface_transmission : eta;
}

double fresnel_plate_transmission(double substrate_index)
{
    if (!(substrate_index >= 1.0)) {
        throw DomainError("substrate index must be at least 1");
    }
    const double r = (substrate_index - 1.0) / (substrate_index + 1.0);
    const double reflectance = r * r;
    return (1.0 - reflectance) * (1.0 - reflectance);
}

ChromaticSpec::ChromaticSpec(double fractional_detuning) : detuning_(fractional_detuning)
{
    if (!(std::abs(fractional_detuning) < 1e-2)) {
        throw DomainError("chromatic model is limited to |dlambda/lambda| < 1e-2");
    }
}

ChromaticSpec ChromaticSpec::from_frequency_offset(double frequency_offset, double wavelength)
{
    // dlambda/lambda = dnu/nu for small offsets.
    return ChromaticSpec(frequency_offset * wavelength / units::speed_of_light);
}

double chromatic_focal_shift(const LensDesign& d, ChromaticSpec c)
{
    return d.focal_length() * c.fractional_detuning();
}

double cone_rayleigh_range(geometry::NumericalAperture na, double wavelength)
{
    if (na.value() == 0.0) {
        throw DomainError("Rayleigh range of a zero-NA cone is unbounded");
    }
    return 4.0 * wavelength / (units::pi * na.value() * na.value());
}

double gaussian_rayleigh_range(double waist, double wavelength)
{
    if (!(waist > 0.0) || !(wavelength > 0.0)) {
        throw DomainError("waist and wavelength must be strictly positive");
    }
    return units::pi * waist * waist / wavelength;
}

double max_focal_length_for_dof(geometry::NumericalAperture na, ChromaticSpec c, double wavelength)
{
    if (na.value() == 0.0) {
        throw DomainError("depth-of-focus bound needs NA > 0");
    }
    if (c.fractional_detuning() == 0.0) {
        throw DomainError("depth-of-focus bound needs a nonzero detuning");
    }
    return cone_rayleigh_range(na, wavelength) / std::abs(c.fractional_detuning());
}

void write_zone_csv(std::ostream& os, const ZoneLayout& layout)
{
    os << "p,r_p_m\n";
    char buf[64];
    for (std::size_t i = 0; i < layout.ring_radii.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i + 1, layout.ring_radii[i]);
        os << buf;
    }
}

std::vector<double> read_zone_csv(std::istream& is)
{
    const auto table = csv::read(is);
    csv::require_header(table, {"p", "r_p_m"});
    std::vector<double> radii;
    radii.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const long p = std::lround(csv::to_double(row[0], "p", row.line));
        const double r = csv::to_double(row[1], "r_p_m", row.line);
        if (p != static_cast<long>(i + 1)) {
            throw SchemaError("zone indices must run 1, 2, 3, ...", "p", row.line);
        }
        if (!radii.empty() && !(r > radii.back())) {
            throw SchemaError("zone radii must be strictly increasing", "r_p_m", row.line);
        }
        radii.push_back(r);
    }
    return radii;
}

}  // namespace pfl::design
