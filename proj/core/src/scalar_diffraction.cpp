#include "pfl/scalar_diffraction.hpp"

#include <algorithm>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <istream>
#include <ostream>

#include "pfl/beam_analysis.hpp"
#include "pfl/csv.hpp"
#include "pfl/errors.hpp"
#include "pfl/optics_geometry.hpp"
#include "pfl/units.hpp"

namespace pfl::diffraction {
namespace {

using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
using Legendre = boost::math::quadrature::gauss<double, 5>;

std::size_t round_up(std::size_t n, std::size_t multiple)
{
    return (n + multiple - 1) / multiple * multiple;
}

std::vector<double> intensity_samples(const HankelTransform& grid, const std::vector<std::complex<double>>& weighted,
                                      double extent, std::size_t samples)
{
    std::vector<double> out(samples);
    const double h = extent / static_cast<double>(samples - 1);
    for (std::size_t i = 0; i < samples; ++i) {
        out[i] = std::norm(grid.synthesize(weighted, h * static_cast<double>(i)));
    }
    return out;
}

Spline radial_spline(const std::vector<double>& intensity, double extent)
{
    const double h = extent / static_cast<double>(intensity.size() - 1);
    // Radial symmetry: zero slope on axis.
    return Spline(intensity.begin(), intensity.end(), 0.0, h, 0.0);
}

// Cumulative 2 pi int_0^rho_i I rho drho on the spline's uniform nodes.
std::vector<double> cumulative_power(const Spline& s, double extent, std::size_t samples)
{
    std::vector<double> out(samples, 0.0);
    const double h = extent / static_cast<double>(samples - 1);
    for (std::size_t i = 1; i < samples; ++i) {
        const double a = h * static_cast<double>(i - 1);
        const double piece =
            Legendre::integrate([&](double r) { return 2.0 * units::pi * r * std::max(0.0, s(r)); }, a, a + h);
        out[i] = out[i - 1] + piece;
    }
    return out;
}

// Fixed-panel Gauss-Legendre; the integrands are cubic splines, so adaptive refinement only
// chases knot discontinuities.
template <class F>
double composite(const F& f, double a, double b, std::size_t panels)
{
    const double h = (b - a) / static_cast<double>(panels);
    double sum = 0.0;
    for (std::size_t i = 0; i < panels; ++i) {
        const double lo = a + h * static_cast<double>(i);
        sum += Legendre::integrate(f, lo, lo + h);
    }
    return sum;
}

double interpolate(const std::vector<double>& x, const std::vector<double>& y, double at)
{
    if (at <= x.front()) {
        return y.front();
    }
    if (at >= x.back()) {
        return y.back();
    }
    const auto it = std::upper_bound(x.begin(), x.end(), at);
    const auto i = static_cast<std::size_t>(it - x.begin());
    const double t = (at - x[i - 1]) / (x[i] - x[i - 1]);
    return y[i - 1] + t * (y[i] - y[i - 1]);
}

}  // namespace

GridSpec recommended_grid(const design::ZoneLayout& layout, double radius_factor, double samples_per_zone)
{
    if (!(radius_factor >= 1.0) || !(samples_per_zone > 0.0)) {
        throw DomainError("grid radius factor must be >= 1 and samples per zone positive");
    }
    const double radius = radius_factor * layout.design.aperture_radius();
    std::size_t points = default_grid_points;
    if (layout.zone_count() > 0) {
        const double zone = layout.zone_count() >= 2 ? layout.outermost_zone_width() : layout.ring_radii.front();
        const auto needed = static_cast<std::size_t>(std::ceil(samples_per_zone * radius / zone));
        points = std::max(points, round_up(needed, 1024));
    }
    return {points, radius};
}

std::shared_ptr<const HankelTransform> make_grid(const GridSpec& spec)
{
    return std::make_shared<const HankelTransform>(spec.points, spec.radius);
}

RadialField::RadialField(std::shared_ptr<const HankelTransform> grid, std::vector<std::complex<double>> amplitude,
                         double wavelength)
    : grid_(std::move(grid)), amplitude_(std::move(amplitude)), wavelength_(wavelength)
{
    if (!grid_) {
        throw DomainError("radial field needs a grid");
    }
    if (amplitude_.size() != grid_->size()) {
        throw DomainError("amplitude size does not match the grid");
    }
    if (!(wavelength_ > 0.0) || !std::isfinite(wavelength_)) {
        throw DomainError("wavelength must be positive");
    }
    for (const auto& a : amplitude_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw DomainError("field amplitude must be finite");
        }
    }
}

double RadialField::wavenumber() const noexcept
{
    return 2.0 * units::pi / wavelength_;
}

double RadialField::power() const
{
    return grid_->space_power(amplitude_);
}

RadialField RadialField::with_amplitude(std::vector<std::complex<double>> amplitude) const
{
    return RadialField(grid_, std::move(amplitude), wavelength_);
}

RadialField make_gaussian_field(std::shared_ptr<const HankelTransform> grid, double waist, double wavelength,
                                double peak_amplitude)
{
    if (!(waist > 0.0)) {
        throw DomainError("Gaussian waist must be positive");
    }
    std::vector<std::complex<double>> a(grid->size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double r = grid->radii()[i] / waist;
        a[i] = peak_amplitude * std::exp(-r * r);
    }
    return RadialField(std::move(grid), std::move(a), wavelength);
}

RadialField make_plane_wave(std::shared_ptr<const HankelTransform> grid, double wavelength)
{
    std::vector<std::complex<double>> a(grid->size(), 1.0);
    return RadialField(std::move(grid), std::move(a), wavelength);
}

RadialField apply_phase_profile(const RadialField& field, const design::PhaseProfile& profile)
{
    if (field.grid()->radius() < profile.aperture_radius) {
        throw DomainError("grid does not cover the lens aperture");
    }
    auto a = field.amplitude();
    const auto& r = field.radii();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (r[i] > profile.aperture_radius) {
            a[i] = 0.0;
        } else {
            a[i] *= std::polar(1.0, profile.phase_at(r[i]));
        }
    }
    return field.with_amplitude(std::move(a));
}

RadialField apply_binary_pfl(const RadialField& field, const design::ZoneLayout& layout)
{
    const auto& d = layout.design;
    const auto& grid = *field.grid();
    if (grid.radius() < d.aperture_radius()) {
        throw DomainError("grid does not cover the lens aperture");
    }
    const std::size_t zones = layout.zone_count();
    if (zones > 0) {
        const double outer = layout.ring_radii.back();
        const double inner = zones >= 2 ? layout.ring_radii[zones - 2] : 0.0;
        const auto& r = grid.radii();
        const auto samples = std::upper_bound(r.begin(), r.end(), outer) - std::lower_bound(r.begin(), r.end(), inner);
        if (samples < 4) {
            throw ResolutionError("grid puts " + std::to_string(samples) +
                                  " samples across the outermost zone (need at least 4); use at least " +
                                  std::to_string(recommended_grid(layout).points) + " points");
        }
        const double na = geometry::na_from_geometry(d.geometry()).value();
        if (na * field.wavenumber() > grid.max_wavenumber()) {
            throw ResolutionError("grid band limit is below the lens NA");
        }
    }
    auto profile = layout.phase_profile();
    // Etched steps scale with the design wavelength (dispersion ignored).
    const double scale = d.design_wavelength() / field.wavelength();
    if (scale == 1.0) {
        return apply_phase_profile(field, profile);
    }
    auto a = field.amplitude();
    const auto& r = field.radii();
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = r[i] > profile.aperture_radius ? 0.0 : a[i] * std::polar(1.0, scale * profile.phase_at(r[i]));
    }
    return field.with_amplitude(std::move(a));
}

RadialField apply_ideal_lens(const RadialField& field, double focal_length, double aperture_radius, LensPhase phase)
{
    if (!(focal_length > 0.0) || !(aperture_radius > 0.0)) {
        throw DomainError("lens focal length and aperture must be positive");
    }
    if (field.grid()->radius() < aperture_radius) {
        throw DomainError("grid does not cover the lens aperture");
    }
    const double k = field.wavenumber();
    auto a = field.amplitude();
    const auto& r = field.radii();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (r[i] > aperture_radius) {
            a[i] = 0.0;
            continue;
        }
        const double opd = phase == LensPhase::Hyperbolic
                               ? r[i] * r[i] / (std::hypot(focal_length, r[i]) + focal_length)
                               : r[i] * r[i] / (2.0 * focal_length);
        a[i] *= std::polar(1.0, -k * opd);
    }
    return field.with_amplitude(std::move(a));
}

AngularSpectrum::AngularSpectrum(const RadialField& field, double min_distance, const PropagationOptions& options)
    : grid_(field.grid()), wavelength_(field.wavelength()), min_distance_(min_distance), field_power_(field.power())
{
    if (!(min_distance >= 0.0)) {
        throw DomainError("propagation distance must be non-negative");
    }
    const double k = field.wavenumber();
    if (options.required_na * k > grid_->max_wavenumber()) {
        throw ResolutionError("grid band limit " + std::to_string(grid_->max_wavenumber() / k) +
                              " (as NA) is below the requested NA " + std::to_string(options.required_na));
    }
    const auto& kappa = grid_->wavenumbers();
    propagating_rows_ = static_cast<std::size_t>(std::lower_bound(kappa.begin(), kappa.end(), k) - kappa.begin());
    std::size_t rows = kappa.size();
    if (min_distance > 0.0) {
        const double floor = std::log(options.attenuation_floor);
        rows = propagating_rows_;
        while (rows < kappa.size() && -min_distance * std::sqrt(kappa[rows] * kappa[rows] - k * k) >= floor) {
            ++rows;
        }
    }
    spectrum_ = grid_->forward(field.amplitude(), rows);

    const auto w = grid_->weighted(std::span(spectrum_).first(std::min(propagating_rows_, rows)));
    double num = 0.0;
    double den = 0.0;
    for (std::size_t m = 0; m < w.size(); ++m) {
        const double p = std::real(w[m] * std::conj(spectrum_[m]));
        num += p * kappa[m] * kappa[m];
        den += p;
    }
    rms_wavenumber_ = den > 0.0 ? std::sqrt(2.0 * num / den) : 0.0;
}

double AngularSpectrum::propagating_power() const
{
    return grid_->spectral_power(std::span(spectrum_).first(std::min(propagating_rows_, spectrum_.size())));
}

std::vector<std::complex<double>> AngularSpectrum::weighted_at(double z) const
{
    if (!(z >= min_distance_)) {
        throw DomainError("propagation distance is below the distance this spectrum was prepared for");
    }
    const double k = 2.0 * units::pi / wavelength_;
    const auto& kappa = grid_->wavenumbers();
    auto w = grid_->weighted(spectrum_);
    for (std::size_t m = 0; m < w.size(); ++m) {
        const double q = k * k - kappa[m] * kappa[m];
        w[m] *= q >= 0.0 ? std::polar(1.0, z * std::sqrt(q)) : std::complex<double>(std::exp(-z * std::sqrt(-q)));
    }
    return w;
}

std::complex<double> AngularSpectrum::field_at(double z, double rho) const
{
    return grid_->synthesize(weighted_at(z), rho);
}

std::vector<std::complex<double>> AngularSpectrum::field_at(double z, std::span<const double> rho) const
{
    const auto w = weighted_at(z);
    std::vector<std::complex<double>> out(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        out[i] = grid_->synthesize(w, rho[i]);
    }
    return out;
}

std::complex<double> AngularSpectrum::on_axis(double z) const
{
    const auto w = weighted_at(z);
    std::complex<double> sum = 0.0;
    for (const auto& v : w) {
        sum += v;
    }
    return sum;
}

RadialField AngularSpectrum::propagate(double z) const
{
    const auto w = weighted_at(z);
    std::vector<std::complex<double>> out(grid_->size());
    for (std::size_t n = 0; n < out.size(); ++n) {
        out[n] = grid_->synthesize(w, grid_->radii()[n]);
    }
    return RadialField(grid_, std::move(out), wavelength_);
}

RadialField propagate(const RadialField& field, double distance, const PropagationOptions& options)
{
    return AngularSpectrum(field, distance, options).propagate(distance);
}

KnifeEdgeEstimate virtual_knife_edge(const AngularSpectrum& spectrum, double z, double window_radius,
                                     const FocalScanOptions& options)
{
    if (!(window_radius > 0.0) || options.radial_samples < 8 || options.blade_positions < 8) {
        throw DomainError("knife-edge window must be positive with at least 8 radial samples and blade positions");
    }
    const auto weighted = spectrum.weighted_at(z);
    const auto intensity = intensity_samples(spectrum.grid(), weighted, window_radius, options.radial_samples);
    const Spline s = radial_spline(intensity, window_radius);
    auto I = [&](double r) { return std::max(0.0, s(std::min(r, window_radius))); };

    const double total = composite(
        [&](double r) { return 2.0 * units::pi * r * I(r); }, 0.0, window_radius, options.radial_samples);
    // Power on the far side of a blade at distance a from the axis; rho = a + u^2 removes the
    // square-root behaviour of acos(a / rho) at rho = a.
    auto beyond = [&](double a) {
        const double u_max = std::sqrt(window_radius - a);
        return composite(
            [&](double u) {
                const double rho = a + u * u;
                return I(rho) * 2.0 * rho * std::acos(std::min(1.0, a / rho)) * 2.0 * u;
            },
            0.0, u_max, options.radial_samples / 2);
    };

    const std::size_t nb = options.blade_positions;
    const double reach = 0.6 * window_radius;
    std::vector<beam::KnifeEdgeSample> samples(nb);
    for (std::size_t j = 0; j < nb; ++j) {
        const double x = -reach + 2.0 * reach * static_cast<double>(j) / static_cast<double>(nb - 1);
        const double p = beyond(std::abs(x));
        samples[j] = {x, x >= 0.0 ? p : total - p};
    }
    const auto fit = beam::fit_knife_edge(beam::KnifeEdgeScan(z, beam::Direction::In, std::move(samples)));
    return {fit.w, fit.uncertainties[2]};
}

double encircled_power(const AngularSpectrum& spectrum, double z, double radius, std::size_t samples)
{
    if (!(radius > 0.0) || samples < 8) {
        throw DomainError("encircled power needs a positive radius and at least 8 samples");
    }
    const auto weighted = spectrum.weighted_at(z);
    const auto intensity = intensity_samples(spectrum.grid(), weighted, radius, samples);
    return cumulative_power(radial_spline(intensity, radius), radius, samples).back();
}

FocalScanResult focal_scan(const RadialField& field, double z_min, double z_max, std::size_t n_steps,
                           const FocalScanOptions& options)
{
    if (!(z_min >= 0.0) || !(z_max > z_min) || n_steps < 2) {
        throw DomainError("focal scan needs 0 <= z_min < z_max and at least 2 steps");
    }
    const AngularSpectrum spectrum(field, z_min, options.propagation);
    const double k = 2.0 * units::pi / field.wavelength();
    const double kappa0 = spectrum.rms_wavenumber();
    if (!(kappa0 > 0.0)) {
        throw ResolutionError("field has no propagating spectrum");
    }

    FocalScanResult result;
    result.wavelength = field.wavelength();
    result.input_power = spectrum.field_power();
    result.field_power = spectrum.field_power();
    result.propagating_power = spectrum.propagating_power();

    // Locate the on-axis intensity peak on a finer axial grid to centre the window estimate.
    const std::size_t fine = std::max<std::size_t>(4 * n_steps, 201);
    double z_peak = z_min;
    double peak = -1.0;
    for (std::size_t i = 0; i < fine; ++i) {
        const double z = z_min + (z_max - z_min) * static_cast<double>(i) / static_cast<double>(fine - 1);
        const double v = std::norm(spectrum.on_axis(z));
        if (v > peak) {
            peak = v;
            z_peak = z;
        }
    }
    const double w_focus = 2.0 / kappa0;

    for (std::size_t i = 0; i < n_steps; ++i) {
        const double z = z_min + (z_max - z_min) * static_cast<double>(i) / static_cast<double>(n_steps - 1);
        const double spread = kappa0 * (z - z_peak) / k;
        const double window = options.window_factor * std::hypot(w_focus, spread);
        const auto est = virtual_knife_edge(spectrum, z, window, options);
        result.z_positions.push_back(z);
        result.fitted_waists.push_back(est.w);
        result.waist_uncertainties.push_back(est.uncertainty);
        result.on_axis_intensity.push_back(std::norm(spectrum.on_axis(z)));
    }
    const auto best = std::min_element(result.fitted_waists.begin(), result.fitted_waists.end());
    result.best_index = static_cast<std::size_t>(best - result.fitted_waists.begin());
    result.interior_minimum = result.best_index > 0 && result.best_index + 1 < n_steps;

    const double z_best = result.best_z();
    const double w_best = result.best_waist();
    const auto weighted = spectrum.weighted_at(z_best);

    const double extent = options.encircled_extent * w_best;
    const auto enc_i = intensity_samples(spectrum.grid(), weighted, extent, options.encircled_samples);
    auto cumulative = cumulative_power(radial_spline(enc_i, extent), extent, options.encircled_samples);
    for (std::size_t i = 0; i < cumulative.size(); ++i) {
        result.encircled_radius.push_back(extent * static_cast<double>(i) /
                                          static_cast<double>(options.encircled_samples - 1));
        result.encircled_power.push_back(cumulative[i] / result.field_power);
    }

    const double cs_extent = options.window_factor * w_best;
    auto cs = intensity_samples(spectrum.grid(), weighted, cs_extent, options.cross_section_samples);
    const double cs_peak = *std::max_element(cs.begin(), cs.end());
    for (std::size_t i = 0; i < cs.size(); ++i) {
        result.cross_section_radius.push_back(cs_extent * static_cast<double>(i) /
                                              static_cast<double>(cs.size() - 1));
        result.cross_section_intensity.push_back(cs_peak > 0.0 ? cs[i] / cs_peak : 0.0);
    }
    return result;
}

FocalScanResult focal_scan(const RadialField& field, const design::ZoneLayout& layout, double z_min, double z_max,
                           std::size_t n_steps, const FocalScanOptions& options)
{
    const double input = field.power();
    auto result = focal_scan(apply_binary_pfl(field, layout), z_min, z_max, n_steps, options);
    result.input_power = input;
    return result;
}

double efficiency_into_focus(const FocalScanResult& scan, double input_power, double capture_radius_multiplier)
{
    if (!(input_power > 0.0) || !(capture_radius_multiplier > 0.0)) {
        throw DomainError("efficiency needs positive input power and capture multiplier");
    }
    if (scan.fitted_waists.empty() || scan.encircled_radius.empty()) {
        throw DomainError("focal scan has no best focus");
    }
    if (std::isinf(capture_radius_multiplier)) {
        return scan.propagating_power / input_power;
    }
    const double r = capture_radius_multiplier * scan.best_waist();
    return interpolate(scan.encircled_radius, scan.encircled_power, r) * scan.field_power / input_power;
}

void write_focal_scan_csv(std::ostream& os, const FocalScanResult& scan)
{
    os << "z_m,waist_m,waist_uncertainty_m\n";
    for (std::size_t i = 0; i < scan.z_positions.size(); ++i) {
        os << csv::format(scan.z_positions[i]) << ',' << csv::format(scan.fitted_waists[i]) << ','
           << csv::format(scan.waist_uncertainties[i]) << '\n';
    }
}

WaistCurve read_focal_scan_csv(std::istream& is)
{
    const auto table = csv::read(is);
    csv::require_header(table, {"z_m", "waist_m", "waist_uncertainty_m"});
    WaistCurve c;
    for (const auto& r : table.rows) {
        c.z.push_back(csv::to_double(r[0], "z_m", r.line));
        c.waist.push_back(csv::to_double(r[1], "waist_m", r.line));
        c.uncertainty.push_back(csv::to_double(r[2], "waist_uncertainty_m", r.line));
    }
    return c;
}

void write_cross_section_csv(std::ostream& os, const FocalScanResult& scan)
{
    os << "r_m,normalized_intensity\n";
    for (std::size_t i = 0; i < scan.cross_section_radius.size(); ++i) {
        os << csv::format(scan.cross_section_radius[i]) << ',' << csv::format(scan.cross_section_intensity[i])
           << '\n';
    }
}

CrossSection read_cross_section_csv(std::istream& is)
{
    const auto table = csv::read(is);
    csv::require_header(table, {"r_m", "normalized_intensity"});
    CrossSection c;
    for (const auto& r : table.rows) {
        c.r.push_back(csv::to_double(r[0], "r_m", r.line));
        c.intensity.push_back(csv::to_double(r[1], "normalized_intensity", r.line));
    }
    return c;
}

}  // namespace pfl::diffraction
