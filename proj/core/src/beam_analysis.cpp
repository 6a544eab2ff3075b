#include "pfl/beam_analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>
#include <utility>

#include "pfl/csv.hpp"
#include "pfl/errors.hpp"
#include "pfl/least_squares.hpp"
#include "pfl/units.hpp"

namespace pfl::beam {
namespace {

constexpr double sqrt2 = 1.4142135623730951;
constexpr double sqrt_pi = 1.7724538509055159;
// Blade travel between the 10% and 90% transmission points, in units of w.
constexpr double ten_ninety_width = 1.2815515655446004;

double sign(Direction d)
{
    return d == Direction::In ? 1.0 : -1.0;
}

// Position where the power curve first crosses `level`, by linear interpolation.
std::optional<double> crossing(const std::vector<KnifeEdgeSample>& s, double level)
{
    for (std::size_t i = 1; i < s.size(); ++i) {
        const double a = s[i - 1].power - level;
        const double b = s[i].power - level;
        if (a == 0.0) {
            return s[i - 1].blade_position;
        }
        if ((a < 0.0) != (b < 0.0)) {
            const double t = a / (a - b);
            return s[i - 1].blade_position + t * (s[i].blade_position - s[i - 1].blade_position);
        }
    }
    return std::nullopt;
}

}  // namespace

std::string to_string(Direction d)
{
    return d == Direction::In ? "in" : "out";
}

Direction direction_from_string(const std::string& s)
{
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "in") {
        return Direction::In;
    }
    if (lower == "out") {
        return Direction::Out;
    }
    throw SchemaError("direction must be 'in' or 'out', got '" + s + "'", "direction");
}

KnifeEdgeScan::KnifeEdgeScan(double z, Direction direction, std::vector<KnifeEdgeSample> samples)
    : z_(z), direction_(direction), samples_(std::move(samples))
{
    if (!std::isfinite(z_)) {
        throw DomainError("knife-edge scan position must be finite");
    }
    if (samples_.size() < 8) {
        throw DomainError("knife-edge scan needs at least 8 samples, got " + std::to_string(samples_.size()));
    }
    const bool increasing = samples_[1].blade_position > samples_[0].blade_position;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const auto& s = samples_[i];
        if (!std::isfinite(s.blade_position) || !std::isfinite(s.power)) {
            throw DomainError("knife-edge samples must be finite");
        }
        if (s.power < 0.0) {
            throw DomainError("knife-edge powers must be non-negative");
        }
        if (i > 0) {
            const double step = s.blade_position - samples_[i - 1].blade_position;
            if (increasing ? !(step > 0.0) : !(step < 0.0)) {
                throw DomainError("blade positions must be strictly monotone");
            }
        }
    }
}

double knife_edge_model(double x, double total_power, double center, double w, Direction direction,
                        double background)
{
    if (!(w > 0.0)) {
        throw DomainError("beam radius must be positive");
    }
    const double u = sqrt2 * (x - center) / w;
    return background + 0.5 * total_power * std::erfc(sign(direction) * u);
}

std::array<double, 4> knife_edge_gradient(double x, double total_power, double center, double w,
                                          Direction direction)
{
    const double s = sign(direction);
    const double u = sqrt2 * (x - center) / w;
    const double g = total_power * s * std::exp(-u * u) / (sqrt_pi * w);
    return {0.5 * std::erfc(s * u), sqrt2 * g, u * g, 1.0};
}

KnifeEdgeFit fit_knife_edge(const KnifeEdgeScan& scan)
{
    auto samples = scan.samples();
    const bool reversed = samples.front().blade_position > samples.back().blade_position;
    if (reversed) {
        std::reverse(samples.begin(), samples.end());
    }
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end(),
                                              [](const auto& a, const auto& b) { return a.power < b.power; });
    const double p_min = lo->power;
    const double p_max = hi->power;
    if (p_max == p_min) {
        throw RankDeficiencyError("knife-edge scan has constant power", 0.0);
    }
    if ((p_max - p_min) < 0.5 * p_max) {
        throw DomainError("knife-edge scan spans less than 50% of the total power");
    }

    const double span = samples.back().blade_position - samples.front().blade_position;
    const auto mid = crossing(samples, p_min + 0.5 * (p_max - p_min));
    const auto c10 = crossing(samples, p_min + 0.1 * (p_max - p_min));
    const auto c90 = crossing(samples, p_min + 0.9 * (p_max - p_min));
    double w_init = span / 4.0;
    if (c10 && c90 && *c10 != *c90) {
        w_init = std::abs(*c90 - *c10) / ten_ninety_width;
    }
    const double center_init = mid.value_or(samples.front().blade_position + 0.5 * span);

    const Direction dir = scan.direction();
    const std::size_t m = samples.size();
    auto residual = [&](std::span<const double> p, std::span<double> r, std::span<double> jac) {
        for (std::size_t i = 0; i < m; ++i) {
            const double x = samples[i].blade_position;
            const double u = sqrt2 * (x - p[1]) / p[2];
            r[i] = p[3] + 0.5 * p[0] * std::erfc(sign(dir) * u) - samples[i].power;
            const auto g = knife_edge_gradient(x, p[0], p[1], p[2], dir);
            std::copy(g.begin(), g.end(), jac.begin() + static_cast<std::ptrdiff_t>(4 * i));
        }
    };
    fit::LeastSquaresOptions options;
    options.feasible = [](std::span<const double> p) { return p[2] > 0.0; };
    const auto result =
        fit::levenberg_marquardt(residual, m, {p_max - p_min, center_init, w_init, p_min}, options);

    KnifeEdgeFit out;
    out.total_power = result.parameters[0];
    out.center = result.parameters[1];
    out.w = result.parameters[2];
    out.background = result.parameters[3];
    out.iterations = result.iterations;
    const double dof = static_cast<double>(m - 4);
    const double chi2_red = dof > 0 ? 2.0 * result.cost / dof : 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        out.uncertainties[i] = std::sqrt(std::max(0.0, result.covariance_at(i, i) * chi2_red));
    }
    // Residuals in the caller's sample order.
    out.residuals.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        out.residuals[reversed ? m - 1 - i : i] = -result.residuals[i];
    }
    out.rms_residual = std::sqrt(2.0 * result.cost / static_cast<double>(m));
    return out;
}

WaistPoint fit_scan(const KnifeEdgeScan& scan)
{
    const auto f = fit_knife_edge(scan);
    return {scan.z(), f.w, f.uncertainties[2], scan.direction()};
}

double CausticFit::uncertainty(std::size_t i) const
{
    return std::sqrt(std::max(0.0, covariance[i * 4 + i]));
}

double caustic_model(const CausticParameters& p, double wavelength, double z, Direction direction)
{
    const double dz = z - p.z0 - (direction == Direction::In ? p.offset : 0.0);
    const double theta = p.m2 * wavelength / (units::pi * p.w0);
    return p.w0 * p.w0 + theta * theta * dz * dz;
}

std::array<double, 4> caustic_gradient(const CausticParameters& p, double wavelength, double z,
                                       Direction direction)
{
    const bool in = direction == Direction::In;
    const double dz = z - p.z0 - (in ? p.offset : 0.0);
    const double a = wavelength / units::pi;
    const double t2 = p.m2 * p.m2 * a * a / (p.w0 * p.w0);
    const double d_z0 = -2.0 * t2 * dz;
    return {2.0 * p.w0 - 2.0 * t2 * dz * dz / p.w0, 2.0 * p.m2 * a * a * dz * dz / (p.w0 * p.w0), d_z0,
            in ? d_z0 : 0.0};
}

CausticFit fit_caustic(const std::vector<WaistPoint>& points, double wavelength)
{
    if (!(wavelength > 0.0)) {
        throw DomainError("wavelength must be positive");
    }
    if (points.size() < 5) {
        throw DomainError("caustic fit needs at least 5 waist points, got " + std::to_string(points.size()));
    }
    bool has_in = false;
    bool has_out = false;
    bool all_sigma = true;
    for (const auto& p : points) {
        if (!(p.w > 0.0) || !std::isfinite(p.z) || !(p.w_uncertainty >= 0.0)) {
            throw DomainError("waist points need finite z, w > 0 and non-negative uncertainty");
        }
        (p.direction == Direction::In ? has_in : has_out) = true;
        all_sigma = all_sigma && p.w_uncertainty > 0.0;
    }
    const bool fit_offset = has_in && has_out;
    const std::size_t m = points.size();
    std::vector<double> sigma(m);
    for (std::size_t i = 0; i < m; ++i) {
        sigma[i] = all_sigma ? points[i].w_uncertainty : points[i].w;
    }

    // Internal parameters (A, B, z0, offset) with w^2 = A + B (z - z0 - offset*[IN])^2.
    const auto min_it =
        std::min_element(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.w < b.w; });
    const double a_lambda = wavelength / units::pi;
    const double a_init = min_it->w * min_it->w;
    std::vector<double> init{a_init, a_lambda * a_lambda / a_init, min_it->z, 0.0};

    auto residual = [&](std::span<const double> p, std::span<double> r, std::span<double> jac) {
        for (std::size_t i = 0; i < m; ++i) {
            const bool in = points[i].direction == Direction::In;
            const double dz = points[i].z - p[2] - (in ? p[3] : 0.0);
            const double weight = 1.0 / (2.0 * points[i].w * sigma[i]);
            r[i] = (p[0] + p[1] * dz * dz - points[i].w * points[i].w) * weight;
            const double dz0 = -2.0 * p[1] * dz * weight;
            jac[4 * i + 0] = weight;
            jac[4 * i + 1] = dz * dz * weight;
            jac[4 * i + 2] = dz0;
            jac[4 * i + 3] = in ? dz0 : 0.0;
        }
    };
    fit::LeastSquaresOptions options;
    options.fixed = {false, false, false, !fit_offset};
    const auto result = fit::levenberg_marquardt(residual, m, init, options);

    const double a = result.parameters[0];
    const double b = result.parameters[1];
    if (!(a > 0.0)) {
        throw FitError("fitted w0^2 is not positive", result.residual_norm());
    }
    if (!(b > 0.0)) {
        throw FitError("fitted far-field divergence is not positive", result.residual_norm());
    }

    CausticFit fit;
    fit.wavelength = wavelength;
    fit.w0 = std::sqrt(a);
    fit.m2 = std::sqrt(a * b) / a_lambda;
    fit.z0 = result.parameters[2];
    fit.direction_offset = result.parameters[3];
    fit.offset_fixed = !fit_offset;
    fit.iterations = result.iterations;

    const double dof = static_cast<double>(m) - (fit_offset ? 4.0 : 3.0);
    const double scale = all_sigma ? 1.0 : (dof > 0 ? 2.0 * result.cost / dof : 0.0);
    // d(w0, m2, z0, offset) / d(A, B, z0, offset)
    const double t[4][4] = {{1.0 / (2.0 * fit.w0), 0, 0, 0},
                            {fit.m2 / (2.0 * a), fit.m2 / (2.0 * b), 0, 0},
                            {0, 0, 1, 0},
                            {0, 0, 0, 1}};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < 4; ++k) {
                for (std::size_t l = 0; l < 4; ++l) {
                    s += t[i][k] * result.covariance_at(k, l) * t[j][l];
                }
            }
            fit.covariance[i * 4 + j] = s * scale;
        }
    }
    fit.residuals.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        fit.residuals[i] = caustic_waist(fit, points[i].z, points[i].direction) - points[i].w;
    }

    const auto [zmin, zmax] =
        std::minmax_element(points.begin(), points.end(), [](const auto& x, const auto& y) { return x.z < y.z; });
    const double z_r = units::pi * a / wavelength;
    if (zmax->z - zmin->z < 2.0 * z_r) {
        fit.warnings.push_back("z span covers less than two Rayleigh ranges; M^2 is poorly conditioned");
    }
    if (fit.m2 < 1.0) {
        fit.warnings.push_back("fitted M^2 is below 1");
    }
    return fit;
}

double caustic_waist(const CausticFit& fit, double z, Direction direction)
{
    return std::sqrt(caustic_model({fit.w0, fit.m2, fit.z0, fit.direction_offset}, fit.wavelength, z, direction));
}

DerivedBeamParameters derived_beam_parameters(double w0, double m2, double wavelength)
{
    if (!(w0 > 0.0) || !(m2 > 0.0) || !(wavelength > 0.0)) {
        throw DomainError("derived beam parameters need positive w0, M^2 and wavelength");
    }
    const double theta = m2 * wavelength / (units::pi * w0);
    return {theta, units::pi * w0 * w0 / wavelength, theta <= 0.5};
}

DerivedBeamParameters derived_beam_parameters(const CausticFit& fit, double wavelength)
{
    return derived_beam_parameters(fit.w0, fit.m2, wavelength);
}

std::vector<KnifeEdgeScan> read_knife_edge_csv(std::istream& is)
{
    const auto rows = csv::read_rows(is);
    if (rows.empty()) {
        throw SchemaError("knife-edge CSV is empty");
    }
    std::vector<KnifeEdgeScan> scans;
    const auto& first = rows.front();
    if (first.size() == 2) {
        // One or more "z_m,direction" blocks.
        std::size_t i = 0;
        while (i < rows.size()) {
            csv::require_header(rows[i], {"z_m", "direction"});
            if (i + 2 >= rows.size()) {
                throw SchemaError("line " + std::to_string(rows[i].line) + ": incomplete scan block", {},
                                  rows[i].line);
            }
            const auto& meta = rows[i + 1];
            if (meta.size() != 2) {
                throw SchemaError("line " + std::to_string(meta.line) + ": expected z_m,direction values", {},
                                  meta.line);
            }
            const double z = csv::to_double(meta[0], "z_m", meta.line);
            const Direction dir = direction_from_string(meta[1]);
            csv::require_header(rows[i + 2], {"blade_position_m", "power"});
            std::vector<KnifeEdgeSample> samples;
            i += 3;
            for (; i < rows.size() && !(rows[i].size() == 2 && rows[i][0] == "z_m"); ++i) {
                const auto& r = rows[i];
                if (r.size() != 2) {
                    throw SchemaError("line " + std::to_string(r.line) + ": expected 2 fields", {}, r.line);
                }
                samples.push_back({csv::to_double(r[0], "blade_position_m", r.line),
                                   csv::to_double(r[1], "power", r.line)});
            }
            scans.emplace_back(z, dir, std::move(samples));
        }
        return scans;
    }

    csv::require_header(first, {"z_m", "blade_position_m", "power", "direction"});
    std::vector<std::pair<std::pair<double, Direction>, std::vector<KnifeEdgeSample>>> groups;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != 4) {
            throw SchemaError("line " + std::to_string(r.line) + ": expected 4 fields", {}, r.line);
        }
        const double z = csv::to_double(r[0], "z_m", r.line);
        const Direction dir = direction_from_string(r[3]);
        const KnifeEdgeSample s{csv::to_double(r[1], "blade_position_m", r.line),
                                csv::to_double(r[2], "power", r.line)};
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const auto& g) { return g.first.first == z && g.first.second == dir; });
        if (it == groups.end()) {
            groups.push_back({{z, dir}, {s}});
        } else {
            it->second.push_back(s);
        }
    }
    for (auto& g : groups) {
        scans.emplace_back(g.first.first, g.first.second, std::move(g.second));
    }
    return scans;
}

void write_knife_edge_csv(std::ostream& os, const std::vector<KnifeEdgeScan>& scans)
{
    os << "z_m,blade_position_m,power,direction\n";
    for (const auto& scan : scans) {
        for (const auto& s : scan.samples()) {
            os << csv::format(scan.z()) << ',' << csv::format(s.blade_position) << ',' << csv::format(s.power)
               << ',' << to_string(scan.direction()) << '\n';
        }
    }
}

void write_single_scan_csv(std::ostream& os, const KnifeEdgeScan& scan)
{
    os << "z_m,direction\n" << csv::format(scan.z()) << ',' << to_string(scan.direction()) << '\n';
    os << "blade_position_m,power\n";
    for (const auto& s : scan.samples()) {
        os << csv::format(s.blade_position) << ',' << csv::format(s.power) << '\n';
    }
}

void write_waist_csv(std::ostream& os, const std::vector<WaistPoint>& points)
{
    os << "z_m,w_m,w_uncertainty_m,direction\n";
    for (const auto& p : points) {
        os << csv::format(p.z) << ',' << csv::format(p.w) << ',' << csv::format(p.w_uncertainty) << ','
           << to_string(p.direction) << '\n';
    }
}

std::vector<WaistPoint> read_waist_csv(std::istream& is)
{
    const auto table = csv::read(is);
    csv::require_header(table, {"z_m", "w_m", "w_uncertainty_m", "direction"});
    std::vector<WaistPoint> out;
    for (const auto& r : table.rows) {
        WaistPoint p{csv::to_double(r[0], "z_m", r.line), csv::to_double(r[1], "w_m", r.line),
                     csv::to_double(r[2], "w_uncertainty_m", r.line), direction_from_string(r[3])};
        if (!(p.w > 0.0)) {
            throw SchemaError("line " + std::to_string(r.line) + ": w_m must be positive", "w_m", r.line);
        }
        out.push_back(p);
    }
    return out;
}

}  // namespace pfl::beam
