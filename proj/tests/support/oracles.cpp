#include "oracles.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace oracle {
namespace {

constexpr double pi = std::numbers::pi;

// Composite Simpson on [a, b] with an even number of intervals.
template <class F>
double simpson(F&& f, double a, double b, std::size_t intervals)
{
    if (intervals % 2 != 0) {
        ++intervals;
    }
    const double h = (b - a) / static_cast<double>(intervals);
    double sum = f(a) + f(b);
    for (std::size_t i = 1; i < intervals; ++i) {
        sum += (i % 2 == 1 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
    }
    return sum * h / 3.0;
}

}  // namespace

double dipole_fraction(bool sigma, bool polar, double theta_m)
{
    // Trapezoid in phi is spectrally accurate for the periodic integrand.
    const std::size_t n_phi = 64;
    auto pattern = [&](double theta, double phi) {
        const double c = polar ? std::cos(theta) : std::sin(theta) * std::cos(phi);
        return sigma ? 3.0 / (16.0 * pi) * (1.0 + c * c) : 3.0 / (8.0 * pi) * (1.0 - c * c);
    };
    auto ring = [&](double theta) {
        double s = 0.0;
        for (std::size_t j = 0; j < n_phi; ++j) {
            s += pattern(theta, 2.0 * pi * static_cast<double>(j) / n_phi);
        }
        return s * 2.0 * pi / n_phi * std::sin(theta);
    };
    return simpson(ring, 0.0, theta_m, 4000);
}

double path_excess(double focal_length, double r)
{
    return r * r / (std::sqrt(focal_length * focal_length + r * r) + focal_length);
}

std::size_t zone_count(double focal_length, double diameter, double wavelength)
{
    // The marginal ray's path excess bounds p; count every integer path step below it.
    const double edge = path_excess(focal_length, 0.5 * diameter);
    std::size_t p = 0;
    while (static_cast<double>(p + 1) * wavelength <= edge) {
        ++p;
    }
    return p;
}

GaussianFocus paraxial_focus(double wavelength, double focal_length, double input_waist)
{
    const std::complex<double> q_in(0.0, pi * input_waist * input_waist / wavelength);
    // Thin lens: 1/q' = 1/q - 1/f
    const std::complex<double> q = 1.0 / (1.0 / q_in - 1.0 / focal_length);
    // q(z) = q + z is purely imaginary at the waist
    const double distance = -q.real();
    const double z_r = q.imag();
    return {std::sqrt(wavelength * z_r / pi), distance};
}

double gaussian_radius(double w0, double wavelength, double z)
{
    const double z_r = pi * w0 * w0 / wavelength;
    return w0 * std::sqrt(1.0 + (z / z_r) * (z / z_r));
}

double etalon_by_reflections(double finesse, double fsr, double detuning)
{
    const double s = (-pi + std::sqrt(pi * pi + 4.0 * finesse * finesse)) / (2.0 * finesse);
    const double r = s * s;
    const double delta = 2.0 * pi * detuning / fsr;
    std::complex<double> t = 0.0;
    std::complex<double> term = 1.0 - r;
    const std::complex<double> step = r * std::polar(1.0, delta);
    for (int k = 0; k < 100000 && std::abs(term) > 1e-18; ++k) {
        t += term;
        term *= step;
    }
    return std::norm(t);
}

double collected_fidelity(double na, std::size_t intervals)
{
    const double theta_m = std::asin(na);
    auto weight = [](double t) { return (1.0 + std::cos(t) * std::cos(t)) * std::sin(t); };
    auto fid = [](double t) { return std::sqrt(1.0 - 0.5 * std::sin(t) * std::sin(t)); };
    const double num = simpson([&](double t) { return fid(t) * weight(t); }, 0.0, theta_m, intervals);
    const double den = simpson(weight, 0.0, theta_m, intervals);
    return num / den;
}

double knife_edge(double x, double power, double center, double w, bool blade_in)
{
    const double u = std::sqrt(2.0) * (x - center) / w;
    return 0.5 * power * std::erfc(blade_in ? u : -u);
}

double caustic(double w0, double m2, double z0, double offset, double wavelength, double z, bool blade_in)
{
    const double theta = m2 * wavelength / (pi * w0);
    const double dz = z - z0 - (blade_in ? offset : 0.0);
    return std::sqrt(w0 * w0 + theta * theta * dz * dz);
}

std::vector<double> gradient(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x, double h)
{
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double step = h * std::max(std::abs(x[i]), 1e-12);
        auto hi = x;
        auto lo = x;
        hi[i] += step;
        lo[i] -= step;
        g[i] = (f(hi) - f(lo)) / (2.0 * step);
    }
    return g;
}

double debye_focal_intensity(double wavelength, double focal_length, double aperture_radius, double input_waist,
                             double rho)
{
    const double k = 2.0 * pi / wavelength;
    const double f2 = focal_length * focal_length;
    auto amplitude = [&](double r) {
        const double s = std::sqrt(f2 + r * r);
        const double kappa = k * r / s;
        const double dkappa = k * f2 / (s * s * s);
        return std::exp(-r * r / (input_waist * input_waist)) * std::sqrt(r * kappa * dkappa);
    };
    auto field = [&](double radius) {
        return simpson(
            [&](double r) {
                const double kappa = k * r / std::sqrt(f2 + r * r);
                return amplitude(r) * std::cyl_bessel_j(0.0, kappa * radius);
            },
            0.0, aperture_radius, 20000);
    };
    const double e0 = field(0.0);
    const double e = field(rho);
    return (e * e) / (e0 * e0);
}

double richardson(double h1, double v1, double h2, double v2, double order)
{
    return v2 + (v2 - v1) / (std::pow(h1 / h2, order) - 1.0);
}

std::vector<Sample> knife_edge_scan(double w, double center, double power, bool blade_in, std::size_t n,
                                    double relative_noise, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, relative_noise);
    std::vector<Sample> out;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = center - 2.5 * w + 5.0 * w * static_cast<double>(i) / static_cast<double>(n - 1);
        const double p = knife_edge(x, power, center, w, blade_in);
        out.push_back({x, relative_noise > 0.0 ? std::max(0.0, p * (1.0 + noise(rng))) : p});
    }
    return out;
}

}  // namespace oracle
