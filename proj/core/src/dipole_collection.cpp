#include "pfl/dipole_collection.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "pfl/errors.hpp"
#include "pfl/units.hpp"

namespace pfl::dipole {
namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

constexpr double quadrature_tolerance = 1e-10;

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool is_sigma(Polarization p)
{
    return p != Polarization::Pi;
}

void check_eta(double eta)
{
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw DomainError("diffraction efficiency must lie in [0, 1]");
    }
}

double integrate(const auto& f, double a, double b, double tolerance, const char* what)
{
    double error = 0.0;
    const double value = Kronrod::integrate(f, a, b, 15, tolerance, &error);
    if (!(error <= std::max(quadrature_tolerance, tolerance * std::abs(value)) * 10.0)) {
        throw AccuracyError(std::string(what) + ": quadrature did not converge", value, error);
    }
    return value;
}

}  // namespace

std::string to_string(Polarization p)
{
    switch (p) {
    case Polarization::SigmaPlus:
        return "sigma_plus";
    case Polarization::SigmaMinus:
        return "sigma_minus";
    case Polarization::Pi:
        return "pi";
    }
    return "?";
}

std::string to_string(Orientation o)
{
    return o == Orientation::Polar ? "polar" : "equatorial";
}

std::string to_string(const EmissionChannel& c)
{
    return to_string(c.orientation) + "-" + to_string(c.polarization);
}

Polarization polarization_from_string(const std::string& s)
{
    const auto l = lower(s);
    if (l == "sigma_plus" || l == "sigma+" || l == "sigma") {
        return Polarization::SigmaPlus;
    }
    if (l == "sigma_minus" || l == "sigma-") {
        return Polarization::SigmaMinus;
    }
    if (l == "pi") {
        return Polarization::Pi;
    }
    throw SchemaError("unknown polarization '" + s + "' (sigma_plus, sigma_minus, pi)", "polarization");
}

Orientation orientation_from_string(const std::string& s)
{
    const auto l = lower(s);
    if (l == "polar") {
        return Orientation::Polar;
    }
    if (l == "equatorial") {
        return Orientation::Equatorial;
    }
    throw SchemaError("unknown orientation '" + s + "' (polar, equatorial)", "orientation");
}

BeamQuality::BeamQuality(double divergence_half_angle, double m2) : theta_(divergence_half_angle), m2_(m2)
{
    if (!(theta_ > 0.0 && theta_ <= 0.5 * units::pi)) {
        throw DomainError("divergence half-angle must lie in (0, pi/2]");
    }
    if (!(m2_ >= 1.0) || !std::isfinite(m2_)) {
        throw DomainError("M^2 must be at least 1");
    }
}

std::string to_string(MConvention c)
{
    switch (c) {
    case MConvention::SqrtM2:
        return "sqrt_m2";
    case MConvention::M2AsM:
        return "m2_as_m";
    case MConvention::Unity:
        return "unity";
    }
    return "?";
}

MConvention m_convention_from_string(const std::string& s)
{
    const auto l = lower(s);
    if (l == "sqrt_m2") {
        return MConvention::SqrtM2;
    }
    if (l == "m2_as_m") {
        return MConvention::M2AsM;
    }
    if (l == "unity") {
        return MConvention::Unity;
    }
    throw SchemaError("unknown M convention '" + s + "' (sqrt_m2, m2_as_m, unity)", "m_convention");
}

double dipole_intensity(const EmissionChannel& channel, double theta, double phi)
{
    // cos of the angle to the quantization axis
    const double c = channel.orientation == Orientation::Polar ? std::cos(theta) : std::sin(theta) * std::cos(phi);
    if (is_sigma(channel.polarization)) {
        return 3.0 / (16.0 * units::pi) * (1.0 + c * c);
    }
    return 3.0 / (8.0 * units::pi) * (1.0 - c * c);
}

double collection_fraction(const EmissionChannel& channel, geometry::ConeAngle theta_m)
{
    const double t = theta_m.radians();
    const double c = std::cos(t);
    const bool polar = channel.orientation == Orientation::Polar;
    if (polar == is_sigma(channel.polarization)) {
        // polar-sigma and equatorial-pi
        return 0.5 - 0.375 * c - 0.125 * c * c * c;
    }
    if (polar) {
        const double s = std::sin(0.5 * t);
        return (2.0 + c) * s * s * s * s;
    }
    return 0.5 - 0.5625 * c + 0.0625 * c * c * c;
}

double collection_fraction_series(const EmissionChannel& channel, geometry::NumericalAperture na)
{
    const double x2 = na.value() * na.value();
    const double x4 = x2 * x2;
    const double x6 = x4 * x2;
    const bool polar = channel.orientation == Orientation::Polar;
    if (polar == is_sigma(channel.polarization)) {
        return 3.0 / 8.0 * x2 + x6 / 64.0;
    }
    if (polar) {
        return 3.0 / 16.0 * x4 + x6 / 16.0;
    }
    return 3.0 / 16.0 * x2 + 3.0 / 32.0 * x4 + 5.0 / 128.0 * x6;
}

double collection_probability(const EmissionChannel& channel, geometry::ConeAngle theta_max, double eta_diff)
{
    check_eta(eta_diff);
    return collection_fraction(channel, theta_max) * eta_diff;
}

geometry::ConeAngle effective_divergence(const BeamQuality& beam, MConvention convention)
{
    double m = 1.0;
    switch (convention) {
    case MConvention::SqrtM2:
        m = std::sqrt(beam.m2());
        break;
    case MConvention::M2AsM:
        m = beam.m2();
        break;
    case MConvention::Unity:
        break;
    }
    return geometry::ConeAngle(beam.divergence_half_angle() / (m * std::sqrt(2.0)));
}

double coherent_coupling(const EmissionChannel& channel, const BeamQuality& beam, double eta_diff,
                         MConvention convention)
{
    check_eta(eta_diff);
    return collection_fraction(channel, effective_divergence(beam, convention)) * eta_diff;
}

CouplingBudget coupling_budget(const EmissionChannel& channel, geometry::NumericalAperture na, const BeamQuality& beam,
                               double eta_diff, MConvention convention)
{
    check_eta(eta_diff);
    const auto aperture = geometry::cone_from_na(na);
    const double theta_e = std::min(effective_divergence(beam, convention).radians(), aperture.radians());
    CouplingBudget b;
    b.channel = channel;
    b.eta_diff = eta_diff;
    b.effective_divergence = theta_e;
    b.p_coll = collection_fraction(channel, aperture) * eta_diff;
    b.p_coh = collection_fraction(channel, geometry::ConeAngle(theta_e)) * eta_diff;
    return b;
}

double gaussian_overlap_oracle(const EmissionChannel& channel, double gaussian_divergence)
{
    if (!(gaussian_divergence > 0.0 && gaussian_divergence < 0.5 * units::pi)) {
        throw DomainError("Gaussian divergence must lie in (0, pi/2)");
    }
    const double d2 = gaussian_divergence * gaussian_divergence;
    auto g = [&](double theta) { return std::exp(-2.0 * theta * theta / d2); };
    const double half_pi = 0.5 * units::pi;
    // Relative tolerance; the integrands are O(divergence^2) for narrow modes.
    const double tol = 1e-12;

    double amplitude = 0.0;
    if (channel.orientation == Orientation::Polar) {
        amplitude = 2.0 * units::pi *
                    integrate([&](double t) { return std::sqrt(dipole_intensity(channel, t, 0.0)) * g(t) * std::sin(t); },
                              0.0, half_pi, tol, "Gaussian overlap");
    } else {
        amplitude = integrate(
            [&](double t) {
                // Symmetric in phi about 0 and pi: integrate a quarter turn.
                const double inner = integrate(
                    [&](double phi) { return std::sqrt(dipole_intensity(channel, t, phi)); }, 0.0, half_pi, tol,
                    "Gaussian overlap (azimuth)");
                return 4.0 * inner * g(t) * std::sin(t);
            },
            0.0, half_pi, tol, "Gaussian overlap");
    }
    const double norm = 2.0 * units::pi *
                        integrate([&](double t) { return g(t) * g(t) * std::sin(t); }, 0.0, half_pi, tol,
                                  "Gaussian norm");
    return amplitude * amplitude / norm;
}

double polarization_fidelity_single(double theta)
{
    if (!(theta >= 0.0 && theta <= 0.5 * units::pi)) {
        throw DomainError("emission angle must lie in [0, pi/2]");
    }
    const double s = std::sin(theta);
    return std::sqrt(1.0 - 0.5 * s * s);
}

double polarization_fidelity_collected(geometry::NumericalAperture na)
{
    if (na.value() == 0.0) {
        return 1.0;
    }
    const double theta_m = std::asin(na.value());
    auto weight = [](double t) {
        const double c = std::cos(t);
        return (1.0 + c * c) * std::sin(t);
    };
    const double num = integrate([&](double t) { return polarization_fidelity_single(t) * weight(t); }, 0.0, theta_m,
                                 1e-13, "collected fidelity");
    const double den = integrate(weight, 0.0, theta_m, 1e-13, "collected fidelity");
    return num / den;
}

double fidelity_series(double na)
{
    if (!(na >= 0.0 && na <= 1.0)) {
        throw DomainError("NA must lie in [0, 1]");
    }
    const double x2 = na * na;
    return 1.0 - x2 / 8.0 - x2 * x2 / 96.0 - 7.0 * x2 * x2 * x2 / 1536.0;
}

namespace {

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

void write_collection_curve(std::ostream& os, int steps)
{
    if (steps < 1) {
        throw DomainError("curve needs at least one step");
    }
    const EmissionChannel ps{Polarization::SigmaPlus, Orientation::Polar};
    const EmissionChannel pp{Polarization::Pi, Orientation::Polar};
    const EmissionChannel es{Polarization::SigmaPlus, Orientation::Equatorial};
    const EmissionChannel ep{Polarization::Pi, Orientation::Equatorial};
    os << "na,polar_sigma,polar_pi,equatorial_sigma,equatorial_pi,polar_sigma_series,polar_pi_series,"
          "equatorial_sigma_series\n";
    for (int i = 0; i <= steps; ++i) {
        const geometry::NumericalAperture na(static_cast<double>(i) / steps);
        const auto cone = geometry::cone_from_na(na);
        os << fmt(na.value()) << ',' << fmt(collection_fraction(ps, cone)) << ',' << fmt(collection_fraction(pp, cone))
           << ',' << fmt(collection_fraction(es, cone)) << ',' << fmt(collection_fraction(ep, cone)) << ','
           << fmt(collection_fraction_series(ps, na)) << ',' << fmt(collection_fraction_series(pp, na)) << ','
           << fmt(collection_fraction_series(es, na)) << '\n';
    }
}

void write_fidelity_curve(std::ostream& os, int steps)
{
    if (steps < 1) {
        throw DomainError("curve needs at least one step");
    }
    os << "na,fidelity,fidelity_series\n";
    for (int i = 0; i <= steps; ++i) {
        const double na = static_cast<double>(i) / steps;
        os << fmt(na) << ',' << fmt(polarization_fidelity_collected(geometry::NumericalAperture(na))) << ','
           << fmt(fidelity_series(na)) << '\n';
    }
}

}  // namespace pfl::dipole
