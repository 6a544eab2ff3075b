#include "pfl/optics_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pfl/errors.hpp"
#include "pfl/units.hpp"

namespace pfl::geometry {

NumericalAperture::NumericalAperture(double value) : value_(value)
{
    if (!(value >= 0.0 && value <= 1.0)) {
        throw DomainError("numerical aperture must lie in [0, 1], got " + std::to_string(value));
    }
}

ConeAngle::ConeAngle(double radians) : radians_(radians)
{
    if (!(radians >= 0.0 && radians <= units::pi)) {
        throw DomainError("cone half-angle must lie in [0, pi], got " + std::to_string(radians));
    }
}

LensGeometry::LensGeometry(double focal_length, double clear_aperture_diameter)
    : focal_length_(focal_length), diameter_(clear_aperture_diameter)
{
    if (!(focal_length > 0.0) || !std::isfinite(focal_length)) {
        throw DomainError("focal length must be strictly positive");
    }
    if (!(clear_aperture_diameter > 0.0) || !std::isfinite(clear_aperture_diameter)) {
        throw DomainError("clear aperture diameter must be strictly positive");
    }
}

NumericalAperture na_from_geometry(const LensGeometry& geometry)
{
    const double a = geometry.aperture_radius();
    return NumericalAperture(a / std::hypot(geometry.focal_length(), a));
}

NumericalAperture na_small_angle(double f_number)
{
    if (!(f_number > 0.0)) {
        throw DomainError("f-number must be strictly positive");
    }
    return NumericalAperture(std::min(1.0, 1.0 / (2.0 * f_number)));
}

double solid_angle_fraction(NumericalAperture na)
{
    // 1 - cos(asin x) = x^2 / (1 + sqrt(1 - x^2)), stable near NA = 0.
    const double s = na.value();
    return 0.5 * s * s / (1.0 + std::sqrt(1.0 - s * s));
}

ConeAngle cone_from_na(NumericalAperture na)
{
    return ConeAngle(std::asin(na.value()));
}

NumericalAperture na_from_cone(ConeAngle theta)
{
    if (theta.radians() > 0.5 * units::pi) {
        throw DomainError("cone half-angle beyond pi/2 has no numerical aperture");
    }
    return NumericalAperture(std::min(1.0, std::sin(theta.radians())));
}

}  // namespace pfl::geometry
