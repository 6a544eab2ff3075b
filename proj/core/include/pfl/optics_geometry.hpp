#pragma once

// Angle and aperture conversions shared by every other module.

namespace pfl::geometry {

// Sine of the marginal-ray half-angle, 0 <= NA <= 1.
class NumericalAperture {
public:
    explicit NumericalAperture(double value);

    double value() const noexcept { return value_; }

    friend bool operator==(NumericalAperture, NumericalAperture) = default;

private:
    double value_;
};

// Half-angle of an acceptance or divergence cone in radians, 0 <= theta <= pi.
class ConeAngle {
public:
    explicit ConeAngle(double radians);

    double radians() const noexcept { return radians_; }

    friend bool operator==(ConeAngle, ConeAngle) = default;

private:
    double radians_;
};

// Focal length and clear-aperture diameter in metres, both strictly positive.
class LensGeometry {
public:
    LensGeometry(double focal_length, double clear_aperture_diameter);

    double focal_length() const noexcept { return focal_length_; }
    double clear_aperture_diameter() const noexcept { return diameter_; }
    double aperture_radius() const noexcept { return 0.5 * diameter_; }
    double f_number() const noexcept { return focal_length_ / diameter_; }

private:
    double focal_length_;
    double diameter_;
};

/// Exact NA of the marginal ray: (D/2) / sqrt(f^2 + (D/2)^2) = 1/sqrt(1 + 4 (F/#)^2).
NumericalAperture na_from_geometry(const LensGeometry& geometry);

/// Catalogue approximation NA ~ 1/(2 F/#), clamped to 1. Overstates NA for fast lenses;
/// within 3% of the exact value only for F/# >= 2.
NumericalAperture na_small_angle(double f_number);

/// Fraction of the full 4 pi sphere inside the cone: (1 - cos(asin NA)) / 2.
double solid_angle_fraction(NumericalAperture na);

ConeAngle cone_from_na(NumericalAperture na);

// Throws DomainError for theta > pi/2 (no NA beyond the hemisphere).
NumericalAperture na_from_cone(ConeAngle theta);

}  // namespace pfl::geometry
