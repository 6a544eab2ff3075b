#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

// Reference computations for the tests. None of these call into the library; they are
// written from the underlying physics with plain quadrature so that a bug in the library
// cannot hide behind a shared helper.

namespace oracle {

// Fraction of a normalised dipole pattern inside a cone of half-angle theta_m around +z,
// by a tensor-product Gauss-Legendre rule over (theta, phi).
// sigma: (3/16pi)(1 + cos^2 T); pi: (3/8pi) sin^2 T, with T the angle to the field axis,
// which is z for a polar view and x for an equatorial view.
double dipole_fraction(bool sigma, bool polar, double theta_m);

// Number of rings with r_p <= D/2 found by stepping p until the optical path to the focus
// exceeds f + p lambda beyond the aperture edge.
std::size_t zone_count(double focal_length, double diameter, double wavelength);

// Path difference sqrt(f^2 + r^2) - f without cancellation.
double path_excess(double focal_length, double r);

// Gaussian beam through a thin paraxial lens (ABCD on the complex q parameter). The input
// waist sits at the lens.
struct GaussianFocus {
    double waist;
    double distance;  // lens to new waist
};
GaussianFocus paraxial_focus(double wavelength, double focal_length, double input_waist);

double gaussian_radius(double w0, double wavelength, double z);

// Etalon transmission by summing multiply reflected partial waves, with the mirror
// reflectance recovered from the finesse F = pi sqrt(R) / (1 - R).
double etalon_by_reflections(double finesse, double fsr, double detuning);

// Collected polarization fidelity, composite Simpson over the sigma-weighted cone.
double collected_fidelity(double na, std::size_t intervals = 20000);

// Knife-edge power of a Gaussian spot: P/2 erfc(+-sqrt(2)(x - c)/w).
double knife_edge(double x, double power, double center, double w, bool blade_in);

// Caustic w(z) with the IN direction focus shifted by `offset`.
double caustic(double w0, double m2, double z0, double offset, double wavelength, double z, bool blade_in);

// Central finite-difference gradient with relative step h.
std::vector<double> gradient(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x, double h = 1e-6);

// Normalised focal intensity |E(rho)|^2 / |E(0)|^2 of a stigmatic (hyperbolic-phase) lens
// under Gaussian illumination, from the stationary-phase angular spectrum: each lens radius
// r maps to one plane wave with kappa = k r / sqrt(f^2 + r^2), power conserved ring by ring.
double debye_focal_intensity(double wavelength, double focal_length, double aperture_radius, double input_waist,
                             double rho);

// Scalar Richardson extrapolation of a sequence converging as h^order.
double richardson(double h1, double v1, double h2, double v2, double order);

// Synthetic knife-edge data for one scan, as (blade position, power) pairs.
struct Sample {
    double x;
    double p;
};
std::vector<Sample> knife_edge_scan(double w, double center, double power, bool blade_in, std::size_t n,
                                    double relative_noise, std::uint64_t seed);

}  // namespace oracle
