#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <vector>

namespace pfl::detail {
class J0RowKernel;
}

namespace pfl::diffraction {

/// Quasi-discrete zero-order Hankel transform on [0, R] with N Bessel-zero nodes:
///   r_n = j_n R / j_{N+1},  kappa_m = j_m / R,
///   F(kappa) = int f(r) J0(kappa r) r dr,  f(r) = int F(kappa) J0(kappa r) kappa dkappa.
/// Immutable after construction; safe to share between threads.
class HankelTransform {
public:
    static constexpr std::size_t all = std::numeric_limits<std::size_t>::max();

    HankelTransform(std::size_t points, double radius);
    ~HankelTransform();
    HankelTransform(const HankelTransform&) = delete;
    HankelTransform& operator=(const HankelTransform&) = delete;

    std::size_t size() const noexcept { return radii_.size(); }
    double radius() const noexcept { return radius_; }
    const std::vector<double>& radii() const noexcept { return radii_; }
    const std::vector<double>& wavenumbers() const noexcept { return wavenumbers_; }
    // Largest spatial frequency representable on the grid [rad/m].
    double max_wavenumber() const noexcept { return band_limit_; }

    /// Spectrum at kappa_m for m < rows. Trailing zero samples of f are skipped.
    std::vector<std::complex<double>> forward(std::span<const std::complex<double>> f, std::size_t rows = all) const;

    /// Field at the grid radii from the first spectrum.size() spectral samples.
    std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> spectrum) const;

    /// Field at an arbitrary radius.
    std::complex<double> inverse_at(std::span<const std::complex<double>> spectrum, double rho) const;

    /// Multiplies the spectrum by the inverse quadrature weights, for repeated use with synthesize().
    std::vector<std::complex<double>> weighted(std::span<const std::complex<double>> spectrum) const;
    std::complex<double> synthesize(std::span<const std::complex<double>> weighted_spectrum, double rho) const;

    /// 2 pi int |f|^2 r dr and 2 pi int |F|^2 kappa dkappa by the transform's quadrature.
    double space_power(std::span<const std::complex<double>> f) const;
    double spectral_power(std::span<const std::complex<double>> spectrum) const;

private:
    double radius_;
    double band_limit_;
    std::vector<double> radii_;
    std::vector<double> wavenumbers_;
    std::vector<double> space_weight_;     // 2 R^2 / (S^2 J1(j_n)^2)
    std::vector<double> spectral_weight_;  // 2 / (R^2 J1(j_m)^2)
    std::unique_ptr<detail::J0RowKernel> kernel_;
};

}  // namespace pfl::diffraction
