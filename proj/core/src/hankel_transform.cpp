#include "pfl/hankel_transform.hpp"

#include <algorithm>
#include <cmath>

#include "bessel_kernel.hpp"
#include "pfl/errors.hpp"
#include "pfl/units.hpp"

namespace pfl::diffraction {

HankelTransform::HankelTransform(std::size_t points, double radius) : radius_(radius)
{
    if (points < 2) {
        throw DomainError("Hankel transform needs at least 2 points");
    }
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw DomainError("Hankel transform radius must be positive");
    }
    auto zeros = detail::bessel_j0_zeros(points + 1);
    const double s = zeros.back();
    zeros.pop_back();
    band_limit_ = s / radius;

    radii_.resize(points);
    wavenumbers_.resize(points);
    space_weight_.resize(points);
    spectral_weight_.resize(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double j = zeros[i];
        const double j1 = detail::bessel_j1(j);
        radii_[i] = j * radius / s;
        wavenumbers_[i] = j / radius;
        space_weight_[i] = 2.0 * radius * radius / (s * s * j1 * j1);
        spectral_weight_[i] = 2.0 / (radius * radius * j1 * j1);
    }
    kernel_ = std::make_unique<detail::J0RowKernel>(std::move(zeros));
}

HankelTransform::~HankelTransform() = default;

std::vector<std::complex<double>> HankelTransform::forward(std::span<const std::complex<double>> f,
                                                           std::size_t rows) const
{
    if (f.size() != size()) {
        throw DomainError("field size does not match the Hankel grid");
    }
    rows = std::min(rows, size());
    std::size_t columns = f.size();
    while (columns > 0 && f[columns - 1] == std::complex<double>{}) {
        --columns;
    }
    std::vector<std::complex<double>> a(columns);
    for (std::size_t n = 0; n < columns; ++n) {
        a[n] = space_weight_[n] * f[n];
    }
    const double s = band_limit_ * radius_;
    const auto& zeros = kernel_->zeros();
    std::vector<std::complex<double>> out(rows);
    for (std::size_t m = 0; m < rows; ++m) {
        out[m] = kernel_->dot(zeros[m] / s, a.data(), columns);
    }
    return out;
}

std::vector<std::complex<double>> HankelTransform::weighted(std::span<const std::complex<double>> spectrum) const
{
    if (spectrum.size() > size()) {
        throw DomainError("spectrum is longer than the Hankel grid");
    }
    std::vector<std::complex<double>> w(spectrum.size());
    for (std::size_t m = 0; m < spectrum.size(); ++m) {
        w[m] = spectral_weight_[m] * spectrum[m];
    }
    return w;
}

std::complex<double> HankelTransform::synthesize(std::span<const std::complex<double>> weighted_spectrum,
                                                 double rho) const
{
    if (weighted_spectrum.size() > size()) {
        throw DomainError("spectrum is longer than the Hankel grid");
    }
    if (!(rho >= 0.0)) {
        throw DomainError("radius must be non-negative");
    }
    return kernel_->dot(rho / radius_, weighted_spectrum.data(), weighted_spectrum.size());
}

std::vector<std::complex<double>> HankelTransform::inverse(std::span<const std::complex<double>> spectrum) const
{
    const auto w = weighted(spectrum);
    std::vector<std::complex<double>> out(size());
    for (std::size_t n = 0; n < size(); ++n) {
        out[n] = synthesize(w, radii_[n]);
    }
    return out;
}

std::complex<double> HankelTransform::inverse_at(std::span<const std::complex<double>> spectrum, double rho) const
{
    return synthesize(weighted(spectrum), rho);
}

double HankelTransform::space_power(std::span<const std::complex<double>> f) const
{
    double sum = 0.0;
    for (std::size_t n = 0; n < std::min(f.size(), size()); ++n) {
        sum += space_weight_[n] * std::norm(f[n]);
    }
    return 2.0 * units::pi * sum;
}

double HankelTransform::spectral_power(std::span<const std::complex<double>> spectrum) const
{
    double sum = 0.0;
    for (std::size_t m = 0; m < std::min(spectrum.size(), size()); ++m) {
        sum += spectral_weight_[m] * std::norm(spectrum[m]);
    }
    return 2.0 * units::pi * sum;
}

}  // namespace pfl::diffraction
