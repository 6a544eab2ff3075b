#include "bessel_kernel.hpp"

#include <algorithm>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/detail/bessel_j0.hpp>
#include <boost/math/special_functions/detail/bessel_j1.hpp>
#include <cmath>
#include <iterator>

#include "pfl/units.hpp"

namespace pfl::detail {
namespace {

constexpr double quarter_pi = 0.78539816339744831;
constexpr std::size_t reseed_interval = 64;

// Hankel expansion coefficients: P in 1/x^2, Q in 1/x.
constexpr double p1 = -9.0 / 128.0;
constexpr double p2 = 3675.0 / 32768.0;
constexpr double p3 = -2401245.0 / 4194304.0;
constexpr double q0 = -1.0 / 8.0;
constexpr double q1 = 75.0 / 1024.0;
constexpr double q2 = -59535.0 / 262144.0;
constexpr double q3 = 57972915.0 / 33554432.0;

}  // namespace

double bessel_j0(double x)
{
    return boost::math::detail::bessel_j0(x);
}

double bessel_j1(double x)
{
    return boost::math::detail::bessel_j1(x);
}

std::vector<double> bessel_j0_zeros(std::size_t count)
{
    std::vector<double> z;
    z.reserve(count);
    boost::math::cyl_bessel_j_zero(0.0, 1, static_cast<unsigned>(count), std::back_inserter(z));
    return z;
}

J0RowKernel::J0RowKernel(std::vector<double> zeros) : zeros_(std::move(zeros))
{
    const std::size_t n = zeros_.size();
    inv_zero_.resize(n);
    inv_sqrt_zero_.resize(n);
    delta_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        inv_zero_[i] = 1.0 / zeros_[i];
        inv_sqrt_zero_[i] = 1.0 / std::sqrt(zeros_[i]);
        delta_[i] = zeros_[i] - (static_cast<double>(i) + 0.75) * units::pi;
    }
}

template <class Sink>
void J0RowKernel::for_each(double c, std::size_t count, Sink&& sink) const
{
    count = std::min(count, zeros_.size());
    if (c <= 0.0) {
        for (std::size_t i = 0; i < count; ++i) {
            sink(i, c == 0.0 ? 1.0 : bessel_j0(c * zeros_[i]));
        }
        return;
    }
    // zeros are increasing, so the small-argument columns form a prefix.
    const double j_switch = asymptotic_threshold / c;
    const std::size_t split =
        static_cast<std::size_t>(std::lower_bound(zeros_.begin(), zeros_.begin() + count, j_switch) - zeros_.begin());
    for (std::size_t i = 0; i < split; ++i) {
        sink(i, bessel_j0(c * zeros_[i]));
    }
    if (split == count) {
        return;
    }
    if (c * delta_[split] > 0.25) {
        // Phase correction outside the Taylor range; only reachable for c well above 1.
        for (std::size_t i = split; i < count; ++i) {
            sink(i, bessel_j0(c * zeros_[i]));
        }
        return;
    }

    const double inv_c = 1.0 / c;
    const double amp = std::sqrt(2.0 / (units::pi * c));
    const std::complex<double> step = std::polar(1.0, c * units::pi);
    std::complex<double> rot;
    for (std::size_t i = split; i < count; ++i) {
        if ((i - split) % reseed_interval == 0) {
            rot = std::polar(1.0, c * (static_cast<double>(i) + 0.75) * units::pi - quarter_pi);
        } else {
            rot *= step;
        }
        const double t = c * delta_[i];
        const double t2 = t * t;
        const double cos_t = 1.0 + t2 * (-0.5 + t2 * (1.0 / 24.0 + t2 * (-1.0 / 720.0 + t2 * (1.0 / 40320.0))));
        const double sin_t = t * (1.0 + t2 * (-1.0 / 6.0 + t2 * (1.0 / 120.0 + t2 * (-1.0 / 5040.0))));
        // e^{i(x - pi/4)}
        const double cos_chi = rot.real() * cos_t - rot.imag() * sin_t;
        const double sin_chi = rot.real() * sin_t + rot.imag() * cos_t;
        const double ix = inv_zero_[i] * inv_c;
        const double ix2 = ix * ix;
        const double p = 1.0 + ix2 * (p1 + ix2 * (p2 + ix2 * p3));
        const double q = ix * (q0 + ix2 * (q1 + ix2 * (q2 + ix2 * q3)));
        sink(i, amp * inv_sqrt_zero_[i] * (p * cos_chi - q * sin_chi));
    }
}

std::complex<double> J0RowKernel::dot(double c, const std::complex<double>* coeffs, std::size_t count) const
{
    double re = 0.0;
    double im = 0.0;
    for_each(c, count, [&](std::size_t i, double j) {
        re += coeffs[i].real() * j;
        im += coeffs[i].imag() * j;
    });
    return {re, im};
}

void J0RowKernel::row(double c, double* out, std::size_t count) const
{
    for_each(c, count, [&](std::size_t i, double j) { out[i] = j; });
}

}  // namespace pfl::detail
