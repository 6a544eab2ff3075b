#pragma once

#include <complex>
#include <cstddef>
#include <vector>

// J0 evaluation along rows of the Hankel kernel J0(c * j_n), where j_n are the
// positive zeros of J0. Large arguments use the Hankel asymptotic expansion with
// the phase advanced by a rotation recurrence, which avoids a sincos per element.

namespace pfl::detail {

double bessel_j0(double x);
double bessel_j1(double x);

std::vector<double> bessel_j0_zeros(std::size_t count);

class J0RowKernel {
public:
    explicit J0RowKernel(std::vector<double> zeros);

    const std::vector<double>& zeros() const noexcept { return zeros_; }

    // sum_{n < count} coeffs[n] * J0(c * zeros[n])
    std::complex<double> dot(double c, const std::complex<double>* coeffs, std::size_t count) const;

    // out[n] = J0(c * zeros[n]) for n < count.
    void row(double c, double* out, std::size_t count) const;

    // Arguments at or above this use the asymptotic branch.
    static constexpr double asymptotic_threshold = 50.0;

private:
    template <class Sink>
    void for_each(double c, std::size_t count, Sink&& sink) const;

    std::vector<double> zeros_;
    std::vector<double> inv_zero_;
    std::vector<double> inv_sqrt_zero_;
    std::vector<double> delta_;  // zeros[n] - (n + 3/4) pi
};

}  // namespace pfl::detail
