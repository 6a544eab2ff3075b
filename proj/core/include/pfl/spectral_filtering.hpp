#pragma once

#include <optional>

#include "pfl/optics_geometry.hpp"
#include "pfl/units.hpp"

// Fabry-Perot filtering of Raman-scattered photons and the resulting error budget of a
// polar-view sigma-photon entanglement scheme.

namespace pfl::filtering {

// 160 MHz at 67 G; the only calibration pair available, applied as a linear model.
inline constexpr double default_zeeman_coefficient = 160.0 * units::MHz / (67.0 * units::gauss);  // Hz/T

class EtalonSpec {
public:
    EtalonSpec(double finesse, double free_spectral_range);

    double finesse() const noexcept { return finesse_; }
    double free_spectral_range() const noexcept { return fsr_; }

private:
    double finesse_;
    double fsr_;
};

struct FrequencyLayout {
    double raman_shift = 0.0;        // [Hz]
    double zeeman_splitting = 0.0;   // [Hz]
    double zeeman_coefficient = default_zeeman_coefficient;  // [Hz/T]

    // Throws DomainError on negative entries.
    void validate() const;
};

/// Airy transmission 1 / (1 + (2F/pi)^2 sin^2(pi detuning / FSR)).
double etalon_transmission(const EtalonSpec& etalon, double detuning);

/// 1 / etalon_transmission; DomainError on resonance.
double suppression_factor(const EtalonSpec& etalon, double detuning);

/// coefficient * field, field >= 0 in tesla.
double zeeman_splitting(double field, double coefficient = default_zeeman_coefficient);

struct SchemeErrorBudget {
    double pi_fraction = 0.0;          // unfiltered share of pi photons among collected photons
    double pi_leakage = 0.0;
    double polarization_error = 0.0;
    double combined_infidelity = 0.0;  // first-order sum of the two terms
};

/// Polar view: sigma photons sit on an etalon resonance, pi photons are detuned by the Raman
/// shift and the optional sigma etalon is detuned by the Zeeman splitting.
SchemeErrorBudget scheme_error_budget(geometry::NumericalAperture na, const EtalonSpec& etalon_pi,
                                      const std::optional<EtalonSpec>& etalon_sigma, const FrequencyLayout& layout);

/// Frequency layout after an acousto-optic shift that cancels the Raman offset.
FrequencyLayout remove_frequency_shift(const FrequencyLayout& layout);

}  // namespace pfl::filtering
