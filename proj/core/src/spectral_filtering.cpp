#include "pfl/spectral_filtering.hpp"

#include <cmath>

#include "pfl/dipole_collection.hpp"
#include "pfl/errors.hpp"

namespace pfl::filtering {

EtalonSpec::EtalonSpec(double finesse, double free_spectral_range) : finesse_(finesse), fsr_(free_spectral_range)
{
    if (!(finesse_ > 0.0) || !std::isfinite(finesse_)) {
        throw DomainError("etalon finesse must be positive");
    }
    if (!(fsr_ > 0.0) || !std::isfinite(fsr_)) {
        throw DomainError("etalon free spectral range must be positive");
    }
}

void FrequencyLayout::validate() const
{
    if (!(raman_shift >= 0.0) || !(zeeman_splitting >= 0.0) || !(zeeman_coefficient >= 0.0)) {
        throw DomainError("frequency layout entries must be non-negative");
    }
}

double etalon_transmission(const EtalonSpec& etalon, double detuning)
{
    if (!std::isfinite(detuning)) {
        throw DomainError("detuning must be finite");
    }
    const double coefficient = 2.0 * etalon.finesse() / units::pi;
    const double s = std::sin(units::pi * detuning / etalon.free_spectral_range());
    return 1.0 / (1.0 + coefficient * coefficient * s * s);
}

double suppression_factor(const EtalonSpec& etalon, double detuning)
{
    const double phase = std::remainder(detuning / etalon.free_spectral_range(), 1.0);
    if (std::abs(phase) < 1e-12) {
        throw DomainError("detuning is on an etalon resonance; suppression is 1 by definition");
    }
    return 1.0 / etalon_transmission(etalon, detuning);
}

double zeeman_splitting(double field, double coefficient)
{
    if (!(field >= 0.0) || !(coefficient >= 0.0)) {
        throw DomainError("magnetic field and Zeeman coefficient must be non-negative");
    }
    return coefficient * field;
}

SchemeErrorBudget scheme_error_budget(geometry::NumericalAperture na, const EtalonSpec& etalon_pi,
                                      const std::optional<EtalonSpec>& etalon_sigma, const FrequencyLayout& layout)
{
    layout.validate();
    const auto cone = geometry::cone_from_na(na);
    const dipole::EmissionChannel sigma{dipole::Polarization::SigmaPlus, dipole::Orientation::Polar};
    const dipole::EmissionChannel pi{dipole::Polarization::Pi, dipole::Orientation::Polar};
    const double f_sigma = dipole::collection_fraction(sigma, cone);
    const double f_pi = dipole::collection_fraction(pi, cone);

    SchemeErrorBudget b;
    const double collected = 2.0 / 3.0 * f_sigma + 1.0 / 3.0 * f_pi;
    b.pi_fraction = collected > 0.0 ? (f_pi / 3.0) / collected : 0.0;
    b.pi_leakage = b.pi_fraction * etalon_transmission(etalon_pi, layout.raman_shift);
    b.polarization_error = 1.0 - dipole::polarization_fidelity_collected(na);
    if (etalon_sigma) {
        b.polarization_error *= etalon_transmission(*etalon_sigma, layout.zeeman_splitting);
    }
    b.combined_infidelity = b.pi_leakage + b.polarization_error;
    return b;
}

FrequencyLayout remove_frequency_shift(const FrequencyLayout& layout)
{
    layout.validate();
    FrequencyLayout out = layout;
    out.raman_shift = 0.0;
    return out;
}

}  // namespace pfl::filtering
