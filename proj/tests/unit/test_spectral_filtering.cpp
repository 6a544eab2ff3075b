#include <gtest/gtest.h>

#include <cmath>
#include <optional>

#include "oracles.hpp"
#include "pfl/dipole_collection.hpp"
#include "pfl/errors.hpp"
#include "pfl/spectral_filtering.hpp"
#include "pfl/units.hpp"

using namespace pfl;
using namespace pfl::filtering;
using geometry::NumericalAperture;

namespace {

FrequencyLayout reference_layout()
{
    FrequencyLayout l;
    l.raman_shift = 12.6 * units::GHz;
    l.zeeman_splitting = 160.0 * units::MHz;
    return l;
}

EtalonSpec pi_etalon(double finesse = 50.0) { return EtalonSpec(finesse, 25.2 * units::GHz); }
EtalonSpec sigma_etalon(double finesse = 16.0) { return EtalonSpec(finesse, 320.0 * units::MHz); }

}  // namespace

TEST(EtalonSpec, RejectsNonPositive)
{
    EXPECT_THROW(EtalonSpec(0.0, 1.0), DomainError);
    EXPECT_THROW(EtalonSpec(10.0, -1.0), DomainError);
    EXPECT_THROW(EtalonSpec(std::nan(""), 1.0), DomainError);
}

TEST(EtalonTransmission, MatchesPartialWaveSum)
{
    for (double finesse : {0.5, 3.0, 16.0, 50.0}) {
        const EtalonSpec e(finesse, 1.0);
        for (double d = -1.3; d <= 1.3; d += 0.0371) {
            EXPECT_NEAR(etalon_transmission(e, d), oracle::etalon_by_reflections(finesse, 1.0, d), 1e-10)
                << finesse << " " << d;
        }
    }
}

TEST(EtalonTransmission, PeriodicAndBounded)
{
    const auto e = pi_etalon();
    const double fsr = e.free_spectral_range();
    EXPECT_DOUBLE_EQ(etalon_transmission(e, 0.0), 1.0);
    for (double d = 0.01 * fsr; d < fsr; d += 0.0937 * fsr) {
        const double t = etalon_transmission(e, d);
        EXPECT_GT(t, 0.0);
        EXPECT_LT(t, 1.0);
        EXPECT_NEAR(etalon_transmission(e, d + 3.0 * fsr), t, 1e-9 * t);
        EXPECT_NEAR(etalon_transmission(e, -d), t, 1e-12);
    }
}

TEST(Suppression, HalfFsrIsExact)
{
    for (double finesse : {1.0, 16.0, 50.0, 200.0}) {
        const EtalonSpec e(finesse, 2.0);
        const double expected = 1.0 + std::pow(2.0 * finesse / units::pi, 2);
        EXPECT_NEAR(suppression_factor(e, 1.0), expected, 1e-12 * expected);
    }
}

TEST(Suppression, ReferenceValues)
{
    EXPECT_NEAR(suppression_factor(pi_etalon(), 12.6 * units::GHz), 1014.21, 0.01);
    EXPECT_NEAR(etalon_transmission(pi_etalon(), 12.6 * units::GHz), 9.86e-4, 1e-6);
    EXPECT_NEAR(suppression_factor(sigma_etalon(), 160.0 * units::MHz), 104.75, 0.01);
}

TEST(Suppression, ResonanceThrows)
{
    EXPECT_THROW(suppression_factor(pi_etalon(), 0.0), DomainError);
    EXPECT_THROW(suppression_factor(pi_etalon(), 2.0 * 25.2 * units::GHz), DomainError);
}

TEST(Suppression, NoCavityLimit)
{
    EXPECT_NEAR(suppression_factor(EtalonSpec(1e-6, 1.0), 0.5), 1.0, 1e-11);
}

TEST(Zeeman, LinearModel)
{
    EXPECT_NEAR(zeeman_splitting(67.0 * units::gauss), 160.0 * units::MHz, 1e-3);
    EXPECT_NEAR(default_zeeman_coefficient * units::gauss / units::MHz, 2.388, 1e-3);
    EXPECT_EQ(zeeman_splitting(0.0), 0.0);
    EXPECT_NEAR(zeeman_splitting(33.5 * units::gauss), 80.0 * units::MHz, 1e-3);
    EXPECT_THROW(zeeman_splitting(-1.0), DomainError);
}

TEST(FrequencyLayout, RejectsNegative)
{
    FrequencyLayout l = reference_layout();
    l.raman_shift = -1.0;
    EXPECT_THROW(l.validate(), DomainError);
    EXPECT_THROW(scheme_error_budget(NumericalAperture(0.5), pi_etalon(), std::nullopt, l), DomainError);
}

TEST(SchemeBudget, VanishesAtZeroAperture)
{
    const auto b = scheme_error_budget(NumericalAperture(0.0), pi_etalon(), std::nullopt, reference_layout());
    EXPECT_NEAR(b.pi_leakage, 0.0, 1e-12);
    EXPECT_NEAR(b.polarization_error, 0.0, 1e-12);
    EXPECT_NEAR(b.combined_infidelity, 0.0, 1e-12);
}

TEST(SchemeBudget, BelowOnePercentNearUnitNa)
{
    const auto b = scheme_error_budget(NumericalAperture(0.95), pi_etalon(), sigma_etalon(), reference_layout());
    EXPECT_LT(b.combined_infidelity, 0.01);
    EXPECT_NEAR(b.combined_infidelity, b.pi_leakage + b.polarization_error, 1e-15);
}

TEST(SchemeBudget, LeakageChainAtReferenceAperture)
{
    const NumericalAperture na(0.64);
    const auto cone = geometry::cone_from_na(na);
    const double fs = oracle::dipole_fraction(true, true, cone.radians());
    const double fp = oracle::dipole_fraction(false, true, cone.radians());
    const double expected = (fp / 3.0) / (2.0 * fs / 3.0 + fp / 3.0) / (1.0 + std::pow(100.0 / units::pi, 2));
    const auto b = scheme_error_budget(na, pi_etalon(), std::nullopt, reference_layout());
    EXPECT_NEAR(b.pi_leakage, expected, 1e-9 * expected);
    EXPECT_NEAR(b.pi_leakage, 1.05e-4, 0.01e-4);
    EXPECT_NEAR(b.polarization_error, 1.0 - oracle::collected_fidelity(0.64), 1e-8);
}

TEST(SchemeBudget, MonotoneInFinesseAndNa)
{
    const auto layout = reference_layout();
    double last_leak = 1.0;
    double last_pol = 1.0;
    for (double f : {1.0, 4.0, 16.0, 50.0, 150.0}) {
        const auto b = scheme_error_budget(NumericalAperture(0.8), pi_etalon(f), sigma_etalon(f), layout);
        EXPECT_LE(b.pi_leakage, last_leak);
        EXPECT_LE(b.polarization_error, last_pol);
        last_leak = b.pi_leakage;
        last_pol = b.polarization_error;
    }
    double last = 0.0;
    for (double na = 0.0; na <= 1.0; na += 0.02) {
        const auto b = scheme_error_budget(NumericalAperture(std::min(na, 1.0)), pi_etalon(), sigma_etalon(), layout);
        EXPECT_GE(b.combined_infidelity, last - 1e-15) << na;
        last = b.combined_infidelity;
    }
}

TEST(FrequencyShift, RemovesRamanOffsetOnly)
{
    const auto shifted = remove_frequency_shift(reference_layout());
    EXPECT_EQ(shifted.raman_shift, 0.0);
    EXPECT_EQ(shifted.zeeman_splitting, reference_layout().zeeman_splitting);
    EXPECT_EQ(shifted.zeeman_coefficient, reference_layout().zeeman_coefficient);
}
