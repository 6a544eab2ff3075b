#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "pfl/csv.hpp"
#include "pfl/dipole_collection.hpp"
#include "pfl/errors.hpp"
#include "pfl/units.hpp"

using namespace pfl;
using namespace pfl::dipole;
using geometry::ConeAngle;
using geometry::NumericalAperture;

namespace {

const EmissionChannel polar_sigma{Polarization::SigmaPlus, Orientation::Polar};
const EmissionChannel polar_pi{Polarization::Pi, Orientation::Polar};
const EmissionChannel equatorial_sigma{Polarization::SigmaMinus, Orientation::Equatorial};
const EmissionChannel equatorial_pi{Polarization::Pi, Orientation::Equatorial};
const EmissionChannel all_channels[] = {polar_sigma, polar_pi, equatorial_sigma, equatorial_pi};

double collection_series(const EmissionChannel& c, double na)
{
    return collection_fraction_series(c, NumericalAperture(na));
}

double series_deviation(const EmissionChannel& c, double na)
{
    const double exact = collection_fraction(c, geometry::cone_from_na(NumericalAperture(na)));
    return std::abs(collection_series(c, na) / exact - 1.0);
}

}  // namespace

TEST(Channel, StringConversions)
{
    EXPECT_EQ(to_string(polar_sigma), "polar-sigma_plus");
    EXPECT_EQ(polarization_from_string("sigma+"), Polarization::SigmaPlus);
    EXPECT_EQ(polarization_from_string("Sigma-"), Polarization::SigmaMinus);
    EXPECT_EQ(polarization_from_string("pi"), Polarization::Pi);
    EXPECT_EQ(orientation_from_string("EQUATORIAL"), Orientation::Equatorial);
    EXPECT_THROW(polarization_from_string("rho"), SchemaError);
    EXPECT_THROW(orientation_from_string("oblique"), SchemaError);
    EXPECT_EQ(m_convention_from_string("m2_as_m"), MConvention::M2AsM);
    EXPECT_THROW(m_convention_from_string("m"), SchemaError);
}

TEST(BeamQuality, Validation)
{
    EXPECT_THROW(BeamQuality(0.0, 1.0), DomainError);
    EXPECT_THROW(BeamQuality(1.6, 1.0), DomainError);
    EXPECT_THROW(BeamQuality(0.3, 0.99), DomainError);
    EXPECT_NO_THROW(BeamQuality(0.5 * units::pi, 1.0));
}

TEST(DipolePattern, NormalisedOverSphere)
{
    for (const auto& c : all_channels) {
        EXPECT_NEAR(oracle::dipole_fraction(c.polarization != Polarization::Pi, c.orientation == Orientation::Polar,
                                            units::pi),
                    1.0, 1e-12);
    }
}

TEST(CollectionFraction, ExactFormsMatchQuadrature)
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> angle(0.0, units::pi);
    for (int i = 0; i < 20; ++i) {
        const double t = angle(rng);
        for (const auto& c : all_channels) {
            const double ref = oracle::dipole_fraction(c.polarization != Polarization::Pi,
                                                       c.orientation == Orientation::Polar, t);
            EXPECT_NEAR(collection_fraction(c, ConeAngle(t)), ref, 1e-9) << to_string(c) << ' ' << t;
        }
    }
}

TEST(CollectionFraction, SpecialAngles)
{
    for (const auto& c : all_channels) {
        EXPECT_DOUBLE_EQ(collection_fraction(c, ConeAngle(0.0)), 0.0);
        EXPECT_NEAR(collection_fraction(c, ConeAngle(0.5 * units::pi)), 0.5, 1e-15);
        EXPECT_NEAR(collection_fraction(c, ConeAngle(units::pi)), 1.0, 1e-15);
    }
}

TEST(CollectionFraction, PolarSigmaEqualsEquatorialPi)
{
    for (int i = 0; i <= 100; ++i) {
        const ConeAngle t(units::pi * i / 100.0);
        EXPECT_EQ(collection_fraction(polar_sigma, t), collection_fraction(equatorial_pi, t));
    }
}

TEST(CollectionFraction, MonotoneAndOrdered)
{
    double last[4] = {-1, -1, -1, -1};
    for (int i = 1; i < 200; ++i) {
        const ConeAngle t(units::pi * i / 200.0);
        for (int k = 0; k < 4; ++k) {
            const double f = collection_fraction(all_channels[k], t);
            EXPECT_GE(f, last[k]);
            last[k] = f;
        }
        if (t.radians() < 0.5 * units::pi) {
            EXPECT_GE(collection_fraction(polar_sigma, t), collection_fraction(equatorial_sigma, t));
            EXPECT_GE(collection_fraction(equatorial_sigma, t), collection_fraction(polar_pi, t));
        }
    }
}

TEST(CollectionFraction, ReferenceValues)
{
    const auto cone = geometry::cone_from_na(NumericalAperture(0.64));
    EXPECT_NEAR(collection_fraction(polar_sigma, cone), oracle::dipole_fraction(true, true, cone.radians()), 1e-10);
    EXPECT_NEAR(collection_fraction(polar_sigma, cone), 0.1552, 1e-4);
    EXPECT_NEAR(collection_series(polar_sigma, 0.64), 0.1547, 1e-4);
    // (2 + cos t) sin^4(t/2) at t = asin(0.64)
    const double c = std::cos(cone.radians());
    EXPECT_NEAR(collection_fraction(polar_pi, cone), (2.0 + c) * std::pow(std::sin(0.5 * cone.radians()), 4), 1e-15);
    EXPECT_NEAR(collection_fraction(polar_pi, cone), 0.0371, 1e-4);
    EXPECT_NEAR(collection_series(polar_pi, 0.64), 0.0358, 1e-4);
}

TEST(CollectionSeries, PolarSigmaWithinTwoPercentBelowNa08)
{
    for (int i = 0; i < 200; ++i) {
        const double na = 0.05 + (0.8 - 0.05) * i / 200.0;
        EXPECT_LT(series_deviation(polar_sigma, na), 0.02) << na;
    }
}

TEST(CollectionSeries, EquatorialSigmaDeviationProfile)
{
    // Within 2% up to NA 0.7; grows to 4.2% as NA approaches 0.8.
    for (int i = 0; i <= 100; ++i) {
        const double na = 0.05 + (0.7 - 0.05) * i / 100.0;
        EXPECT_LT(series_deviation(equatorial_sigma, na), 0.02) << na;
    }
    EXPECT_NEAR(series_deviation(equatorial_sigma, 0.7999), 0.0418, 5e-4);
}

TEST(CollectionSeries, SmallNaLimit)
{
    for (const auto& c : {polar_sigma, polar_pi, equatorial_sigma}) {
        EXPECT_LT(series_deviation(c, 0.01), 1e-3) << to_string(c);
    }
}

TEST(CollectionProbability, LinearInEta)
{
    const auto cone = geometry::cone_from_na(NumericalAperture(0.64));
    EXPECT_NEAR(collection_probability(polar_sigma, cone, 0.30), 0.0466, 1e-4);
    EXPECT_EQ(collection_probability(polar_sigma, cone, 0.0), 0.0);
    EXPECT_NEAR(collection_probability(polar_sigma, geometry::cone_from_na(NumericalAperture(0.6)), 0.6), 0.082,
                5e-4);
    EXPECT_THROW(collection_probability(polar_sigma, cone, 1.1), DomainError);
    EXPECT_THROW(collection_probability(polar_sigma, cone, -0.1), DomainError);
}

TEST(EffectiveDivergence, Conventions)
{
    const BeamQuality beam(0.348, 1.08);
    EXPECT_NEAR(effective_divergence(beam).radians(), 0.2368, 1e-4);
    EXPECT_NEAR(effective_divergence(beam, MConvention::Unity).radians(), 0.2461, 1e-4);
    EXPECT_NEAR(effective_divergence(beam, MConvention::M2AsM).radians(), 0.348 / (1.08 * std::sqrt(2.0)), 1e-15);
    EXPECT_NEAR(effective_divergence(BeamQuality(1e-9, 1.0)).radians(), 0.0, 1e-9);
}

TEST(CoherentCoupling, CharacterisedLens)
{
    const BeamQuality beam(0.348, 1.08);
    EXPECT_NEAR(coherent_coupling(polar_sigma, beam, 0.30, MConvention::Unity), 0.0067, 1e-4);
    EXPECT_NEAR(coherent_coupling(polar_sigma, beam, 0.30, MConvention::SqrtM2), 0.0062, 1e-4);
    EXPECT_NEAR(coherent_coupling(polar_sigma, beam, 0.60) / coherent_coupling(polar_sigma, beam, 0.30), 2.0, 1e-12);
    EXPECT_GE(coherent_coupling(polar_sigma, beam, 0.60, MConvention::Unity), 0.013);
}

TEST(CoherentCoupling, NetworkingEstimate)
{
    const BeamQuality beam(std::asin(0.8), 1.5);
    EXPECT_NEAR(coherent_coupling(polar_sigma, beam, 0.5, MConvention::SqrtM2), 0.049, 5e-4);
    EXPECT_NEAR(coherent_coupling(polar_sigma, beam, 0.5, MConvention::Unity), 0.070, 5e-4);
}

TEST(CouplingBudget, InvariantsHold)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const NumericalAperture na(u(rng));
        const BeamQuality beam(0.01 + 1.5 * u(rng), 1.0 + 2.0 * u(rng));
        const double eta = u(rng);
        for (auto conv : {MConvention::SqrtM2, MConvention::M2AsM, MConvention::Unity}) {
            const auto b = coupling_budget(polar_sigma, na, beam, eta, conv);
            EXPECT_LE(b.p_coh, b.p_coll + 1e-15);
            EXPECT_LE(b.p_coll, b.eta_diff + 1e-15);
            EXPECT_LE(b.eta_diff, 1.0);
        }
    }
}

TEST(GaussianOverlap, TopHatWithinTwoPercent)
{
    for (double d : {0.05, 0.246, 0.5, 0.9}) {
        const double oracle_value = gaussian_overlap_oracle(polar_sigma, d);
        const double top_hat = collection_fraction(polar_sigma, ConeAngle(d));
        EXPECT_LT(std::abs(oracle_value - top_hat) / oracle_value, 0.02) << d;
    }
}

TEST(GaussianOverlap, PointSourceLimit)
{
    const double d = 1e-3;
    const double ratio =
        gaussian_overlap_oracle(polar_sigma, d) / collection_fraction(polar_sigma, ConeAngle(d));
    EXPECT_NEAR(ratio, 1.0, 1e-4);
    EXPECT_THROW(gaussian_overlap_oracle(polar_sigma, 0.0), DomainError);
    EXPECT_GT(gaussian_overlap_oracle(equatorial_sigma, 0.3), 0.0);
}

TEST(Fidelity, SingleAngle)
{
    EXPECT_DOUBLE_EQ(polarization_fidelity_single(0.0), 1.0);
    EXPECT_NEAR(polarization_fidelity_single(0.5 * units::pi), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(polarization_fidelity_single(0.694), 0.8919, 1e-4);
    EXPECT_THROW(polarization_fidelity_single(-0.1), DomainError);
}

TEST(Fidelity, CollectedMatchesSimpsonOracle)
{
    for (double na : {0.1, 0.27, 0.5, 0.64, 0.85, 0.95, 1.0}) {
        EXPECT_NEAR(polarization_fidelity_collected(NumericalAperture(na)), oracle::collected_fidelity(na), 1e-10)
            << na;
    }
}

TEST(Fidelity, ReferencePointsAndThresholds)
{
    EXPECT_NEAR(polarization_fidelity_collected(NumericalAperture(1.0)), 0.832, 1e-3);
    EXPECT_DOUBLE_EQ(polarization_fidelity_collected(NumericalAperture(0.0)), 1.0);
    EXPECT_GE(polarization_fidelity_collected(NumericalAperture(0.27)), 0.99);
    EXPECT_GE(polarization_fidelity_collected(NumericalAperture(0.85)), 0.90);
}

TEST(Fidelity, StrictlyDecreasingAndBounded)
{
    double last = 1.0 + 1e-12;
    for (int i = 1; i <= 100; ++i) {
        const double f = polarization_fidelity_collected(NumericalAperture(i / 100.0));
        EXPECT_LT(f, last);
        EXPECT_GE(f, 0.832 - 1e-3);
        last = f;
    }
}

TEST(Fidelity, SeriesWithinOnePercent)
{
    EXPECT_NEAR(fidelity_series(0.5), 0.96803, 1e-5);
    EXPECT_DOUBLE_EQ(fidelity_series(0.0), 1.0);
    for (int i = 0; i < 95; ++i) {
        const double na = i / 100.0;
        const double exact = polarization_fidelity_collected(NumericalAperture(na));
        EXPECT_LT(std::abs(fidelity_series(na) - exact) / exact, 0.01) << na;
    }
    EXPECT_THROW(fidelity_series(1.2), DomainError);
}

TEST(Curves, CsvShapes)
{
    std::stringstream collection;
    write_collection_curve(collection, 10);
    const auto table = csv::read(collection);
    EXPECT_EQ(table.rows.size(), 11u);
    EXPECT_EQ(table.header[0], "na");
    EXPECT_EQ(std::stod(table.rows.back()[1]), 0.5);

    std::stringstream fidelity;
    write_fidelity_curve(fidelity, 20);
    const auto ft = csv::read(fidelity);
    EXPECT_EQ(ft.rows.size(), 21u);
    EXPECT_NEAR(std::stod(ft.rows.back()[1]), 0.832, 1e-3);
    EXPECT_THROW(write_fidelity_curve(fidelity, 0), DomainError);
}
