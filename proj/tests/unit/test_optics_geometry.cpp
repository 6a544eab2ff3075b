#include <gtest/gtest.h>

#include <cmath>

#include "pfl/errors.hpp"
#include "pfl/optics_geometry.hpp"
#include "pfl/units.hpp"

using namespace pfl;
using namespace pfl::geometry;

TEST(NumericalAperture, RejectsOutOfRange)
{
    EXPECT_THROW(NumericalAperture(-0.01), DomainError);
    EXPECT_THROW(NumericalAperture(1.01), DomainError);
    EXPECT_THROW(NumericalAperture(std::nan("")), DomainError);
    EXPECT_NO_THROW(NumericalAperture(0.0));
    EXPECT_NO_THROW(NumericalAperture(1.0));
}

TEST(ConeAngle, RejectsOutOfRange)
{
    EXPECT_THROW(ConeAngle(-1e-9), DomainError);
    EXPECT_THROW(ConeAngle(units::pi + 1e-9), DomainError);
}

TEST(LensGeometry, RequiresPositiveDimensions)
{
    EXPECT_THROW(LensGeometry(0.0, 1.0), DomainError);
    EXPECT_THROW(LensGeometry(1.0, -1.0), DomainError);
}

TEST(NaFromGeometry, CharacterizedLens)
{
    EXPECT_NEAR(na_from_geometry({3 * units::mm, 5 * units::mm}).value(), 0.640, 1e-3);
}

TEST(NaFromGeometry, FocalLengthEqualToSemiAperture)
{
    EXPECT_NEAR(na_from_geometry({1.0, 2.0}).value(), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(NaFromGeometry, IlluminatedSubaperture)
{
    EXPECT_NEAR(na_from_geometry({3 * units::mm, 2.2 * units::mm}).value(), 0.344, 1e-3);
}

TEST(NaFromGeometry, MatchesFNumberForm)
{
    for (double fn : {0.3, 0.6, 1.0, 4.0, 20.0}) {
        const LensGeometry g(fn * 2.0, 2.0);
        EXPECT_NEAR(na_from_geometry(g).value(), 1.0 / std::sqrt(1.0 + 4.0 * fn * fn), 1e-14);
    }
}

TEST(NaSmallAngle, OverstatesFastLenses)
{
    EXPECT_NEAR(na_small_angle(0.6).value(), 0.8333, 1e-4);
    EXPECT_GT(na_small_angle(0.6).value(), na_from_geometry({0.6, 1.0}).value());
    EXPECT_DOUBLE_EQ(na_small_angle(5.0).value(), 0.1);
    EXPECT_DOUBLE_EQ(na_small_angle(0.5).value(), 1.0);
    EXPECT_DOUBLE_EQ(na_small_angle(0.1).value(), 1.0);
    EXPECT_THROW(na_small_angle(0.0), DomainError);
}

TEST(SolidAngleFraction, ReferencePoints)
{
    EXPECT_NEAR(solid_angle_fraction(NumericalAperture(0.9)), 0.282, 0.005);
    EXPECT_NEAR(solid_angle_fraction(NumericalAperture(0.64)), 0.116, 0.005);
    EXPECT_DOUBLE_EQ(solid_angle_fraction(NumericalAperture(0.0)), 0.0);
    EXPECT_DOUBLE_EQ(solid_angle_fraction(NumericalAperture(1.0)), 0.5);
}

TEST(SolidAngleFraction, MonotoneInNa)
{
    double last = -1.0;
    for (int i = 0; i <= 100; ++i) {
        const double f = solid_angle_fraction(NumericalAperture(i / 100.0));
        EXPECT_GT(f, last);
        last = f;
    }
}

TEST(ConeConversions, RoundTrip)
{
    EXPECT_NEAR(cone_from_na(NumericalAperture(0.64)).radians(), 0.694, 1e-3);
    for (int i = 0; i <= 50; ++i) {
        const double na = i / 50.0;
        EXPECT_NEAR(na_from_cone(cone_from_na(NumericalAperture(na))).value(), na, 1e-15);
    }
    EXPECT_THROW(na_from_cone(ConeAngle(1.6)), DomainError);
    EXPECT_DOUBLE_EQ(na_from_cone(ConeAngle(0.5 * units::pi)).value(), 1.0);
}
