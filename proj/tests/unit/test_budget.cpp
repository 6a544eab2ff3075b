#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "pfl/budget.hpp"
#include "pfl/errors.hpp"
#include "pfl/units.hpp"

using namespace pfl;
using namespace pfl::budget;
using geometry::NumericalAperture;

namespace {

TrapArraySpec array_with_d(double d)
{
    TrapArraySpec t;
    t.electrode_distance = d;
    return t;
}

}  // namespace

TEST(TrapArraySpec, Validation)
{
    EXPECT_THROW(array_with_d(0.0).validate(), DomainError);
    auto t = array_with_d(1.0);
    t.measured_site_fraction = 0.0;
    EXPECT_THROW(detection_site_spacing(t), DomainError);
    t.measured_site_fraction = 1.1;
    EXPECT_THROW(detection_site_spacing(t), DomainError);
    t = array_with_d(1.0);
    t.segments_per_site = 0;
    EXPECT_THROW(t.validate(), DomainError);
    EXPECT_THROW(DetectorSpec{0.0}.validate(), DomainError);
    EXPECT_THROW(DetectorSpec{1.5}.validate(), DomainError);
}

TEST(Spacing, ReferenceValues)
{
    const double d = 40.0 * units::um;
    auto t = array_with_d(d);
    EXPECT_NEAR(detection_site_spacing(t) / d, 7.826, 1e-3);
    t.measured_site_fraction = 1.0;
    EXPECT_NEAR(detection_site_spacing(t) / d, 3.5, 1e-12);
    t.segments_per_site = 8;
    t.measured_site_fraction = 0.25;
    EXPECT_NEAR(detection_site_spacing(t) / d, 8.0, 1e-12);
}

TEST(Spacing, LinearInElectrodeDistance)
{
    const double base = detection_site_spacing(array_with_d(1.0));
    for (double d : {1e-6, 3e-5, 2e-4}) {
        EXPECT_NEAR(detection_site_spacing(array_with_d(d)), base * d, 1e-12 * base * d);
        EXPECT_NEAR(achievable_array_na(array_with_d(d)).value(), achievable_array_na(array_with_d(1.0)).value(),
                    1e-12);
    }
}

TEST(ArrayNa, ReferenceAndLimits)
{
    const double na = achievable_array_na(array_with_d(50.0 * units::um)).value();
    EXPECT_NEAR(na, 0.79, 0.01);
    EXPECT_GE(na, 0.6);
    // NA = sin(atan(D / 2f)) with D = 7.83 d, f = 3 d
    EXPECT_NEAR(na, std::sin(std::atan(3.5 * std::sqrt(5.0) / 6.0)), 1e-12);

    auto t = array_with_d(1.0);
    t.focal_length_factor = 1e6;
    EXPECT_LT(achievable_array_na(t).value(), 1e-5);

    t.focal_length_factor = 0.5 * detection_site_spacing(t);
    EXPECT_NEAR(achievable_array_na(t).value(), 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(FaultTolerance, ReferenceValues)
{
    const auto at_044 = fault_tolerance_check(NumericalAperture(0.44), 1.0);
    EXPECT_NEAR(at_044.p_coll, oracle::dipole_fraction(true, true, std::asin(0.44)), 1e-10);
    EXPECT_TRUE(at_044.pass);
    EXPECT_NEAR(at_044.required_p_coll, 0.05, 0.0);

    const auto at_06 = fault_tolerance_check(NumericalAperture(0.6), 0.6);
    EXPECT_GE(at_06.p_coll, 0.08);
    EXPECT_NEAR(at_06.p_coll, 0.0816, 1e-3);
    EXPECT_TRUE(at_06.pass);
    EXPECT_NEAR(at_06.detected_fraction, 0.2 * at_06.p_coll, 1e-15);

    const auto microlens = fault_tolerance_check(NumericalAperture(0.3), 1.0);
    EXPECT_NEAR(microlens.p_coll, 0.034, 1e-3);
    EXPECT_FALSE(microlens.pass);
}

TEST(FaultTolerance, MonotoneInNaAndEfficiency)
{
    bool passed = false;
    for (double na = 0.0; na <= 1.0; na += 0.01) {
        const bool p = fault_tolerance_check(NumericalAperture(std::min(na, 1.0)), 0.7).pass;
        EXPECT_TRUE(!passed || p) << na;
        passed = passed || p;
    }
    passed = false;
    for (double eta = 0.0; eta <= 1.0; eta += 0.01) {
        const bool p = fault_tolerance_check(NumericalAperture(0.5), std::min(eta, 1.0)).pass;
        EXPECT_TRUE(!passed || p) << eta;
        passed = passed || p;
    }
    EXPECT_THROW(fault_tolerance_check(NumericalAperture(0.5), 1.0, {}, 1.5), DomainError);
}

TEST(RateGain, ReferenceValues)
{
    EXPECT_GE(entanglement_rate_gain(0.06, 0.0032), 200.0);
    EXPECT_NEAR(entanglement_rate_gain(0.06, 0.0032), 351.56, 0.01);
    EXPECT_DOUBLE_EQ(entanglement_rate_gain(0.01, 0.01), 1.0);
    EXPECT_NEAR(entanglement_rate_gain(0.0064, 0.0032), 4.0, 1e-12);
    EXPECT_THROW(entanglement_rate_gain(0.0, 0.1), DomainError);
    EXPECT_THROW(entanglement_rate_gain(0.1, 1.2), DomainError);
}

TEST(RateGain, Reciprocal)
{
    for (double x : {0.001, 0.02, 0.3, 1.0}) {
        for (double y : {0.004, 0.05, 0.9}) {
            EXPECT_NEAR(entanglement_rate_gain(x, y) * entanglement_rate_gain(y, x), 1.0, 1e-12);
        }
    }
}
