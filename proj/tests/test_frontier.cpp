#include "doctest.h"

#include <cmath>
#include <numbers>

#include "nifront/errors.hpp"
#include "nifront/frontier.hpp"

using namespace nifront;

namespace {

const Frontier kPowerStab(Shape::PowerStabilising, Risk(0.05), Risk(0.10));
const Frontier kFixedRd(Shape::FixedRiskDifference, Risk(0.05), Risk(0.10));
const Frontier kFixedRr(Shape::FixedRiskRatio, Risk(0.05), Risk(0.10));

}  // namespace

TEST_CASE("Risk rejects values outside [0, 1]") {
    CHECK_NOTHROW(Risk(0.0));
    CHECK_NOTHROW(Risk(1.0));
    CHECK_THROWS_AS(Risk(-1e-12), Error);
    CHECK_THROWS_AS(Risk(1.0 + 1e-12), Error);
    CHECK_THROWS_AS(Risk(std::nan("")), Error);
}

TEST_CASE("asin_sqrt boundaries and a reference value") {
    CHECK(asin_sqrt(Risk(0.0)) == 0.0);
    CHECK(asin_sqrt(Risk(1.0)) == doctest::Approx(std::numbers::pi / 2));
    CHECK(std::abs(asin_sqrt(Risk(0.05)) - 0.225513405898131) < 1e-14);
}

TEST_CASE("inv_asin_sqrt inverts and checks its domain") {
    CHECK(inv_asin_sqrt(0.0).value() == 0.0);
    CHECK(std::abs(inv_asin_sqrt(0.225513405898131).value() - 0.05) < 1e-9);
    CHECK(std::abs(inv_asin_sqrt(std::numbers::pi / 4).value() - 0.5) < 1e-15);
    CHECK_THROWS_AS(inv_asin_sqrt(-0.01), Error);
    CHECK_THROWS_AS(inv_asin_sqrt(1.6), Error);
}

TEST_CASE("frontier construction checks anchors") {
    CHECK_THROWS_AS(Frontier(Shape::PowerStabilising, Risk(0.10), Risk(0.05)), Error);
    CHECK_THROWS_AS(Frontier(Shape::PowerStabilising, Risk(0.05), Risk(0.05)), Error);
    CHECK_THROWS_AS(Frontier(Shape::PowerStabilising, Risk(0.0), Risk(0.05)), Error);
    CHECK_THROWS_AS(Frontier(Shape::FixedRiskRatio, Risk(0.5), Risk(1.0)), Error);
}

TEST_CASE("tolerable active risk on the three shapes at the OVIVA control risk") {
    CHECK(kPowerStab.tolerable_active_risk(Risk(0.05)).value() == 0.10);
    CHECK(std::abs(kPowerStab.tolerable_active_risk(Risk(0.125)).value() - 0.195) < 5e-4);
    CHECK(std::abs(kPowerStab.tolerable_active_risk(Risk(0.125)).value() - 0.195187361320487) < 1e-12);
    CHECK(kFixedRd.tolerable_active_risk(Risk(0.125)).value() == doctest::Approx(0.175));
    CHECK(kFixedRr.tolerable_active_risk(Risk(0.125)).value() == doctest::Approx(0.25));
    CHECK(std::abs(kPowerStab.tolerable_active_risk(Risk(0.10)).value() - 0.164772850710048) < 1e-12);
}

TEST_CASE("tolerable active risk saturates at one and preserves zero for ratios") {
    CHECK(kFixedRd.tolerable_active_risk(Risk(0.98)).value() == 1.0);
    CHECK(kFixedRr.tolerable_active_risk(Risk(0.7)).value() == 1.0);
    CHECK(kPowerStab.tolerable_active_risk(Risk(0.999)).value() == 1.0);
    CHECK(kFixedRr.tolerable_active_risk(Risk(0.0)).value() == 0.0);
    CHECK(std::abs(kPowerStab.tolerable_active_risk(Risk(0.0)).value() - 0.00923303169377979) < 1e-14);
}

TEST_CASE("margin_on_scale values from the worked example") {
    CHECK(std::abs(kPowerStab.margin_on_scale(Risk(0.10), Scale::RiskDifference) - 0.0647728507100477) < 1e-12);
    CHECK(std::abs(kPowerStab.margin_on_scale(Risk(0.10), Scale::RiskDifference) - 0.065) < 5e-4);
    CHECK(std::abs(kPowerStab.margin_on_scale(Risk(0.10), Scale::LogRiskRatio) - 0.499397677078928) < 1e-12);
    CHECK(std::abs(kPowerStab.design_margin(Scale::ArcsineDifference) - 0.096237148498510977) < 1e-14);
    CHECK(kPowerStab.design_margin(Scale::RiskDifference) == doctest::Approx(0.05));
    CHECK(kPowerStab.design_margin(Scale::LogRiskRatio) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("log-ratio margin at zero control risk is degenerate") {
    try {
        (void)kPowerStab.margin_on_scale(Risk(0.0), Scale::LogRiskRatio);
        FAIL("expected DegenerateRatio");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateRatio);
    }
    CHECK(kFixedRr.margin_on_scale(Risk(0.0), Scale::RiskDifference) == 0.0);
}

TEST_CASE("margin is positive while the frontier is below one") {
    for (const Frontier* f : {&kPowerStab, &kFixedRd, &kFixedRr}) {
        for (int i = 1; i < 90; ++i) {
            const Risk p0(i / 200.0);
            if (f->tolerable_active_risk(p0).value() < 1.0) {
                CHECK(f->margin_on_scale(p0, Scale::RiskDifference) > 0.0);
                CHECK(f->margin_on_scale(p0, Scale::LogRiskRatio) > 0.0);
                CHECK(f->margin_on_scale(p0, Scale::ArcsineDifference) > 0.0);
            }
        }
    }
}
