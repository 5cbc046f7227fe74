// Randomised invariant checks. Each property draws at least kCases inputs
// from a fixed-seed generator so failures are reproducible.

#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "nifront/analysis.hpp"
#include "nifront/design.hpp"
#include "nifront/frontier.hpp"
#include "nifront/normal.hpp"

using namespace nifront;

namespace {

constexpr int kCases = 2000;

struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
    }

    // Both arms with at least one event and one non-event.
    TrialData trial() {
        const std::int64_t n0 = integer(20, 2000);
        const std::int64_t n1 = integer(20, 2000);
        return TrialData(n0, n1, integer(1, n0 / 3), integer(1, n1 / 3));
    }

    Frontier power_stabilising() {
        const double c = uniform(0.01, 0.3);
        return Frontier(Shape::PowerStabilising, Risk(c), Risk(c + uniform(0.01, 0.15)));
    }
};

const Shape kShapes[] = {Shape::FixedRiskDifference, Shape::FixedRiskRatio, Shape::PowerStabilising};

}  // namespace

TEST_CASE("property: arcsine transform round trip") {
    Gen g(1);
    for (int i = 0; i < kCases; ++i) {
        const double p = g.uniform(0.0, 1.0);
        CHECK(std::abs(inv_asin_sqrt(asin_sqrt(Risk(p))).value() - p) < 1e-12);
    }
}

TEST_CASE("property: frontiers are nondecreasing and pass through their anchor") {
    Gen g(2);
    for (int i = 0; i < kCases; ++i) {
        const double c = g.uniform(0.001, 0.9);
        const double t = g.uniform(c + 1e-3, 0.999);
        for (Shape s : kShapes) {
            const Frontier f(s, Risk(c), Risk(t));
            CHECK(std::abs(f.tolerable_active_risk(Risk(c)).value() - t) < 1e-12);
            const double a = g.uniform(0.0, 1.0);
            const double b = g.uniform(0.0, 1.0);
            const double lo = std::min(a, b);
            const double hi = std::max(a, b);
            CHECK(f.tolerable_active_risk(Risk(lo)).value() <= f.tolerable_active_risk(Risk(hi)).value());
        }
    }
    // Dense grid sweep on the reference anchors.
    for (Shape s : kShapes) {
        const Frontier f(s, Risk(0.05), Risk(0.10));
        double prev = -1.0;
        for (int k = 0; k <= 100000; ++k) {
            const double v = f.tolerable_active_risk(Risk(k / 100000.0)).value();
            CHECK_MESSAGE(v >= prev, "shape ", static_cast<int>(s), " at ", k);
            prev = v;
        }
    }
}

TEST_CASE("property: fixed-ratio above power-stabilising above fixed-difference beyond the anchor") {
    const Frontier rd(Shape::FixedRiskDifference, Risk(0.05), Risk(0.10));
    const Frontier rr(Shape::FixedRiskRatio, Risk(0.05), Risk(0.10));
    const Frontier ps(Shape::PowerStabilising, Risk(0.05), Risk(0.10));
    Gen g(3);
    for (int i = 0; i < kCases; ++i) {
        const Risk p(g.uniform(0.005, 0.45));
        const double a = rd.tolerable_active_risk(p).value();
        const double b = ps.tolerable_active_risk(p).value();
        const double c = rr.tolerable_active_risk(p).value();
        if (p.value() > 0.05) {
            CHECK(c >= b);
            CHECK(b >= a);
        } else if (p.value() < 0.05) {
            CHECK(c <= b);
            CHECK(b <= a);
        }
    }
}

TEST_CASE("property: each shape holds its own scale's margin constant") {
    Gen g(4);
    const std::pair<Shape, Scale> natural[] = {{Shape::FixedRiskDifference, Scale::RiskDifference},
                                               {Shape::FixedRiskRatio, Scale::LogRiskRatio},
                                               {Shape::PowerStabilising, Scale::ArcsineDifference}};
    for (int i = 0; i < kCases; ++i) {
        const double c = g.uniform(0.01, 0.4);
        const double t = g.uniform(c + 1e-3, std::min(0.99, 1.8 * c + 0.01));
        for (auto [shape, scale] : natural) {
            const Frontier f(shape, Risk(c), Risk(t));
            const Risk p(g.uniform(0.001, 0.5));
            if (f.tolerable_active_risk(p).value() < 1.0) {
                CHECK(std::abs(f.margin_on_scale(p, scale) - f.design_margin(scale)) < 1e-12);
            }
        }
    }
}

TEST_CASE("property: arcsine sample size ignores the control risk") {
    Gen g(5);
    for (int i = 0; i < kCases; ++i) {
        const double margin = g.uniform(0.02, 0.2);
        const double base_ctrl = g.uniform(0.01, 0.6);
        const double other_ctrl = g.uniform(0.01, 0.6);
        auto spec = [&](double ctrl) {
            DesignSpec d;
            d.pi_e0 = Risk(ctrl);
            d.pi_e1 = Risk(ctrl);
            d.pi_f1 = inv_asin_sqrt(asin_sqrt(Risk(ctrl)) + margin);
            d.ratio = 1.5;
            return d;
        };
        const double a = sample_size_exact(spec(base_ctrl), Scale::ArcsineDifference);
        const double b = sample_size_exact(spec(other_ctrl), Scale::ArcsineDifference);
        CHECK(std::abs(a / b - 1.0) < 1e-9);
    }
}

TEST_CASE("property: sample size responds monotonically to margin, alpha and power") {
    Gen g(6);
    const Scale scales[] = {Scale::RiskDifference, Scale::LogRiskRatio, Scale::ArcsineDifference};
    for (int i = 0; i < kCases; ++i) {
        DesignSpec d;
        d.pi_e0 = Risk(g.uniform(0.02, 0.3));
        d.pi_e1 = d.pi_e0;
        d.pi_f1 = Risk(d.pi_e0.value() + g.uniform(0.01, 0.1));
        d.alpha = g.uniform(0.005, 0.05);
        d.power = g.uniform(0.6, 0.95);
        const Scale s = scales[i % 3];
        const auto n = sample_size(d, s).n0;

        DesignSpec wider = d;
        wider.pi_f1 = Risk(d.pi_f1.value() + g.uniform(0.0, 0.05));
        CHECK(sample_size(wider, s).n0 <= n);

        DesignSpec looser = d;
        looser.alpha = std::min(0.49, d.alpha + g.uniform(0.0, 0.05));
        CHECK(sample_size(looser, s).n0 <= n);

        DesignSpec stronger = d;
        stronger.power = std::min(0.99, d.power + g.uniform(0.0, 0.05));
        CHECK(sample_size(stronger, s).n0 >= n);

        // Rounded design meets the target; unrounded hits it exactly.
        CHECK(power(d, s, sample_size(d, s), d.pi_e0, d.pi_e1) >= d.power - 1e-12);
        CHECK(std::abs(power_exact(d, s, sample_size_exact(d, s), d.pi_e0, d.pi_e1) - d.power) < 1e-9);
    }
}

TEST_CASE("property: RD size grows and RR size shrinks with the control risk") {
    Gen g(7);
    for (int i = 0; i < kCases; ++i) {
        const double a = g.uniform(0.005, 0.45);
        const double b = g.uniform(0.005, 0.45);
        const double lo = std::min(a, b);
        const double hi = std::max(a, b);
        if (hi - lo < 1e-6) {
            continue;
        }
        auto rd_spec = [](double p) {
            DesignSpec d;
            d.pi_e0 = Risk(p);
            d.pi_e1 = Risk(p);
            d.pi_f1 = Risk(p + 0.05);
            return d;
        };
        auto rr_spec = [](double p) {
            DesignSpec d;
            d.pi_e0 = Risk(p);
            d.pi_e1 = Risk(p);
            d.pi_f1 = Risk(2.0 * p);
            return d;
        };
        CHECK(sample_size_exact(rd_spec(lo), Scale::RiskDifference) <
              sample_size_exact(rd_spec(hi), Scale::RiskDifference));
        CHECK(sample_size_exact(rr_spec(lo), Scale::LogRiskRatio) >
              sample_size_exact(rr_spec(hi), Scale::LogRiskRatio));
    }
}

TEST_CASE("property: back-calculated margin keeps the arcsine decision") {
    Gen g(8);
    for (int i = 0; i < kCases; ++i) {
        const TrialData t = g.trial();
        const Frontier f = g.power_stabilising();
        const double alpha = g.uniform(0.005, 0.1);
        const auto as = analyze_arcsine(t, f, alpha);
        const auto bm = backcalc_margin_rd(t, f, alpha);
        CHECK(std::abs(as.p - bm.p) < 1e-12);
        CHECK(as.non_inferior == bm.non_inferior);
    }
}

TEST_CASE("property: back-calculated level satisfies the ratio identity") {
    Gen g(9);
    int checked = 0;
    while (checked < kCases) {
        const TrialData t = g.trial();
        const Frontier f = g.power_stabilising();
        const double alpha = g.uniform(0.005, 0.1);
        const auto as = analyze_arcsine(t, f, alpha);
        if (std::abs(as.z) < 1e-3) {
            continue;
        }
        const auto r = backcalc_alpha_rd(t, f, alpha);
        const double z_rd = (r.estimate - r.margin_tested) / r.se;
        const double lhs = z_rd / -normal_quantile(r.alpha_used);
        const double rhs = as.z / normal_quantile(1.0 - alpha);
        CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(rhs)));
        CHECK(std::abs(r.ci_level - (1.0 - 2.0 * r.alpha_used)) < 1e-15);
        ++checked;
    }
}

TEST_CASE("property: below the threshold the conditional analysis is the fixed-margin test") {
    Gen g(10);
    const DesignSpec d;
    const Frontier f = d.frontier();
    int checked = 0;
    while (checked < kCases) {
        const std::int64_t n = g.integer(200, 3000);
        const std::int64_t e0 = g.integer(1, n / 4);
        const TrialData t(n, n, e0, g.integer(1, n / 4));
        const Scale s = checked % 2 == 0 ? Scale::RiskDifference : Scale::LogRiskRatio;
        const double eps = s == Scale::RiskDifference ? g.uniform(0.005, 0.05) : g.uniform(0.1, 0.7);
        if (exceeds_threshold(t.control_risk(), d.pi_e0.value(), s, eps)) {
            continue;
        }
        const double alpha = g.uniform(0.005, 0.025);
        const auto c = conditional_modify_margin(t, d, s, eps, AlphaStrategy::reduced_fixed(alpha));
        const auto plain = analyze_standard(t, f, s, alpha);
        CHECK_FALSE(c.margin_modified);
        CHECK(c.margin_tested == plain.margin_tested);
        CHECK(c.z == plain.z);
        CHECK(c.p == plain.p);
        CHECK(c.ci_low == plain.ci_low);
        CHECK(c.ci_high == plain.ci_high);
        CHECK(c.non_inferior == plain.non_inferior);
        ++checked;
    }
}

TEST_CASE("property: p decreases strictly as the tested margin widens") {
    Gen g(11);
    const Scale scales[] = {Scale::RiskDifference, Scale::LogRiskRatio, Scale::ArcsineDifference};
    for (int i = 0; i < kCases; ++i) {
        const TrialData t = g.trial();
        const EffectEstimate e = estimate_effect(t, scales[i % 3]);
        // Keep z away from the tails where p rounds to 0 or 1.
        const double m1 = e.estimate + e.se * g.uniform(-6.0, 4.0);
        const double m2 = m1 + e.se * g.uniform(0.01, 2.0);
        CHECK(wald_test(e, m2, 0.025).p < wald_test(e, m1, 0.025).p);
        CHECK(wald_test(e, m2 + 1.0, 0.025).p <= wald_test(e, m2, 0.025).p);
    }
}

TEST_CASE("property: one-sided p below alpha iff the interval clears the margin") {
    Gen g(12);
    const DesignSpec d;
    int checked = 0;
    while (checked < kCases) {
        const TrialData t = g.trial();
        const Frontier f = g.power_stabilising();
        const double alpha = g.uniform(0.005, 0.1);
        std::vector<AnalysisReport> reports{
            analyze_arcsine(t, f, alpha), backcalc_margin_rd(t, f, alpha),
            analyze_standard(t, f, Scale::RiskDifference, alpha), analyze_standard(t, f, Scale::LogRiskRatio, alpha),
            conditional_modify_margin(t, d, Scale::RiskDifference, 0.0125, AlphaStrategy::reduced_fixed(alpha)),
            conditional_modify_margin(t, d, Scale::LogRiskRatio, std::log(1.25), AlphaStrategy::nominal(alpha))};
        for (const AnalysisReport& r : reports) {
            // Skip ties that rounding could flip.
            if (std::abs(r.z + normal_quantile(1.0 - r.alpha_used)) < 1e-9) {
                continue;
            }
            CHECK((r.p < r.alpha_used) == (r.ci_high < reported_margin(r)));
        }
        ++checked;
    }
}

TEST_CASE("property: swapping arms negates estimates and mirrors z") {
    Gen g(13);
    const Scale scales[] = {Scale::RiskDifference, Scale::LogRiskRatio, Scale::ArcsineDifference};
    for (int i = 0; i < kCases; ++i) {
        const TrialData t = g.trial();
        const Scale s = scales[i % 3];
        const EffectEstimate a = estimate_effect(t, s);
        const EffectEstimate b = estimate_effect(t.swapped(), s);
        CHECK(std::abs(a.estimate + b.estimate) < 1e-12);
        CHECK(std::abs(a.se - b.se) < 1e-12 * a.se);
        // Testing "active worse by m" on the swapped data is the mirror image
        // of testing "control worse by m": z(-m) on the swapped problem = -z(m).
        const double m = g.uniform(0.0, 0.2);
        CHECK(std::abs(wald_test(b, -m, 0.025).z + wald_test(a, m, 0.025).z) < 1e-9);
    }
}
