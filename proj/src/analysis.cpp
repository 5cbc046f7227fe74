#include "nifront/analysis.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nifront/errors.hpp"
#include "nifront/normal.hpp"

namespace nifront {

TrialData::TrialData(std::int64_t n0, std::int64_t n1, std::int64_t e0, std::int64_t e1)
    : n0_(n0), n1_(n1), e0_(e0), e1_(e1) {
    if (n0 <= 0 || n1 <= 0) {
        fail(ErrorKind::InvalidArgument, "arm sizes must be positive");
    }
    if (e0 < 0 || e0 > n0 || e1 < 0 || e1 > n1) {
        fail(ErrorKind::InvalidArgument, "event counts must lie within the arm sizes");
    }
}

std::string_view to_string(Method method) noexcept {
    switch (method) {
    case Method::ArcsineTest: return "as";
    case Method::BackcalcMargin: return "backcalc-margin";
    case Method::BackcalcAlpha: return "backcalc-alpha";
    case Method::Standard: return "standard";
    case Method::ConditionalModify: return "conditional";
    }
    return "?";
}

namespace {

enum class EstimateStatus { Ok, ZeroCell, ZeroVariance };

EstimateStatus compute_estimate(const TrialData& t, Scale scale, EffectEstimate& out) noexcept {
    const double p0 = t.control_risk();
    const double p1 = t.active_risk();
    const double n0 = static_cast<double>(t.n0());
    const double n1 = static_cast<double>(t.n1());
    out.scale = scale;
    switch (scale) {
    case Scale::RiskDifference:
        out.estimate = p1 - p0;
        out.se = std::sqrt(p0 * (1.0 - p0) / n0 + p1 * (1.0 - p1) / n1);
        break;
    case Scale::LogRiskRatio:
        if (t.e0() == 0 || t.e1() == 0) {
            return EstimateStatus::ZeroCell;
        }
        out.estimate = std::log(p1 / p0);
        out.se = std::sqrt((1.0 - p0) / (n0 * p0) + (1.0 - p1) / (n1 * p1));
        break;
    case Scale::ArcsineDifference:
        out.estimate = std::asin(std::sqrt(p1)) - std::asin(std::sqrt(p0));
        out.se = std::sqrt(1.0 / (4.0 * n0) + 1.0 / (4.0 * n1));
        break;
    }
    // log-RR se is zero only when both arms are all events.
    return out.se > 0.0 ? EstimateStatus::Ok : EstimateStatus::ZeroVariance;
}

struct Zs {
    EffectEstimate as;
    EffectEstimate rd;
    double z_as;
};

Zs arcsine_and_rd(const TrialData& t, const Frontier& f) {
    Zs out{estimate_effect(t, Scale::ArcsineDifference), estimate_effect(t, Scale::RiskDifference), 0.0};
    out.z_as = (out.as.estimate - f.arcsine_margin()) / out.as.se;
    return out;
}

void require_power_stabilising(const Frontier& f) {
    if (f.shape() != Shape::PowerStabilising) {
        fail(ErrorKind::InvalidArgument, "procedure requires a power-stabilising frontier");
    }
}

void require_level(double alpha) {
    if (!(alpha > 0.0 && alpha < 0.5)) {
        fail(ErrorKind::InvalidArgument, "one-sided alpha must lie in (0, 0.5)");
    }
}

void require_rd_or_rr(Scale scale) {
    if (scale == Scale::ArcsineDifference) {
        fail(ErrorKind::InvalidArgument, "margin modification works on the RD or log-RR scale");
    }
}

AnalysisReport from_wald(Method method, const EffectEstimate& e, double margin, double alpha, double ci_alpha,
                         double ci_level) {
    const WaldResult w = wald_test(e, margin, ci_alpha);
    AnalysisReport r;
    r.method = method;
    r.scale_reported = e.scale;
    r.estimate = e.estimate;
    r.se = e.se;
    r.margin_tested = margin;
    r.alpha_used = alpha;
    r.ci_level = ci_level;
    r.ci_low = w.ci_low;
    r.ci_high = w.ci_high;
    r.z = w.z;
    r.p = w.p;
    r.non_inferior = w.p < alpha;
    if (e.scale == Scale::LogRiskRatio) {
        r.ci_low = std::exp(r.ci_low);
        r.ci_high = std::exp(r.ci_high);
    }
    return r;
}

}  // namespace

std::optional<EffectEstimate> try_estimate_effect(const TrialData& t, Scale scale) noexcept {
    EffectEstimate e;
    if (compute_estimate(t, scale, e) != EstimateStatus::Ok) {
        return std::nullopt;
    }
    return e;
}

EffectEstimate estimate_effect(const TrialData& t, Scale scale) {
    EffectEstimate e;
    switch (compute_estimate(t, scale, e)) {
    case EstimateStatus::Ok:
        return e;
    case EstimateStatus::ZeroCell:
        fail(ErrorKind::DegenerateRatio, "log risk ratio needs events in both arms");
    case EstimateStatus::ZeroVariance:
        fail(ErrorKind::DegenerateVariance, "estimated variance is zero");
    }
    return e;
}

WaldResult wald_test(const EffectEstimate& e, double margin, double alpha) {
    require_level(alpha);
    if (!(e.se > 0.0)) {
        fail(ErrorKind::DegenerateVariance, "standard error must be positive");
    }
    const double crit = normal_quantile(1.0 - alpha);
    WaldResult w;
    w.z = (e.estimate - margin) / e.se;
    w.p = normal_cdf(w.z);
    w.ci_low = e.estimate - crit * e.se;
    w.ci_high = e.estimate + crit * e.se;
    return w;
}

double reported_margin(const AnalysisReport& r) noexcept {
    return r.scale_reported == Scale::LogRiskRatio ? std::exp(r.margin_tested) : r.margin_tested;
}

AnalysisReport analyze_arcsine(const TrialData& t, const Frontier& f, double alpha) {
    require_power_stabilising(f);
    require_level(alpha);
    const EffectEstimate as = estimate_effect(t, Scale::ArcsineDifference);
    return from_wald(Method::ArcsineTest, as, f.arcsine_margin(), alpha, alpha, 1.0 - 2.0 * alpha);
}

AnalysisReport backcalc_margin_rd(const TrialData& t, const Frontier& f, double alpha) {
    require_power_stabilising(f);
    require_level(alpha);
    const Zs z = arcsine_and_rd(t, f);
    const double crit = normal_quantile(1.0 - alpha);

    AnalysisReport r;
    r.method = Method::BackcalcMargin;
    r.scale_reported = Scale::RiskDifference;
    r.estimate = z.rd.estimate;
    r.se = z.rd.se;
    r.margin_tested = z.rd.estimate - z.z_as * z.rd.se;
    r.alpha_used = alpha;
    r.ci_level = 1.0 - 2.0 * alpha;
    r.ci_low = z.rd.estimate - crit * z.rd.se;
    r.ci_high = z.rd.estimate + crit * z.rd.se;
    r.z = z.z_as;
    r.p = normal_cdf(z.z_as);
    r.non_inferior = r.p < alpha;
    return r;
}

AnalysisReport backcalc_alpha_rd(const TrialData& t, const Frontier& f, double alpha) {
    require_power_stabilising(f);
    require_level(alpha);
    const Zs z = arcsine_and_rd(t, f);
    if (z.z_as == 0.0) {
        fail(ErrorKind::UndefinedRatio, "arcsine Z statistic is zero; level cannot be back-calculated");
    }
    const double margin = f.margin_on_scale(Risk(t.control_risk()), Scale::RiskDifference);
    const double z_rd = (z.rd.estimate - margin) / z.rd.se;
    const double ratio = z_rd / z.z_as;
    // Both statistics compare the same active risk with the same frontier
    // point, so they share a sign up to rounding.
    if (!(ratio > 0.0)) {
        fail(ErrorKind::InconsistentDirection, "RD and arcsine Z statistics point in opposite directions");
    }
    const double crit = normal_quantile(1.0 - alpha) * ratio;
    const double alpha_star = normal_sf(crit);

    AnalysisReport r;
    r.method = Method::BackcalcAlpha;
    r.scale_reported = Scale::RiskDifference;
    r.estimate = z.rd.estimate;
    r.se = z.rd.se;
    r.margin_tested = margin;
    r.alpha_used = alpha_star;
    r.ci_level = 1.0 - 2.0 * alpha_star;
    r.ci_low = z.rd.estimate - crit * z.rd.se;
    r.ci_high = z.rd.estimate + crit * z.rd.se;
    r.z = z.z_as;
    r.p = normal_cdf(z.z_as);
    r.non_inferior = r.p < alpha;
    return r;
}

AnalysisReport analyze_standard(const TrialData& t, const Frontier& f, Scale scale, double alpha) {
    require_level(alpha);
    const EffectEstimate e = estimate_effect(t, scale);
    return from_wald(Method::Standard, e, f.design_margin(scale), alpha, alpha, 1.0 - 2.0 * alpha);
}

double default_epsilon(Scale scale) {
    switch (scale) {
    case Scale::RiskDifference: return 0.0125;
    case Scale::LogRiskRatio: return std::log(1.25);
    case Scale::ArcsineDifference: break;
    }
    fail(ErrorKind::InvalidArgument, "no modification threshold on the arcsine scale");
}

bool exceeds_threshold(double observed_control, double pi_e0, Scale scale, double epsilon) noexcept {
    if (scale == Scale::LogRiskRatio) {
        // log(0) is -inf, which always exceeds a finite threshold.
        return std::abs(std::log(observed_control / pi_e0)) > epsilon;
    }
    return std::abs(observed_control - pi_e0) > epsilon;
}

AnalysisReport conditional_modify_margin(const TrialData& t, const DesignSpec& d, Scale scale, double epsilon,
                                         const AlphaStrategy& strategy) {
    d.validate();
    require_rd_or_rr(scale);
    if (!(epsilon >= 0.0)) {
        fail(ErrorKind::InvalidArgument, "threshold must be non-negative");
    }
    const Frontier f = d.frontier();
    const EffectEstimate e = estimate_effect(t, scale);
    const double p0 = t.control_risk();
    const bool modify = exceeds_threshold(p0, d.pi_e0.value(), scale, epsilon);
    const double margin = modify ? f.margin_on_scale(Risk(p0), scale) : f.design_margin(scale);
    const double alpha = strategy.alpha_at(p0);

    AnalysisReport r = from_wald(Method::ConditionalModify, e, margin, alpha, alpha, 1.0 - 2.0 * d.alpha);
    r.margin_modified = modify;
    return r;
}

std::optional<ConditionalDecision> conditional_decision(const TrialData& t, const Frontier& f, Scale scale,
                                                        double epsilon, const AlphaStrategy& strategy) noexcept {
    EffectEstimate e;
    if (compute_estimate(t, scale, e) != EstimateStatus::Ok) {
        return std::nullopt;
    }
    const double p0 = t.control_risk();
    ConditionalDecision out;
    out.alpha = strategy.alpha_at_or_negative(p0);
    if (out.alpha < 0.0) {
        return std::nullopt;
    }
    out.modified = exceeds_threshold(p0, f.anchor_control().value(), scale, epsilon);
    double margin = 0.0;
    if (out.modified) {
        if (scale == Scale::LogRiskRatio && p0 == 0.0) {
            return std::nullopt;
        }
        margin = effect_on_scale(Risk(p0), f.tolerable_active_risk(Risk(p0)), scale);
    } else {
        margin = f.design_margin(scale);
    }
    out.p = normal_cdf((e.estimate - margin) / e.se);
    return out;
}

}  // namespace nifront
