#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "nifront/alpha_strategy.hpp"
#include "nifront/design.hpp"
#include "nifront/frontier.hpp"

namespace nifront {

/// Per-arm sizes and event counts. Observed risks are always derived.
class TrialData {
public:
    TrialData(std::int64_t n0, std::int64_t n1, std::int64_t e0, std::int64_t e1);

    std::int64_t n0() const noexcept { return n0_; }
    std::int64_t n1() const noexcept { return n1_; }
    std::int64_t e0() const noexcept { return e0_; }
    std::int64_t e1() const noexcept { return e1_; }

    double control_risk() const noexcept { return static_cast<double>(e0_) / static_cast<double>(n0_); }
    double active_risk() const noexcept { return static_cast<double>(e1_) / static_cast<double>(n1_); }

    /// Same trial with the arms exchanged.
    TrialData swapped() const noexcept { return TrialData(n1_, n0_, e1_, e0_, Unchecked{}); }

    friend bool operator==(const TrialData&, const TrialData&) = default;

private:
    struct Unchecked {};
    TrialData(std::int64_t n0, std::int64_t n1, std::int64_t e0, std::int64_t e1, Unchecked) noexcept
        : n0_(n0), n1_(n1), e0_(e0), e1_(e1) {}

    std::int64_t n0_;
    std::int64_t n1_;
    std::int64_t e0_;
    std::int64_t e1_;
};

struct EffectEstimate {
    Scale scale = Scale::RiskDifference;
    double estimate = 0.0;
    double se = 0.0;
};

/// Wald estimate and standard error on a scale.
/// Throws DegenerateRatio (zero cell, log-RR) or DegenerateVariance (RD se of 0).
EffectEstimate estimate_effect(const TrialData& t, Scale scale);

/// Non-throwing form of estimate_effect used by the simulation engine.
std::optional<EffectEstimate> try_estimate_effect(const TrialData& t, Scale scale) noexcept;

struct WaldResult {
    double z = 0.0;
    double p = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

/// z = (estimate - margin) / se, p = Phi(z), ci = estimate -/+ z_{1-alpha} se.
WaldResult wald_test(const EffectEstimate& e, double margin, double alpha);

enum class Method {
    ArcsineTest,       ///< test and report on the arcsine scale
    BackcalcMargin,    ///< arcsine test, RD report with back-calculated margin
    BackcalcAlpha,     ///< arcsine test, RD report at frontier margin and back-calculated level
    Standard,          ///< fixed margin on the chosen scale
    ConditionalModify, ///< modify the margin only when the control risk moves by more than epsilon
};

std::string_view to_string(Method method) noexcept;

struct AnalysisReport {
    Method method = Method::Standard;
    Scale scale_reported = Scale::RiskDifference;
    double estimate = 0.0;      ///< on the analysis scale (log for RR)
    double se = 0.0;
    double margin_tested = 0.0; ///< on the analysis scale (log for RR)
    double alpha_used = 0.0;    ///< one-sided level the decision is made at
    double ci_level = 0.0;      ///< two-sided level attached to the interval
    double ci_low = 0.0;        ///< reporting scale: RR bounds are exponentiated
    double ci_high = 0.0;
    double z = 0.0;
    double p = 0.0;
    bool margin_modified = false;
    bool non_inferior = false;
};

/// Margin in reporting units (ratio for RR, otherwise unchanged).
double reported_margin(const AnalysisReport& r) noexcept;

/// Test and report on the arcsine scale at the frontier's arcsine margin.
AnalysisReport analyze_arcsine(const TrialData& t, const Frontier& f, double alpha);

/// Arcsine decision, reported on the RD scale at the margin that reproduces Z_AS.
AnalysisReport backcalc_margin_rd(const TrialData& t, const Frontier& f, double alpha);

/// Arcsine decision, reported on the RD scale at the frontier margin for the
/// observed control risk with the level alpha* that reproduces Z_AS.
/// Throws UndefinedRatio when Z_AS == 0 and InconsistentDirection when
/// Z_RD / Z_AS <= 0.
AnalysisReport backcalc_alpha_rd(const TrialData& t, const Frontier& f, double alpha);

/// Fixed-margin Wald test at the frontier's design margin on `scale`.
AnalysisReport analyze_standard(const TrialData& t, const Frontier& f, Scale scale, double alpha);

/// Default modification thresholds: 1.25% (RD) and log(1.25) (RR).
double default_epsilon(Scale scale);

/// True when the observed control risk is farther than epsilon from pi_e0,
/// measured as |p0 - pi_e0| (RD) or |log(p0 / pi_e0)| (RR).
bool exceeds_threshold(double observed_control, double pi_e0, Scale scale, double epsilon) noexcept;

/// Conditionally modify the margin along the power-stabilising frontier
/// through (d.pi_e0, d.pi_f1). Scale must be RD or log-RR. The interval
/// is built at the testing level but labelled with the nominal two-sided
/// level 1 - 2 * d.alpha.
AnalysisReport conditional_modify_margin(const TrialData& t, const DesignSpec& d, Scale scale,
                                         double epsilon, const AlphaStrategy& strategy);

/// Decision-only view of conditional_modify_margin for the simulation
/// engine. Returns nullopt when the analysis is degenerate.
struct ConditionalDecision {
    double p = 0.0;
    double alpha = 0.0;
    bool modified = false;
};
std::optional<ConditionalDecision> conditional_decision(const TrialData& t, const Frontier& f, Scale scale,
                                                        double epsilon,
                                                        const AlphaStrategy& strategy) noexcept;

}  // namespace nifront
