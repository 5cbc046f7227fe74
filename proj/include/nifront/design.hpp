#pragma once

#include <cstdint>

#include "nifront/frontier.hpp"

namespace nifront {

/// Design assumptions for a two-arm binary-outcome non-inferiority trial.
struct DesignSpec {
    Risk pi_e0{0.05};   ///< expected control risk
    Risk pi_e1{0.05};   ///< expected active risk
    Risk pi_f1{0.10};   ///< largest tolerable active risk when control risk is pi_e0
    double ratio = 1.0; ///< allocation n1 / n0
    double alpha = 0.025;  ///< one-sided
    double power = 0.90;

    /// Throws Error(InvalidArgument) if a field is out of range.
    void validate() const;

    /// Power-stabilising frontier through (pi_e0, pi_f1).
    Frontier frontier() const { return Frontier(Shape::PowerStabilising, pi_e0, pi_f1); }
};

struct SampleSize {
    std::int64_t n0 = 0;
    std::int64_t n1 = 0;
    std::int64_t total = 0;

    friend bool operator==(const SampleSize&, const SampleSize&) = default;
};

/// Margin on `scale` between the control anchor and the tolerable risk.
double design_margin(const DesignSpec& d, Scale scale);

/// Unrounded control-arm size from the closed-form formula.
double sample_size_exact(const DesignSpec& d, Scale scale);

/// n0 = ceil(formula), n1 = ceil(ratio * n0).
/// Throws InfeasibleDesign when the expected effect does not sit strictly
/// inside the margin.
SampleSize sample_size(const DesignSpec& d, Scale scale);

/// Same as sample_size with the one-sided level replaced by alpha_used
/// (which may not exceed d.alpha).
SampleSize inflated_design(const DesignSpec& d, Scale scale, double alpha_used);

/// Asymptotic power of the fixed-margin Wald test for a trial of size n when
/// the true risks are (true_pi0, true_pi1). The margin stays at its design
/// value; d.power is ignored.
double power(const DesignSpec& d, Scale scale, const SampleSize& n, Risk true_pi0, Risk true_pi1);

/// Power with a real-valued control arm size (n1 = ratio * n0), used to check
/// the formula inverts exactly.
double power_exact(const DesignSpec& d, Scale scale, double n0, Risk true_pi0, Risk true_pi1);

}  // namespace nifront
