#include "nifront/design.hpp"

#include <cmath>
#include <string>

#include "nifront/errors.hpp"
#include "nifront/normal.hpp"

namespace nifront {

namespace {

// Variance of the effect estimate scaled to one control patient, with the
// active arm carrying n1 = r * n0 patients.
double unit_variance(double p0, double p1, double r, Scale scale) {
    switch (scale) {
    case Scale::RiskDifference:
        return p0 * (1.0 - p0) + p1 * (1.0 - p1) / r;
    case Scale::LogRiskRatio:
        if (p0 == 0.0 || p1 == 0.0) {
            fail(ErrorKind::DegenerateRatio, "log risk ratio variance undefined with a zero risk");
        }
        return (1.0 - p0) / p0 + (1.0 - p1) / (r * p1);
    case Scale::ArcsineDifference:
        return 0.25 + 0.25 / r;
    }
    return 0.0;
}

double formula_n0(const DesignSpec& d, Scale scale, double alpha) {
    const double margin = design_margin(d, scale);
    const double gap = margin - effect_on_scale(d.pi_e0, d.pi_e1, scale);
    if (!(gap > 0.0)) {
        fail(ErrorKind::InfeasibleDesign, "expected effect does not lie inside the margin on scale " +
                                              std::string(to_string(scale)));
    }
    const double z = normal_quantile(1.0 - alpha) + normal_quantile(d.power);
    const double v = unit_variance(d.pi_e0.value(), d.pi_e1.value(), d.ratio, scale);
    if (!(v > 0.0)) {
        fail(ErrorKind::InfeasibleDesign, "expected risks give zero variance");
    }
    return z * z * v / (gap * gap);
}

SampleSize round_up(double n0_real, double ratio) {
    SampleSize n;
    n.n0 = static_cast<std::int64_t>(std::ceil(n0_real));
    n.n1 = static_cast<std::int64_t>(std::ceil(ratio * static_cast<double>(n.n0)));
    n.total = n.n0 + n.n1;
    return n;
}

}  // namespace

void DesignSpec::validate() const {
    if (!(ratio > 0.0) || !std::isfinite(ratio)) {
        fail(ErrorKind::InvalidArgument, "allocation ratio must be positive");
    }
    if (!(alpha > 0.0 && alpha < 0.5)) {
        fail(ErrorKind::InvalidArgument, "one-sided alpha must lie in (0, 0.5)");
    }
    if (!(power >= 0.5 && power < 1.0)) {
        fail(ErrorKind::InvalidArgument, "power must lie in [0.5, 1)");
    }
    // Anchor checks live in the frontier constructor.
    (void)frontier();
}

double design_margin(const DesignSpec& d, Scale scale) {
    return effect_on_scale(d.pi_e0, d.pi_f1, scale);
}

double sample_size_exact(const DesignSpec& d, Scale scale) {
    d.validate();
    return formula_n0(d, scale, d.alpha);
}

SampleSize sample_size(const DesignSpec& d, Scale scale) {
    return round_up(sample_size_exact(d, scale), d.ratio);
}

SampleSize inflated_design(const DesignSpec& d, Scale scale, double alpha_used) {
    d.validate();
    if (!(alpha_used > 0.0 && alpha_used <= d.alpha)) {
        fail(ErrorKind::InvalidArgument, "inflated design needs 0 < alpha_used <= design alpha");
    }
    return round_up(formula_n0(d, scale, alpha_used), d.ratio);
}

double power_exact(const DesignSpec& d, Scale scale, double n0, Risk true_pi0, Risk true_pi1) {
    if (!(n0 > 0.0)) {
        fail(ErrorKind::InvalidArgument, "sample size must be positive");
    }
    const double gap = design_margin(d, scale) - effect_on_scale(true_pi0, true_pi1, scale);
    const double v = unit_variance(true_pi0.value(), true_pi1.value(), d.ratio, scale);
    if (!(v > 0.0)) {
        fail(ErrorKind::DegenerateVariance, "true risks give zero variance");
    }
    return normal_cdf(gap / std::sqrt(v / n0) - normal_quantile(1.0 - d.alpha));
}

double power(const DesignSpec& d, Scale scale, const SampleSize& n, Risk true_pi0, Risk true_pi1) {
    if (n.n0 <= 0 || n.n1 <= 0) {
        fail(ErrorKind::InvalidArgument, "sample size must be positive");
    }
    const double gap = design_margin(d, scale) - effect_on_scale(true_pi0, true_pi1, scale);
    const double p0 = true_pi0.value();
    const double p1 = true_pi1.value();
    const double n0 = static_cast<double>(n.n0);
    const double n1 = static_cast<double>(n.n1);
    double var = 0.0;
    switch (scale) {
    case Scale::RiskDifference:
        var = p0 * (1.0 - p0) / n0 + p1 * (1.0 - p1) / n1;
        break;
    case Scale::LogRiskRatio:
        var = (1.0 - p0) / (n0 * p0) + (1.0 - p1) / (n1 * p1);
        break;
    case Scale::ArcsineDifference:
        var = 0.25 / n0 + 0.25 / n1;
        break;
    }
    if (!(var > 0.0)) {
        fail(ErrorKind::DegenerateVariance, "true risks give zero variance");
    }
    return normal_cdf(gap / std::sqrt(var) - normal_quantile(1.0 - d.alpha));
}

}  // namespace nifront
