#pragma once

#include <string_view>

namespace nifront {

/// An event probability in [0, 1].
class Risk {
public:
    /// Throws Error(InvalidArgument) outside [0, 1] or for NaN.
    explicit Risk(double value);

    double value() const noexcept { return value_; }

    friend auto operator<=>(const Risk&, const Risk&) = default;

private:
    double value_;
};

/// Effect scales on which a margin can be expressed.
enum class Scale { RiskDifference, LogRiskRatio, ArcsineDifference };

/// Frontier shapes: what is held constant as the control risk moves.
enum class Shape { FixedRiskDifference, FixedRiskRatio, PowerStabilising };

std::string_view to_string(Scale scale) noexcept;
std::string_view to_string(Shape shape) noexcept;

/// asin(sqrt(p)), in [0, pi/2].
double asin_sqrt(Risk p) noexcept;

/// sin(a)^2; inverse of asin_sqrt. Throws for a outside [0, pi/2].
Risk inv_asin_sqrt(double angle);

/// Effect of `active` relative to `control` on a scale: p1 - p0, log(p1/p0)
/// or asin(sqrt(p1)) - asin(sqrt(p0)). Throws DegenerateRatio for a log-ratio
/// with a zero risk.
double effect_on_scale(Risk control, Risk active, Scale scale);

/// Non-inferiority frontier: the largest tolerable active-arm risk for each
/// control-arm risk, anchored at (anchor_control, anchor_tolerable).
class Frontier {
public:
    /// Requires 0 < anchor_control < anchor_tolerable < 1.
    Frontier(Shape shape, Risk anchor_control, Risk anchor_tolerable);

    Shape shape() const noexcept { return shape_; }
    Risk anchor_control() const noexcept { return anchor_control_; }
    Risk anchor_tolerable() const noexcept { return anchor_tolerable_; }

    /// Constant margin on the arcsine scale, asin(sqrt(pi_f1)) - asin(sqrt(pi_e0)).
    double arcsine_margin() const noexcept;

    /// pi*_f1 for a control risk; saturates at 1.
    Risk tolerable_active_risk(Risk control) const;

    /// Margin implied by the frontier at `control`, expressed on `scale`.
    double margin_on_scale(Risk control, Scale scale) const;

    /// margin_on_scale at the anchor, i.e. the design margin.
    double design_margin(Scale scale) const { return margin_on_scale(anchor_control_, scale); }

private:
    Shape shape_;
    Risk anchor_control_;
    Risk anchor_tolerable_;
};

}  // namespace nifront
