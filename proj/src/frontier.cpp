#include "nifront/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nifront/errors.hpp"

namespace nifront {

Risk::Risk(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        fail(ErrorKind::InvalidArgument, "risk must lie in [0, 1], got " + std::to_string(value));
    }
}

std::string_view to_string(Scale scale) noexcept {
    switch (scale) {
    case Scale::RiskDifference: return "rd";
    case Scale::LogRiskRatio: return "rr";
    case Scale::ArcsineDifference: return "as";
    }
    return "?";
}

std::string_view to_string(Shape shape) noexcept {
    switch (shape) {
    case Shape::FixedRiskDifference: return "fixed-rd";
    case Shape::FixedRiskRatio: return "fixed-rr";
    case Shape::PowerStabilising: return "power-stabilising";
    }
    return "?";
}

double asin_sqrt(Risk p) noexcept { return std::asin(std::sqrt(p.value())); }

Risk inv_asin_sqrt(double angle) {
    constexpr double half_pi = std::numbers::pi / 2.0;
    if (!(angle >= 0.0 && angle <= half_pi)) {
        fail(ErrorKind::InvalidArgument, "angle must lie in [0, pi/2]");
    }
    const double s = std::sin(angle);
    return Risk(std::min(s * s, 1.0));
}

double effect_on_scale(Risk control, Risk active, Scale scale) {
    switch (scale) {
    case Scale::RiskDifference:
        return active.value() - control.value();
    case Scale::LogRiskRatio:
        if (control.value() == 0.0 || active.value() == 0.0) {
            fail(ErrorKind::DegenerateRatio, "log risk ratio undefined with a zero risk");
        }
        return std::log(active.value() / control.value());
    case Scale::ArcsineDifference:
        return asin_sqrt(active) - asin_sqrt(control);
    }
    return 0.0;
}

Frontier::Frontier(Shape shape, Risk anchor_control, Risk anchor_tolerable)
    : shape_(shape), anchor_control_(anchor_control), anchor_tolerable_(anchor_tolerable) {
    const double c = anchor_control.value();
    const double t = anchor_tolerable.value();
    if (!(c > 0.0 && c < 1.0 && t > 0.0 && t < 1.0)) {
        fail(ErrorKind::InvalidArgument, "frontier anchors must lie strictly inside (0, 1)");
    }
    if (!(t > c)) {
        fail(ErrorKind::InvalidArgument, "tolerable anchor risk must exceed the control anchor");
    }
}

double Frontier::arcsine_margin() const noexcept {
    return asin_sqrt(anchor_tolerable_) - asin_sqrt(anchor_control_);
}

Risk Frontier::tolerable_active_risk(Risk control) const {
    const double p0 = control.value();
    if (p0 == anchor_control_.value()) {
        return anchor_tolerable_;
    }
    switch (shape_) {
    case Shape::FixedRiskDifference:
        return Risk(std::min(p0 + (anchor_tolerable_.value() - anchor_control_.value()), 1.0));
    case Shape::FixedRiskRatio:
        return Risk(std::min(p0 * (anchor_tolerable_.value() / anchor_control_.value()), 1.0));
    case Shape::PowerStabilising: {
        const double angle = std::min(asin_sqrt(control) + arcsine_margin(), std::numbers::pi / 2.0);
        return inv_asin_sqrt(angle);
    }
    }
    return control;
}

double Frontier::margin_on_scale(Risk control, Scale scale) const {
    if (scale == Scale::LogRiskRatio && control.value() == 0.0) {
        fail(ErrorKind::DegenerateRatio, "log risk ratio margin undefined at zero control risk");
    }
    return effect_on_scale(control, tolerable_active_risk(control), scale);
}

}  // namespace nifront
