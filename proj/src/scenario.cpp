#include "nifront/scenario.hpp"

#include <cmath>
#include <limits>

#include "nifront/errors.hpp"

namespace nifront {

std::uint64_t ScenarioSpec::id() const noexcept {
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&h](std::string_view s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 1099511628211ull;
        }
    };
    mix(name);
    mix("/");
    mix(to_string(scale));
    return h;
}

namespace {

struct PresetRow {
    const char* name;
    double pi_e0;
    double pi_e1_factor;  // pi_e1 = factor * pi_e0
    double pi_f1;
    double ratio;
    double power;
};

constexpr PresetRow kPresets[] = {
    {"base", 0.05, 1.0, 0.10, 1.0, 0.90},  {"alt1", 0.10, 1.0, 0.15, 1.0, 0.90},
    {"alt2", 0.05, 0.5, 0.10, 1.0, 0.90},  {"alt3", 0.05, 1.0, 0.075, 1.0, 0.90},
    {"alt4", 0.05, 1.0, 0.15, 1.0, 0.90},  {"alt5", 0.05, 1.0, 0.10, 0.5, 0.90},
    {"alt6", 0.05, 1.0, 0.10, 2.0, 0.90},  {"alt7", 0.05, 1.0, 0.10, 1.0, 0.80},
};

}  // namespace

ScenarioSpec scenario_preset(std::string_view name, Scale scale) {
    for (const PresetRow& row : kPresets) {
        if (name == row.name) {
            ScenarioSpec s;
            s.name = row.name;
            s.scale = scale;
            s.design.pi_e0 = Risk(row.pi_e0);
            s.design.pi_e1 = Risk(row.pi_e0 * row.pi_e1_factor);
            s.design.pi_f1 = Risk(row.pi_f1);
            s.design.ratio = row.ratio;
            s.design.power = row.power;
            s.design.alpha = 0.025;
            return s;
        }
    }
    fail(ErrorKind::InvalidArgument, "unknown scenario preset '" + std::string(name) + "'");
}

const std::vector<std::string>& scenario_preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const PresetRow& row : kPresets) {
            v.emplace_back(row.name);
        }
        return v;
    }();
    return names;
}

std::string_view to_string(ProcedureTag tag) noexcept {
    switch (tag) {
    case ProcedureTag::DoNotModify: return "none";
    case ProcedureTag::ModifyLarge: return "large";
    case ProcedureTag::ModifyMedium: return "medium";
    case ProcedureTag::ModifySmall: return "small";
    }
    return "?";
}

std::string_view to_string(Hypothesis h) noexcept { return h == Hypothesis::Null ? "null" : "alt"; }

double Procedure::epsilon(Scale scale) const {
    if (scale == Scale::ArcsineDifference) {
        fail(ErrorKind::InvalidArgument, "simulation procedures run on the RD or log-RR scale");
    }
    const bool rd = scale == Scale::RiskDifference;
    switch (tag) {
    case ProcedureTag::DoNotModify: return std::numeric_limits<double>::infinity();
    case ProcedureTag::ModifyLarge: return rd ? 0.05 : std::log(2.0);
    case ProcedureTag::ModifyMedium: return rd ? 0.025 : std::log(1.5);
    case ProcedureTag::ModifySmall: return rd ? 0.0125 : std::log(1.25);
    }
    return 0.0;
}

std::vector<double> make_grid(double start, double stop, double step) {
    if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step) || !(step > 0.0) ||
        stop < start || start < 0.0 || stop > 1.0) {
        fail(ErrorKind::InvalidArgument, "grid must satisfy 0 <= start <= stop <= 1 and step > 0");
    }
    // Index-based, then snapped to 12 decimals so that 0.05 + 2 * 0.05 is 0.15.
    const auto count = static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 1000000) {
        fail(ErrorKind::InvalidArgument, "grid has too many points");
    }
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count));
    for (std::int64_t k = 0; k < count; ++k) {
        const double x = std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12;
        grid.push_back(std::min(x, 1.0));
    }
    return grid;
}

std::vector<double> default_grid() {
    std::vector<double> grid;
    for (int k = 1; k <= 40; ++k) {
        grid.push_back(static_cast<double>(k) / 200.0);
    }
    return grid;
}

}  // namespace nifront
