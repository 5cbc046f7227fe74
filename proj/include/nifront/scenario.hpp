#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "nifront/alpha_strategy.hpp"
#include "nifront/design.hpp"

namespace nifront {

/// Design parameters of one simulation scenario on one analysis scale.
struct ScenarioSpec {
    std::string name = "base";
    DesignSpec design;
    Scale scale = Scale::RiskDifference;

    /// Stable identifier mixed into the random streams (FNV-1a of name and scale).
    std::uint64_t id() const noexcept;
};

/// Presets: "base" and "alt1".."alt7". Throws InvalidArgument otherwise.
ScenarioSpec scenario_preset(std::string_view name, Scale scale);

/// Names of all presets in table order.
const std::vector<std::string>& scenario_preset_names();

/// The four analysis procedures compared in the simulations.
enum class ProcedureTag { DoNotModify, ModifyLarge, ModifyMedium, ModifySmall };

std::string_view to_string(ProcedureTag tag) noexcept;

struct Procedure {
    ProcedureTag tag = ProcedureTag::ModifySmall;
    AlphaStrategy alpha_strategy = AlphaStrategy::nominal(0.025);

    /// Modification threshold on `scale`; +inf for DoNotModify.
    double epsilon(Scale scale) const;
};

enum class Hypothesis { Null, Alternative };

std::string_view to_string(Hypothesis h) noexcept;

/// Default grid: 40 control risks 0.005, 0.010, ..., 0.200.
std::vector<double> default_grid();

/// Inclusive arithmetic grid start:stop:step. Throws InvalidArgument for an
/// empty, non-finite or out-of-[0,1] grid.
std::vector<double> make_grid(double start, double stop, double step);

}  // namespace nifront
