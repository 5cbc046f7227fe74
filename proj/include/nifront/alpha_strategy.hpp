#pragma once

#include <vector>

namespace nifront {

/// How the one-sided testing level is chosen once the control risk is seen.
class AlphaStrategy {
public:
    enum class Kind { Nominal, ReducedFixed, Lookup };

    /// One row of a lookup table: alpha applies for observed control risk
    /// in [from, next.from).
    struct Breakpoint {
        double from = 0.0;
        double alpha = 0.025;

        friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
    };

    static AlphaStrategy nominal(double alpha);
    static AlphaStrategy reduced_fixed(double alpha);
    /// Breakpoints must have strictly increasing `from` values in [0, 1].
    static AlphaStrategy lookup(std::vector<Breakpoint> table);

    Kind kind() const noexcept { return kind_; }
    const std::vector<Breakpoint>& table() const noexcept { return table_; }

    /// Level to test at for an observed control risk. Throws
    /// Error(UncoveredLookup) when the table starts above `observed_control`.
    double alpha_at(double observed_control) const;

    /// Non-throwing variant for hot loops; returns a negative value when the
    /// table does not cover the input.
    double alpha_at_or_negative(double observed_control) const noexcept;

    friend bool operator==(const AlphaStrategy&, const AlphaStrategy&) = default;

private:
    AlphaStrategy(Kind kind, std::vector<Breakpoint> table) : kind_(kind), table_(std::move(table)) {}

    Kind kind_;
    std::vector<Breakpoint> table_;
};

/// Base-case risk-difference lookup: 1% below an observed control risk of
/// 4%, 1.5% from there on.
AlphaStrategy base_case_lookup();

}  // namespace nifront
