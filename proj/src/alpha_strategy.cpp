#include "nifront/alpha_strategy.hpp"

#include <algorithm>
#include <string>

#include "nifront/errors.hpp"

namespace nifront {

namespace {

void check_level(double alpha) {
    if (!(alpha > 0.0 && alpha < 0.5)) {
        fail(ErrorKind::InvalidArgument, "alpha must lie in (0, 0.5), got " + std::to_string(alpha));
    }
}

}  // namespace

AlphaStrategy AlphaStrategy::nominal(double alpha) {
    check_level(alpha);
    return AlphaStrategy(Kind::Nominal, {{0.0, alpha}});
}

AlphaStrategy AlphaStrategy::reduced_fixed(double alpha) {
    check_level(alpha);
    return AlphaStrategy(Kind::ReducedFixed, {{0.0, alpha}});
}

AlphaStrategy AlphaStrategy::lookup(std::vector<Breakpoint> table) {
    if (table.empty()) {
        fail(ErrorKind::InvalidArgument, "lookup table is empty");
    }
    for (std::size_t i = 0; i < table.size(); ++i) {
        check_level(table[i].alpha);
        if (!(table[i].from >= 0.0 && table[i].from <= 1.0)) {
            fail(ErrorKind::InvalidArgument, "lookup breakpoints must lie in [0, 1]");
        }
        if (i > 0 && !(table[i].from > table[i - 1].from)) {
            fail(ErrorKind::InvalidArgument, "lookup breakpoints must be strictly increasing");
        }
    }
    return AlphaStrategy(Kind::Lookup, std::move(table));
}

double AlphaStrategy::alpha_at_or_negative(double observed_control) const noexcept {
    if (kind_ != Kind::Lookup) {
        return table_.front().alpha;
    }
    auto it = std::upper_bound(table_.begin(), table_.end(), observed_control,
                               [](double x, const Breakpoint& b) { return x < b.from; });
    if (it == table_.begin()) {
        return -1.0;
    }
    return std::prev(it)->alpha;
}

double AlphaStrategy::alpha_at(double observed_control) const {
    const double a = alpha_at_or_negative(observed_control);
    if (a < 0.0) {
        fail(ErrorKind::UncoveredLookup,
             "lookup table does not cover observed control risk " + std::to_string(observed_control));
    }
    return a;
}

AlphaStrategy base_case_lookup() { return AlphaStrategy::lookup({{0.0, 0.01}, {0.04, 0.015}}); }

}  // namespace nifront
