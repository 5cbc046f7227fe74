#include <cmath>
#include <string>
#include <vector>

#include "nifront/errors.hpp"
#include "nifront/sim.hpp"

namespace nifront {

namespace {

std::vector<double> binomial_pmf(std::int64_t n, double p) {
    std::vector<double> pmf(static_cast<std::size_t>(n + 1), 0.0);
    if (p <= 0.0) {
        pmf.front() = 1.0;
        return pmf;
    }
    if (p >= 1.0) {
        pmf.back() = 1.0;
        return pmf;
    }
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    const double lnf = std::lgamma(static_cast<double>(n) + 1.0);
    for (std::int64_t k = 0; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        const double log_choose = lnf - std::lgamma(kd + 1.0) - std::lgamma(static_cast<double>(n - k) + 1.0);
        pmf[static_cast<std::size_t>(k)] = std::exp(log_choose + kd * lp + static_cast<double>(n - k) * lq);
    }
    return pmf;
}

}  // namespace

double exact_rejection_probability(Risk pi0, Risk pi1, const SampleSize& n, const Decision& decide,
                                   std::int64_t max_tables) {
    if (n.n0 <= 0 || n.n1 <= 0) {
        fail(ErrorKind::InvalidArgument, "sample size must be positive");
    }
    const double tables = static_cast<double>(n.n0 + 1) * static_cast<double>(n.n1 + 1);
    if (tables > static_cast<double>(max_tables)) {
        fail(ErrorKind::TooLargeToEnumerate,
             std::to_string(static_cast<long long>(tables)) + " outcome tables exceed the limit of " +
                 std::to_string(max_tables));
    }
    const std::vector<double> f0 = binomial_pmf(n.n0, pi0.value());
    const std::vector<double> f1 = binomial_pmf(n.n1, pi1.value());

    double total = 0.0;
    for (std::int64_t e0 = 0; e0 <= n.n0; ++e0) {
        const double w0 = f0[static_cast<std::size_t>(e0)];
        if (w0 == 0.0) {
            continue;
        }
        double row = 0.0;
        for (std::int64_t e1 = 0; e1 <= n.n1; ++e1) {
            const double w1 = f1[static_cast<std::size_t>(e1)];
            if (w1 != 0.0 && decide(TrialData(n.n0, n.n1, e0, e1))) {
                row += w1;
            }
        }
        total += w0 * row;
    }
    return total;
}

}  // namespace nifront
