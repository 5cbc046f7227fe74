#pragma once

namespace nifront {

/// Standard normal CDF, Phi(x).
double normal_cdf(double x) noexcept;

/// Upper tail 1 - Phi(x) without cancellation for large x.
double normal_sf(double x) noexcept;

/// Standard normal quantile, Phi^-1(p), for p in (0, 1).
///
/// Acklam's rational approximation followed by one Halley step against
/// erfc; absolute error is below 1e-12 over (1e-300, 1 - 1e-16).
/// Throws Error(InvalidArgument) outside the open unit interval.
double normal_quantile(double p);

}  // namespace nifront
