#pragma once

namespace tzone::special {

/// Scaled complementary error function exp(x^2) * erfc(x).
///
/// For x < 10 the product is formed from std::erfc with x^2 split into its
/// rounded value and the exact rounding residual, so the exponential adds
/// no more than a couple of ulps. For x >= 10 the Laplace continued
/// fraction is used; it converges in a handful of terms there. Overflows
/// to +inf for x < about -26.6.
double erfcx(double x);

/// log(erfc(x)), finite for every finite x.
double log_erfc(double x);

/// Standard normal CDF.
double normal_cdf(double x);

/// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b);

}  // namespace tzone::special
