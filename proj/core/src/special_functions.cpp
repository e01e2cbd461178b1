#include "tzone/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace tzone::special {

namespace {

// exp(x^2) with the rounding error of x*x folded back in.
double exp_square(double x) {
    const double x2 = x * x;
    const double residual = std::fma(x, x, -x2);
    return std::exp(x2) * (1.0 + residual);
}

// Lentz evaluation of erfcx(x) = (1/sqrt(pi)) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))).
double erfcx_continued_fraction(double x) {
    constexpr double tiny = 1e-300;
    double f = x;
    double c = x;
    double d = 0.0;
    for (int k = 1; k < 200; ++k) {
        const double a = 0.5 * k;
        d = x + a * d;
        if (std::abs(d) < tiny) d = tiny;
        c = x + a / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::numbers::inv_sqrtpi / f;
}

}  // namespace

double erfcx(double x) {
    if (std::isnan(x)) return x;
    if (x < 10.0) {
        if (x < -26.7) return std::numeric_limits<double>::infinity();
        return exp_square(x) * std::erfc(x);
    }
    return erfcx_continued_fraction(x);
}

double log_erfc(double x) {
    if (x < 1.0) return std::log(std::erfc(x));
    return std::log(erfcx(x)) - x * x;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double log_add_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace tzone::special
