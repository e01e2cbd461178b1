#include "tzone/closed_form.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tzone/special_functions.hpp"

namespace tzone {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);

std::string point(double t, double z) {
    return "(" + std::to_string(t) + ", " + std::to_string(z) + ")";
}

}  // namespace

ClosedForm::ClosedForm(const ModelParams& params)
    : params_(validate(params)), beta_(params_.beta()) {}

void ClosedForm::check_psi_domain(double t, double x) const {
    if (!(t > 0.0) || !(x >= 0.0)) {
        throw DomainError("psi requires t > 0 and x >= 0, got " + point(t, x));
    }
}

void ClosedForm::check_value_domain(double t, double z, bool allow_zero_time) const {
    const bool t_ok = allow_zero_time ? t >= 0.0 : t > 0.0;
    if (!t_ok || !(t <= params_.horizon) || !(z >= params_.c)) {
        throw DomainError("point " + point(t, z) + " outside the value-function domain");
    }
}

ClosedForm::Terms ClosedForm::terms(double t, double x) const {
    const double s = params_.sigma * std::sqrt(t);
    const double a = x / (s * kSqrt2);
    const double b = a - beta_ * s / kSqrt2;

    Terms out{};
    out.erf_a = std::erf(a);
    out.log_gauss = -a * a;
    if (b >= 0.0) {
        // exp(-beta x + beta^2 s^2/2 - b^2) = exp(-a^2)
        out.log_tail = out.log_gauss + std::log(special::erfcx(b));
    } else {
        out.log_tail = -beta_ * x + 0.5 * beta_ * beta_ * s * s + std::log(std::erfc(b));
    }

    if (b >= 0.0) {
        // psi - 1 = exp(-a^2) (erfcx(b) - erfcx(a)) in [0, 1]; erf(a) would round to 1 far out
        out.log_psi = std::log1p(std::exp(out.log_gauss) * (special::erfcx(b) - special::erfcx(a)));
    } else if (out.erf_a > 0.0) {
        out.log_psi = special::log_add_exp(std::log(out.erf_a), out.log_tail);
    } else {
        // x <= 0: erf(a) <= 0 and the tail dominates.
        out.log_psi = out.log_tail + std::log1p(out.erf_a * std::exp(-out.log_tail));
    }
    return out;
}

double ClosedForm::psi(double t, double x) const {
    check_psi_domain(t, x);
    return std::exp(terms(t, x).log_psi);
}

double ClosedForm::log_psi(double t, double x) const {
    check_psi_domain(t, x);
    return terms(t, x).log_psi;
}

double ClosedForm::dpsi_dx(double t, double x) const {
    check_psi_domain(t, x);
    return -beta_ * std::exp(terms(t, x).log_tail);
}

double ClosedForm::dpsi_dt(double t, double x) const {
    check_psi_domain(t, x);
    const Terms tm = terms(t, x);
    const double sigma = params_.sigma;
    return beta_ * sigma / (kSqrt2Pi * std::sqrt(t)) * std::exp(tm.log_gauss) +
           0.5 * beta_ * beta_ * sigma * sigma * std::exp(tm.log_tail);
}

double ClosedForm::d2psi_dx2(double t, double x) const {
    check_psi_domain(t, x);
    const Terms tm = terms(t, x);
    const double sigma = params_.sigma;
    return beta_ * beta_ * std::exp(tm.log_tail) +
           2.0 * beta_ / (sigma * kSqrt2Pi * std::sqrt(t)) * std::exp(tm.log_gauss);
}

double ClosedForm::value_u(double t, double z) const {
    check_value_domain(t, z, true);
    if (t == 0.0) return 0.0;
    return terms(t, z - params_.c).log_psi / beta_;
}

double ClosedForm::du_dz(double t, double z) const {
    check_value_domain(t, z, false);
    const double x = z - params_.c;
    if (x == 0.0) return -1.0;  // dpsi/dx(t,0) = -beta psi(t,0)
    // -tail / (erf(a) + tail). Direct evaluation while exp(E) * erfc(b)
    // is representable; this is the simulator's hot path.
    const double s = params_.sigma * std::sqrt(t);
    const double a = x / (s * kSqrt2);
    const double b = a - beta_ * s / kSqrt2;
    const double exponent = -beta_ * x + 0.5 * beta_ * beta_ * s * s;
    if (exponent < 700.0 && exponent > -700.0 && b < 26.0) {
        const double tail = std::exp(exponent) * std::erfc(b);
        return -tail / (std::erf(a) + tail);
    }
    const Terms tm = terms(t, x);
    if (tm.log_tail < -700.0) return -std::exp(tm.log_tail) / tm.erf_a;
    return -1.0 / (1.0 + tm.erf_a * std::exp(-tm.log_tail));
}

double ClosedForm::du_dt(double t, double z) const {
    check_value_domain(t, z, false);
    const Terms tm = terms(t, z - params_.c);
    const double sigma = params_.sigma;
    return sigma / (kSqrt2Pi * std::sqrt(t)) * std::exp(tm.log_gauss - tm.log_psi) +
           0.5 * beta_ * sigma * sigma * std::exp(tm.log_tail - tm.log_psi);
}

double ClosedForm::d2u_dz2(double t, double z) const {
    check_value_domain(t, z, false);
    const double x = z - params_.c;
    const Terms tm = terms(t, x);
    const double sigma = params_.sigma;
    // psi_xx / (beta psi) - beta (dU/dz)^2
    const double psi_xx_over_psi =
        beta_ * beta_ * std::exp(tm.log_tail - tm.log_psi) +
        2.0 * beta_ / (sigma * kSqrt2Pi * std::sqrt(t)) * std::exp(tm.log_gauss - tm.log_psi);
    const double uz = x == 0.0 ? -1.0 : -std::exp(tm.log_tail - tm.log_psi);
    return psi_xx_over_psi / beta_ - beta_ * uz * uz;
}

double ClosedForm::v_star(double t, double z) const {
    if (!(t >= 0.0) || !(t < params_.horizon) || !(z >= params_.c)) {
        throw DomainError("v_star requires 0 <= t < T and z >= c, got " + point(t, z));
    }
    return params_.speed_scale() * du_dz(params_.horizon - t, z);
}

double ClosedForm::default_z_max() const {
    return params_.c + 6.0 * params_.sigma * std::sqrt(params_.horizon);
}

}  // namespace tzone
