#pragma once

#include "tzone/model.hpp"

namespace tzone {

/// Exact value function of the singular (local-time) problem.
///
/// With x = z - c, s = sigma*sqrt(t), a = x/(s*sqrt2), b = a - beta*s/sqrt2:
///
///   psi(t,x) = erf(a) + exp(-beta x + beta^2 s^2/2) * erfc(b)
///   U(t,z)   = log(psi(t, z-c)) / beta
///   v*(t,z)  = gamma/(2 kappa) * dU/dz(T-t, z)
///
/// The second term of psi is carried as a logarithm: for b >= 0 it equals
/// exp(-a^2) * erfcx(b), otherwise the exponent is kept separate from
/// erfc(b) in (1, 2]. Nothing overflows for any finite parameters.
class ClosedForm {
public:
    explicit ClosedForm(const ModelParams& params);

    const ModelParams& params() const { return params_; }

    /// psi and its partial derivatives. Require t > 0, x >= 0.
    double psi(double t, double x) const;
    double log_psi(double t, double x) const;
    double dpsi_dx(double t, double x) const;
    double dpsi_dt(double t, double x) const;
    double d2psi_dx2(double t, double x) const;

    /// U(t,z) on [0,T] x [c, inf); exactly 0 at t = 0.
    double value_u(double t, double z) const;

    /// dU/dz on (0,T] x [c, inf). Exactly -1 at z = c.
    double du_dz(double t, double z) const;
    double du_dt(double t, double z) const;
    double d2u_dz2(double t, double z) const;

    /// Optimal speed on [0,T) x [c, inf), in [-gamma/(2 kappa), 0).
    double v_star(double t, double z) const;

    /// Default truncation for grid checks: c + 6 sigma sqrt(T).
    double default_z_max() const;

private:
    struct Terms {
        double erf_a;      // erf(a)
        double log_gauss;  // -a^2
        double log_tail;   // log of exp(-beta x + beta^2 s^2/2) * erfc(b)
        double log_psi;
    };
    Terms terms(double t, double x) const;
    void check_psi_domain(double t, double x) const;
    void check_value_domain(double t, double z, bool allow_zero_time) const;

    ModelParams params_;
    double beta_;
};

}  // namespace tzone
