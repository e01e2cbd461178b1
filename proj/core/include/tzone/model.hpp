#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <variant>

#include "tzone/surface.hpp"

namespace tzone {

/// Market and impact constants of the target-zone trading problem.
///
/// The exchange rate S_t lives on [c, inf) and is pushed back at c by the
/// central bank. A trader moving at speed v shifts the rate permanently by
/// gamma * v dt and pays kappa * v^2 dt in slippage.
struct ModelParams {
    double sigma = 1.0;    ///< volatility, price units per sqrt(time)
    double gamma = 1.0;    ///< permanent impact per unit inventory
    double kappa = 1.0;    ///< slippage per squared speed per time
    double c = 0.0;        ///< barrier level
    double s0 = 0.5;       ///< initial exchange rate, s0 >= c
    double horizon = 1.0;  ///< trading horizon T

    /// gamma^2 / (2 kappa sigma^2). Derived, never stored.
    double beta() const { return gamma * gamma / (2.0 * kappa * sigma * sigma); }

    /// Speed scale gamma / (2 kappa); v* = speed_scale() * dU/dz.
    double speed_scale() const { return gamma / (2.0 * kappa); }
};

/// Returns `params` unchanged or throws std::invalid_argument naming the
/// first violated constraint.
ModelParams validate(const ModelParams& params);

/// Thrown when a strategy or closed-form quantity is evaluated outside
/// [0,T] x [c, inf).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

namespace strategy {

struct Zero {};

struct Constant {
    double speed = 0.0;
};

/// v*(t,z) = scale * gamma/(2 kappa) * dU/dz(T-t, z). scale != 1 gives the
/// perturbed strategies used in suboptimality comparisons.
struct ClosedFormOptimal {
    double scale = 1.0;
};

/// v*_eps(t,z) = gamma/(2 kappa) * dU^eps/dz(T-t, z) read from a solved
/// U^eps surface whose rows are indexed by time-to-go.
struct RegularizedOptimal {
    double eps = 0.0;
    std::shared_ptr<const Surface> value_surface;
};

/// Speeds tabulated over calendar time (rows) and price (columns).
/// Bilinear, clamped to the grid hull.
struct Tabulated {
    std::shared_ptr<const Surface> speeds;
};

}  // namespace strategy

using Strategy = std::variant<strategy::Zero, strategy::Constant, strategy::ClosedFormOptimal,
                              strategy::RegularizedOptimal, strategy::Tabulated>;

/// Trading speed v(t, z). Throws DomainError outside [0,T] x [c, inf).
double eval_strategy(const Strategy& s, const ModelParams& params, double t, double z);

/// Constant C with |v(t,z)| <= C (1 + |z|) on the whole domain.
///
///   Zero                 0
///   Constant(a)          |a|
///   ClosedFormOptimal    |scale| * gamma/(2 kappa)   (|dU/dz| <= 1)
///   RegularizedOptimal   gamma/(2 kappa) * max |dU^eps/dz| over the surface
///   Tabulated            max |v| over the table
double growth_constant(const Strategy& s, const ModelParams& params);

std::string strategy_name(const Strategy& s);

}  // namespace tzone
