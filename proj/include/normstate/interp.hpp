#pragma once

#include <Eigen/Dense>

namespace normstate {

/// Monotone cubic (Fritsch-Carlson) interpolant on strictly increasing knots.
/// Preserves monotone data and positivity of decreasing positive profiles.
class PchipInterpolant {
  public:
    PchipInterpolant() = default;
    PchipInterpolant(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y);

    /// Evaluate at xq; data is extended by the boundary values outside [x0, xn].
    double operator()(double xq) const;

  private:
    Eigen::ArrayXd x_, y_, d_;  // knots, values, knot slopes
};

}  // namespace normstate
