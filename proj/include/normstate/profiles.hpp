#pragma once

#include <string>
#include <vector>

#include "normstate/field.hpp"
#include "normstate/interp.hpp"
#include "normstate/ops.hpp"

namespace normstate {

/// Result of the radial shooting solve of  -w'' - (N-1)/r w' + w = w^{p-1}.
///
/// `profile` and `profile_derivative` are the decaying solution transplanted
/// onto the requested grid; the derivative comes from the integrator itself,
/// not from finite differences, so the reported residuals are limited by the
/// ODE tolerance rather than by the difference stencil.
struct ShootResult {
    Field profile;
    Field profile_derivative;
    double initial_height = 0.0;     // w(0)
    double nehari_residual = 0.0;    // relative
    double pohozaev_residual = 0.0;  // relative

    // dense integrator samples for evaluation at arbitrary radii; the second
    // derivatives come from the equation itself, so the interpolation between
    // samples is quintic Hermite (smooth enough for stencil residual checks)
    std::vector<double> sample_r, sample_w, sample_dw, sample_ddw;
    double tail_r = 0.0, tail_c = 0.0;  // w ~ tail_c r^{-(N-1)/2} e^{-r} past tail_r
    int dim = 3;

    double eval(double r) const;
    double eval_derivative(double r) const;
};

/// Shooting solve for the positive decaying profile. Bisection on w(0) over
/// the bracket [1, 50]: trajectories that cross zero have w(0) too large,
/// trajectories that turn upward before crossing have w(0) too small.
/// `tol` is the bisection width on w(0).
ShootResult solve_scalar_profile(int dim, double p, const GridPtr& grid, double tol = 1e-13);

/// Extremal family of the critical embedding,
/// U_eps(x) = (N(N-2))^{(N-2)/4} (eps / (eps^2 + |x|^2))^{(N-2)/2}.
Field bubble(int dim, double eps, const GridPtr& grid);

/// Pointwise values of U_eps and its radial derivative (closed form).
double bubble_value(int dim, double eps, double r);
double bubble_derivative(int dim, double eps, double r);

struct SobolevEstimate {
    double value = 0.0;
    double truncation_error = 0.0;  // relative, estimated from an R-doubling probe
};

/// Numerical best-embedding constant: the critical quotient of U_1 on the
/// given grid. Throws resolution_error if the R-doubling probe shows the
/// truncation tail is not converged to `tol` (relative).
SobolevEstimate sobolev_constant(int dim, const GridPtr& grid, double tol = 1e-2);

/// Compactly supported test profile eta_eps = phi * U_eps, with a fixed C^2
/// ramp phi (1 on [0,1], 0 past 2).
Field cutoff_bubble(int dim, double eps, const GridPtr& grid);
double cutoff_value(double r);

/// Two-column CSV export (r,value); RFC 4180 line endings.
void write_profile_csv(const Field& u, const std::string& path);
void write_pair_csv(const FieldPair& uv, const std::string& path);

}  // namespace normstate
