#pragma once

#include <Eigen/Dense>

#include "normstate/field.hpp"

namespace normstate {

/// Trapezoid quadrature of a sampled radial integrand:
/// surface_factor * int_0^R f(r) r^{dim-1} dr.
double integrate_radial(const RadialGrid& g, const Eigen::ArrayXd& f);

/// ||u||_2^2
double mass_sq(const Field& u);

/// Sampled derivative u'(r_i): three-point centered differences on the
/// (possibly nonuniform) grid, one-sided at both ends.
Eigen::ArrayXd derivative(const Field& u);

/// ||grad u||_2^2 computed from the centered-difference derivative.
double grad_sq(const Field& u);

/// ||u||_p^p
double lp_norm_p(const Field& u, double p);

/// int |u|^alpha |v|^beta
double mixed_integral(const FieldPair& uv, double alpha, double beta);

/// weighted L2 inner product of two sample arrays on the grid of `g`
double dot_l2(const RadialGrid& g, const Eigen::ArrayXd& a, const Eigen::ArrayXd& b);

/// Mass-preserving dilation (s*u)(r) = e^{s dim/2} u(e^s r), resampled onto
/// the same grid by monotone cubic interpolation and extended by zero past
/// r_max. Throws resolution_error when the rescaled support would be carried
/// by fewer than a handful of nodes.
Field l2_scale(double s, const Field& u);
FieldPair l2_scale(double s, const FieldPair& uv);

/// Conservative (flux-form) radial Laplacian with lumped weights:
/// approximates -u'' - (dim-1)/r u' with a natural symmetry condition at
/// r = 0. The boundary node keeps a one-sided value; solvers pin it to 0.
Eigen::ArrayXd neg_laplacian(const Field& u);

/// H1 distance squared of components of two fields on one grid.
double h1_dist_sq(const Field& a, const Field& b);

/// Rescale to prescribed mass: u * (target_mass_sq / ||u||_2^2)^{1/2}.
Field renormalize_mass(const Field& u, double target_mass_sq);

}  // namespace normstate
