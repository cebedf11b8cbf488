#include "normstate/ops.hpp"

#include <cmath>

#include "normstate/interp.hpp"

namespace normstate {

double integrate_radial(const RadialGrid& g, const Eigen::ArrayXd& f) {
    return g.surface_factor * (f * g.measure).sum();
}

double mass_sq(const Field& u) {
    if (!u.all_finite()) throw domain_error("mass_sq: non-finite samples");
    return integrate_radial(*u.grid, u.values.square());
}

Eigen::ArrayXd derivative(const Field& u) {
    const auto& r = u.grid->nodes;
    const auto& y = u.values;
    const int n = u.size();
    if (n < 3) throw config_error("derivative: need at least 3 nodes");
    Eigen::ArrayXd d(n);
    for (int i = 1; i + 1 < n; ++i) {
        const double hm = r[i] - r[i - 1];
        const double hp = r[i + 1] - r[i];
        d[i] = (hm * hm * y[i + 1] - hp * hp * y[i - 1] + (hp * hp - hm * hm) * y[i]) /
               (hm * hp * (hm + hp));
    }
    {   // one-sided three-point at both ends
        const double h0 = r[1] - r[0], h1 = r[2] - r[1];
        d[0] = -(2 * h0 + h1) / (h0 * (h0 + h1)) * y[0] + (h0 + h1) / (h0 * h1) * y[1] -
               h0 / (h1 * (h0 + h1)) * y[2];
        const double g1 = r[n - 2] - r[n - 3], g0 = r[n - 1] - r[n - 2];
        d[n - 1] = (2 * g0 + g1) / (g0 * (g0 + g1)) * y[n - 1] - (g0 + g1) / (g0 * g1) * y[n - 2] +
                   g0 / (g1 * (g0 + g1)) * y[n - 3];
    }
    return d;
}

double grad_sq(const Field& u) {
    Eigen::ArrayXd d = derivative(u);
    return integrate_radial(*u.grid, d.square());
}

double lp_norm_p(const Field& u, double p) {
    if (!(p > 1.0)) throw domain_error("lp_norm_p: need p > 1");
    return integrate_radial(*u.grid, u.values.abs().pow(p));
}

double mixed_integral(const FieldPair& uv, double alpha, double beta) {
    return integrate_radial(*uv.grid(),
                            uv.u.values.abs().pow(alpha) * uv.v.values.abs().pow(beta));
}

double dot_l2(const RadialGrid& g, const Eigen::ArrayXd& a, const Eigen::ArrayXd& b) {
    return g.surface_factor * (a * b * g.measure).sum();
}

Field l2_scale(double s, const Field& u) {
    const auto& g = *u.grid;
    const double factor = std::exp(0.5 * g.dim * s);
    const double es = std::exp(s);
    PchipInterpolant interp(g.nodes, u.values);
    Eigen::ArrayXd out(u.size());
    int support = 0;
    for (int i = 0; i < u.size(); ++i) {
        const double x = es * g.nodes[i];
        if (x > g.r_max) {
            out[i] = 0.0;
        } else {
            out[i] = factor * interp(x);
            ++support;
        }
    }
    if (support < 8 && u.values.abs().maxCoeff() > 0.0)
        throw resolution_error("l2_scale: rescaled support falls between grid nodes");
    return Field(u.grid, std::move(out));
}

FieldPair l2_scale(double s, const FieldPair& uv) {
    return FieldPair(l2_scale(s, uv.u), l2_scale(s, uv.v));
}

Eigen::ArrayXd neg_laplacian(const Field& u) {
    // strong-form stencil for -u'' - (dim-1)/r u'; pointwise second order
    // for smooth even profiles, including the first nodes at the axis
    const auto& g = *u.grid;
    const auto& r = g.nodes;
    const auto& y = u.values;
    const int n = u.size();
    Eigen::ArrayXd out(n);
    // r = 0: symmetry gives -Delta u = -dim * u''(0)
    {
        const double h0 = r[1] - r[0];
        out[0] = -g.dim * 2.0 * (y[1] - y[0]) / (h0 * h0);
    }
    for (int i = 1; i + 1 < n; ++i) {
        const double hm = r[i] - r[i - 1];
        const double hp = r[i + 1] - r[i];
        const double upp =
            2.0 * (hm * y[i + 1] - (hm + hp) * y[i] + hp * y[i - 1]) / (hm * hp * (hm + hp));
        const double up = (hm * hm * y[i + 1] - hp * hp * y[i - 1] + (hp * hp - hm * hm) * y[i]) /
                          (hm * hp * (hm + hp));
        out[i] = -upp - (g.dim - 1) / r[i] * up;
    }
    out[n - 1] = 0.0;  // Dirichlet row, solvers pin the value
    return out;
}

double h1_dist_sq(const Field& a, const Field& b) {
    Field diff(a.grid, a.values - b.values);
    return mass_sq(diff) + grad_sq(diff);
}

Field renormalize_mass(const Field& u, double target_mass_sq) {
    const double m = mass_sq(u);
    if (!(m > 0.0)) throw domain_error("renormalize_mass: zero field");
    return Field(u.grid, u.values * std::sqrt(target_mass_sq / m));
}

}  // namespace normstate
