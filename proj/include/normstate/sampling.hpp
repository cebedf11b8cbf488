#pragma once

#include <random>

#include "normstate/field.hpp"
#include "normstate/ops.hpp"
#include "normstate/params.hpp"

namespace normstate {

/// Smooth random positive radial profile: a fixed Gaussian core plus a few
/// random bumps, vanishing at r_max. Deterministic given the generator state.
inline Field random_positive_field(const GridPtr& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> amp(0.1, 1.0);
    std::uniform_real_distribution<double> center(0.0, g->r_max / 3.0);
    std::uniform_real_distribution<double> width(0.3, 1.5);
    Eigen::ArrayXd v = Eigen::ArrayXd::Zero(g->size());
    const int bumps = 4;
    for (int k = 0; k < bumps; ++k) {
        const double c = amp(rng), m = center(rng), s = width(rng);
        v += c * (-(g->nodes - m).square() / (2.0 * s * s)).exp();
    }
    v += 0.5 * (-g->nodes.square() / 2.0).exp();
    // taper to honor the Dirichlet truncation
    const double edge = 0.8 * g->r_max;
    for (int i = 0; i < g->size(); ++i) {
        const double r = g->nodes[i];
        if (r > edge) {
            const double t = (r - edge) / (g->r_max - edge);
            v[i] *= (t >= 1.0) ? 0.0 : (1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t));
        }
    }
    v[g->size() - 1] = 0.0;
    return Field(g, std::move(v));
}

/// Random pair on the mass torus T(a,b).
inline FieldPair random_torus_pair(const GridPtr& g, const Params& p, std::mt19937_64& rng) {
    Field u = renormalize_mass(random_positive_field(g, rng), p.a * p.a);
    Field v = renormalize_mass(random_positive_field(g, rng), p.b * p.b);
    return FieldPair(std::move(u), std::move(v));
}

/// Smooth small bump used by perturbation probes; relative size `rel` with
/// respect to the L2 norm of `base`.
inline Field random_perturbation(const Field& base, double rel, std::mt19937_64& rng) {
    const auto& g = base.grid;
    std::uniform_real_distribution<double> center(0.0, g->r_max / 2.0);
    std::uniform_real_distribution<double> width(0.4, 2.0);
    std::uniform_real_distribution<double> sign(-1.0, 1.0);
    Eigen::ArrayXd v = Eigen::ArrayXd::Zero(g->size());
    for (int k = 0; k < 3; ++k) {
        const double m = center(rng), s = width(rng), c = sign(rng);
        v += c * (-(g->nodes - m).square() / (2.0 * s * s)).exp();
    }
    v[g->size() - 1] = 0.0;
    Field bump(g, std::move(v));
    const double scale = rel * std::sqrt(mass_sq(base) / std::max(mass_sq(bump), 1e-300));
    return Field(g, base.values + scale * bump.values);
}

}  // namespace normstate
