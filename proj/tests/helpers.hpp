#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "normstate/field.hpp"
#include "normstate/grid.hpp"
#include "normstate/ops.hpp"

namespace testutil {

using namespace normstate;

inline Field sampled(const GridPtr& g, const std::function<double(double)>& f) {
    Eigen::ArrayXd v(g->size());
    for (int i = 0; i < g->size(); ++i) v[i] = f(g->nodes[i]);
    return Field(g, std::move(v));
}

inline Field gaussian(const GridPtr& g, double sigma = 1.0, double amp = 1.0) {
    return sampled(g, [=](double r) { return amp * std::exp(-r * r / (2.0 * sigma * sigma)); });
}

/// C^2 bump supported on [0, r1]: quintic ramp down between r0 and r1.
inline Field compact_bump(const GridPtr& g, double r0, double r1, double amp = 1.0) {
    return sampled(g, [=](double r) {
        if (r >= r1) return 0.0;
        if (r <= r0) return amp;
        const double t = (r - r0) / (r1 - r0);
        return amp * (1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t));
    });
}

/// Independent shooting oracle: classic fixed-step RK4 on (w, w') with the
/// same series start, entirely separate from the production integrator.
inline double rk4_shoot_height(int dim, double p, double h = 5e-4, double tol = 1e-11) {
    auto classify_low = [&](double zeta) {
        const double r0 = 1e-4;
        double r = r0;
        double w = zeta + (zeta - std::pow(zeta, p - 1.0)) / (2.0 * dim) * r0 * r0;
        double dw = (zeta - std::pow(zeta, p - 1.0)) / dim * r0;
        auto f = [&](double rr, double ww, double vv, double& dwdt, double& dvdt) {
            dwdt = vv;
            dvdt = -(dim - 1) / rr * vv + ww - std::copysign(std::pow(std::abs(ww), p - 1.0), ww);
        };
        while (r < 80.0) {
            if (w <= 0.0) return false;           // crossed: zeta too large
            if (dw > 0.0 || w > 2.0 * zeta) return true;  // turned: too small
            double k1w, k1v, k2w, k2v, k3w, k3v, k4w, k4v;
            f(r, w, dw, k1w, k1v);
            f(r + h / 2, w + h / 2 * k1w, dw + h / 2 * k1v, k2w, k2v);
            f(r + h / 2, w + h / 2 * k2w, dw + h / 2 * k2v, k3w, k3v);
            f(r + h, w + h * k3w, dw + h * k3v, k4w, k4v);
            w += h / 6 * (k1w + 2 * k2w + 2 * k3w + k4w);
            dw += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
            r += h;
        }
        return dw + w > 0.0;
    };
    double lo = 1.0, hi = 50.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (classify_low(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Quadrature oracle: the same analytic integrand on a x4 refined grid.
inline double refined_integral(int dim, double r_max, int count, Grading grading,
                               const std::function<double(double)>& integrand) {
    GridPtr fine = make_grid(dim, r_max, 4 * count, grading);
    Eigen::ArrayXd f(fine->size());
    for (int i = 0; i < fine->size(); ++i) f[i] = integrand(fine->nodes[i]);
    return integrate_radial(*fine, f);
}

}  // namespace testutil
