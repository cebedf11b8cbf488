#include "normstate/grid.hpp"

#include <cmath>

#include "normstate/errors.hpp"

namespace normstate {

double sphere_area(int dim) {
    if (dim == 3) return 4.0 * M_PI;
    if (dim == 4) return 2.0 * M_PI * M_PI;
    throw config_error("sphere_area: dim must be 3 or 4");
}

GridPtr make_grid(int dim, double r_max, int count, Grading grading) {
    if (dim != 3 && dim != 4) throw config_error("make_grid: dim must be 3 or 4");
    if (!(r_max > 0.0)) throw config_error("make_grid: r_max must be positive");
    if (count < 4) throw config_error("make_grid: need at least 4 nodes");

    auto g = std::make_shared<RadialGrid>();
    g->dim = dim;
    g->r_max = r_max;
    g->surface_factor = sphere_area(dim);
    g->grading = grading;

    const int n = count;
    g->nodes.resize(n);
    if (grading == Grading::uniform) {
        for (int i = 0; i < n; ++i) g->nodes[i] = r_max * double(i) / double(n - 1);
    } else {
        // spacings h_j = h0 * q^j with fixed total stretch h_{n-2}/h_0 = 64
        const double stretch = 64.0;
        const double q = std::pow(stretch, 1.0 / double(n - 2));
        const double h0 = r_max * (q - 1.0) / (std::pow(q, n - 1) - 1.0);
        g->nodes[0] = 0.0;
        double h = h0;
        for (int i = 1; i < n; ++i) {
            g->nodes[i] = g->nodes[i - 1] + h;
            h *= q;
        }
        g->nodes[n - 1] = r_max;  // close rounding drift
    }

    g->trap_w = Eigen::ArrayXd::Zero(n);
    for (int j = 0; j + 1 < n; ++j) {
        const double h = g->nodes[j + 1] - g->nodes[j];
        g->trap_w[j] += 0.5 * h;
        g->trap_w[j + 1] += 0.5 * h;
    }
    g->measure = g->trap_w * g->nodes.pow(dim - 1);
    return g;
}

}  // namespace normstate
