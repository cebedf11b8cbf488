#pragma once

#include <Eigen/Dense>
#include <memory>

namespace normstate {

enum class Grading { uniform, geometric };

/// Radial discretization of the ball of radius r_max in dimension dim (3 or 4).
/// Integrals of radial functions f are computed as
///     surface_factor * sum_i w_i f(r_i) r_i^{dim-1}
/// with composite trapezoid weights w_i on the (possibly graded) nodes.
///
/// Immutable after construction; shared by Field values.
struct RadialGrid {
    int dim = 3;
    double r_max = 0.0;
    double surface_factor = 0.0;   // area of the unit sphere S^{dim-1}
    Grading grading = Grading::uniform;
    Eigen::ArrayXd nodes;          // strictly increasing, nodes[0] = 0
    Eigen::ArrayXd trap_w;         // trapezoid weights
    Eigen::ArrayXd measure;        // trap_w * nodes^{dim-1}

    int size() const { return static_cast<int>(nodes.size()); }
    double spacing(int j) const { return nodes[j + 1] - nodes[j]; }
};

using GridPtr = std::shared_ptr<const RadialGrid>;

double sphere_area(int dim);

/// Build a radial grid with nodes[0]=0 and nodes[count-1]=r_max.
/// Geometric grading uses spacings in geometric progression (finer near 0);
/// the overall last/first spacing ratio is fixed at 64.
GridPtr make_grid(int dim, double r_max, int count, Grading grading);

}  // namespace normstate
