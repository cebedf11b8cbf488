#pragma once

#include <cmath>

#include "normstate/errors.hpp"

namespace normstate {

/// Problem data for the coupled system: dimension, coupling exponents
/// alpha, beta, mass radii a, b and coupling strength nu.
struct Params {
    int dim = 3;
    double alpha = 1.5;
    double beta = 1.5;
    double a = 1.0;
    double b = 1.0;
    double nu = 0.0;

    double two_star() const { return 2.0 * dim / (dim - 2.0); }
    double gamma_of(double p) const { return dim * (p - 2.0) / 2.0; }
    double gamma() const { return gamma_of(alpha + beta); }
    double mass_total() const { return a * a + b * b; }

    void validate() const {
        if (dim != 3 && dim != 4) throw config_error("Params: dim must be 3 or 4");
        if (!(alpha > 1.0) || !(beta > 1.0)) throw config_error("Params: need alpha, beta > 1");
        if (!(alpha + beta < two_star()))
            throw config_error("Params: need alpha + beta < 2N/(N-2)");
        if (!(a > 0.0) || !(b > 0.0)) throw config_error("Params: need a, b > 0");
    }
};

}  // namespace normstate
