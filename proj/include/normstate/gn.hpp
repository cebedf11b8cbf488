#pragma once

#include "normstate/field.hpp"
#include "normstate/profiles.hpp"

namespace normstate {

/// Sharp-constant report. `oracle_value` is the quotient evaluated at the
/// claimed extremal and is the value used downstream; `formula_value` is the
/// closed form, evaluated only where its exponents are defined (the printed
/// closed form has a factor (1-gamma_p)^{1-gamma_p/2} that loses meaning for
/// gamma_p > 1). The gap between the two routes is always recorded.
struct GNReport {
    double constant = 0.0;       // adopted value (oracle route)
    double formula_value = 0.0;  // NaN when undefined
    double oracle_value = 0.0;
    double relative_gap = 0.0;   // NaN when the formula is undefined
    bool formula_defined = false;
};

/// ||u||_2^{p-gamma_p} ||grad u||_2^{gamma_p} / ||u||_p^p
double q_scalar(const Field& u, double p);

/// (||u||_2^2+||v||_2^2)^{(a+b-gamma)/2} (||grad u||^2+||grad v||^2)^{gamma/2}
///   / int |u|^a |v|^b
double q_vector(const FieldPair& uv, double alpha, double beta);

GNReport gn_constant_scalar(int dim, double p, const GridPtr& grid);
GNReport gn_constant_vector(int dim, double alpha, double beta, const GridPtr& grid);

/// Componentwise multiples (Z1, Z2) = (c1 Z, c2 Z) of the scalar profile that
/// solve the unit-frequency coupled system; the report carries the discrete
/// PDE residuals of both equations (relative, discrete L2).
struct VectorExtremal {
    FieldPair pair;
    double c1 = 0.0, c2 = 0.0;
    double residual1 = 0.0, residual2 = 0.0;
};

VectorExtremal vector_extremal(int dim, double alpha, double beta, const GridPtr& grid);

/// coefficients of the coupled extremal in front of Z
double extremal_c1(double alpha, double beta);
double extremal_c2(double alpha, double beta);

}  // namespace normstate
