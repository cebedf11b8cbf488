#pragma once

#include <vector>

#include "normstate/field.hpp"
#include "normstate/params.hpp"

namespace normstate {

/// The three integrals that determine the fiber map, plus the masses:
/// A = ||grad u||^2 + ||grad v||^2, B = ||u||_{2*}^{2*} + ||v||_{2*}^{2*},
/// D = int |u|^alpha |v|^beta.
struct FiberScalars {
    double A = 0.0;
    double B = 0.0;
    double D = 0.0;
    double mass_u = 0.0;
    double mass_v = 0.0;
    double two_star = 6.0;

    /// exact transformation under the mass-preserving dilation by t
    FiberScalars dilated(double t, double gamma) const {
        FiberScalars s = *this;
        s.A *= std::exp(2.0 * t);
        s.B *= std::exp(two_star * t);
        s.D *= std::exp(gamma * t);
        return s;
    }
};

FiberScalars scalars_of(const FieldPair& uv, const Params& p);

/// I_nu = A/2 - B/2* - nu D
double energy(const FiberScalars& s, double nu);

/// P_nu = A - B - nu gamma D
double pohozaev(const FiberScalars& s, double nu, double gamma);

/// J_nu = A/N - ((2*-gamma)/2*) nu D   (identically energy - pohozaev/2*)
double j_functional(const FiberScalars& s, double nu, double gamma);

struct PhiJet {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// Fiber map Phi(t) = e^{2t}A/2 - e^{2* t}B/2* - nu e^{gamma t}D and its
/// first two derivatives; Phi'(t) equals the Pohozaev value of the dilated
/// state.
PhiJet phi(const FiberScalars& s, double nu, double gamma, double t);

enum class Regime { subcritical, critical, supercritical, nonpositive };
enum class CritKind { local_min, max, degenerate };

struct FiberCriticalPoint {
    double t = 0.0;
    CritKind kind = CritKind::max;
};

struct FiberCriticalSet {
    Regime regime = Regime::subcritical;
    std::vector<FiberCriticalPoint> points;  // sorted by t
    std::vector<double> zeros;               // zeros of Phi, sorted
};

/// Locate all critical points and zeros of the fiber map by a sign scan on
/// [-30, 30] (512 panels) followed by bisection to |dt| < 1e-12. The window
/// expands twice before a window error is raised; a vanishing second
/// derivative at a root is reported as a degenerate point, not perturbed.
FiberCriticalSet critical_points(const FiberScalars& s, double nu, double gamma);

enum class ManifoldClass { Pplus, Pzero, Pminus, off_manifold };

ManifoldClass classify_pohozaev(const FiberScalars& s, double nu, double gamma,
                                double tol = 1e-6);

/// Coupling threshold below which the fiber map has the clean two-point
/// (gamma<2) or single-maximum (gamma=2) structure on the whole torus.
/// `c_vec` is the vector interpolation constant (oracle value) and `S` the
/// best embedding constant. Domain error for gamma > 2.
double nu_zero(const Params& p, double c_vec, double S);

struct Landscape {
    double A_coef = 0.0;  // nu c_vec (a^2+b^2)^{(alpha+beta-gamma)/2}
    double B_coef = 0.0;  // S^{-2*/2} / 2*
    double rho_star = 0.0;
    double R0 = 0.0;      // lower zero of h
    double R1 = 0.0;      // upper zero of h
    double h_at_rho_star = 0.0;
    double g_at_rho_star = 0.0;
    bool regime_ok = true;  // h(rho*) > 0 and g(rho*) > gamma A_coef
};

/// h(rho) = rho^2/2 - A rho^gamma - B rho^{2*}, g(rho) = rho^{2-gamma}
/// - 2* B rho^{2*-gamma}; rho* is the maximizer of g, R0 < R1 the zeros
/// of h. Requires gamma < 2 and expects nu < nu0 for regime_ok.
Landscape landscape_constants(const Params& p, double nu, double c_vec, double S);

/// The set where the critical-coupling fiber map still has a maximum:
/// A > 2 nu D (gamma = 2 case).
bool o_nu_predicate(const FiberScalars& s, double nu);

struct LimitProjection {
    double t_star = 0.0;  // e^{t} = (A/(gamma D))^{1/(2-gamma)}
    double k_tilde = 0.0; // reduced limit energy at the projected point
};

LimitProjection limit_fiber_project_scalars(double A, double D, double gamma);
LimitProjection limit_fiber_project(const FieldPair& uv, const Params& p);

/// closed-form reduced limit energy from raw scalars
double k_tilde_of(double A, double D, double gamma);

}  // namespace normstate
