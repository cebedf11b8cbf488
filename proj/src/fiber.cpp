#include "normstate/fiber.hpp"

#include <algorithm>
#include <cmath>

#include "normstate/ops.hpp"

namespace normstate {

FiberScalars scalars_of(const FieldPair& uv, const Params& p) {
    FiberScalars s;
    s.two_star = p.two_star();
    s.A = grad_sq(uv.u) + grad_sq(uv.v);
    s.B = lp_norm_p(uv.u, s.two_star) + lp_norm_p(uv.v, s.two_star);
    s.D = mixed_integral(uv, p.alpha, p.beta);
    s.mass_u = mass_sq(uv.u);
    s.mass_v = mass_sq(uv.v);
    return s;
}

double energy(const FiberScalars& s, double nu) {
    return 0.5 * s.A - s.B / s.two_star - nu * s.D;
}

double pohozaev(const FiberScalars& s, double nu, double gamma) {
    return s.A - s.B - nu * gamma * s.D;
}

double j_functional(const FiberScalars& s, double nu, double gamma) {
    const double n_inv = 0.5 - 1.0 / s.two_star;  // = 1/N
    return n_inv * s.A - (s.two_star - gamma) / s.two_star * nu * s.D;
}

PhiJet phi(const FiberScalars& s, double nu, double gamma, double t) {
    const double e2 = std::exp(2.0 * t);
    const double ec = std::exp(s.two_star * t);
    const double eg = std::exp(gamma * t);
    PhiJet j;
    j.value = 0.5 * e2 * s.A - ec * s.B / s.two_star - nu * eg * s.D;
    j.d1 = e2 * s.A - ec * s.B - nu * gamma * eg * s.D;
    j.d2 = 2.0 * e2 * s.A - s.two_star * ec * s.B - nu * gamma * gamma * eg * s.D;
    return j;
}

namespace {

Regime regime_of(double nu, double gamma) {
    if (nu <= 0.0) return Regime::nonpositive;
    if (std::abs(gamma - 2.0) < 1e-12) return Regime::critical;
    return gamma < 2.0 ? Regime::subcritical : Regime::supercritical;
}

// bisect f on [lo,hi] with f(lo)*f(hi) <= 0, to |hi-lo| < 1e-12
template <class F>
double bisect(F&& f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((flo <= 0.0) == (fm <= 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

template <class F>
std::vector<double> scan_roots(F&& f, double lo, double hi, int panels) {
    std::vector<double> roots;
    double t_prev = lo, f_prev = f(lo);
    for (int k = 1; k <= panels; ++k) {
        const double t = lo + (hi - lo) * k / panels;
        const double ft = f(t);
        if (f_prev == 0.0) {
            roots.push_back(t_prev);
        } else if (f_prev * ft < 0.0) {
            roots.push_back(bisect(f, t_prev, t));
        }
        t_prev = t;
        f_prev = ft;
    }
    if (f_prev == 0.0) roots.push_back(t_prev);
    return roots;
}

}  // namespace

FiberCriticalSet critical_points(const FiberScalars& s, double nu, double gamma) {
    if (!(s.A > 0.0) || !(s.B > 0.0))
        throw domain_error("critical_points: need nondegenerate A, B > 0");
    FiberCriticalSet out;
    out.regime = regime_of(nu, gamma);

    auto d1 = [&](double t) { return phi(s, nu, gamma, t).d1; };
    auto val = [&](double t) { return phi(s, nu, gamma, t).value; };

    double half_window = 30.0;
    std::vector<double> roots;
    for (int attempt = 0; attempt < 3; ++attempt) {
        roots = scan_roots(d1, -half_window, half_window, 512);
        if (!roots.empty()) break;
        half_window *= 2.0;
    }
    if (roots.empty())
        throw solver_error("critical_points: no sign change of Phi' in expanded window");

    for (double t : roots) {
        const PhiJet j = phi(s, nu, gamma, t);
        const double scale = 2.0 * std::exp(2.0 * t) * s.A +
                             s.two_star * std::exp(s.two_star * t) * s.B +
                             std::abs(nu) * gamma * gamma * std::exp(gamma * t) * s.D;
        CritKind kind;
        if (std::abs(j.d2) <= 1e-9 * scale)
            kind = CritKind::degenerate;
        else
            kind = j.d2 > 0.0 ? CritKind::local_min : CritKind::max;
        out.points.push_back({t, kind});
    }
    std::sort(out.points.begin(), out.points.end(),
              [](const auto& x, const auto& y) { return x.t < y.t; });

    out.zeros = scan_roots(val, -half_window, half_window, 512);
    std::sort(out.zeros.begin(), out.zeros.end());
    return out;
}

ManifoldClass classify_pohozaev(const FiberScalars& s, double nu, double gamma, double tol) {
    const double P = pohozaev(s, nu, gamma);
    const double scale = std::max({s.A, s.B, std::abs(nu) * gamma * s.D, 1.0});
    if (std::abs(P) > tol * scale) return ManifoldClass::off_manifold;
    const PhiJet j = phi(s, nu, gamma, 0.0);
    const double d2_scale =
        2.0 * s.A + s.two_star * s.B + std::abs(nu) * gamma * gamma * s.D;
    if (std::abs(j.d2) <= 1e-9 * d2_scale) return ManifoldClass::Pzero;
    return j.d2 > 0.0 ? ManifoldClass::Pplus : ManifoldClass::Pminus;
}

double nu_zero(const Params& p, double c_vec, double S) {
    p.validate();
    const double g = p.gamma();
    const double ts = p.two_star();
    const double msum = p.mass_total();
    if (g > 2.0 + 1e-12) throw domain_error("nu_zero: defined only for gamma <= 2");
    if (std::abs(g - 2.0) < 1e-12) {
        // critical coupling exponent: nu0 = (N+2) / ((alpha+beta) N C (a^2+b^2)^{2/N})
        return (p.dim + 2.0) /
               ((p.alpha + p.beta) * p.dim * c_vec * std::pow(msum, 2.0 / p.dim));
    }
    const double lead = std::min(1.0 / g, (ts + 2.0 - g) / (2.0 * ts));
    const double s_pow = std::pow(S, ts * (2.0 - g) / (2.0 * (ts - 2.0)));
    const double num = (ts - 2.0) * std::pow(2.0 - g, (2.0 - g) / (ts - 2.0));
    const double den = std::pow(ts - g, (ts - g) / (ts - 2.0)) *
                       std::pow(msum, 0.5 * (p.alpha + p.beta - g));
    return lead * s_pow / c_vec * num / den;
}

Landscape landscape_constants(const Params& p, double nu, double c_vec, double S) {
    const double g = p.gamma();
    const double ts = p.two_star();
    if (!(g < 2.0)) throw domain_error("landscape_constants: requires gamma < 2");
    Landscape L;
    L.A_coef = nu * c_vec * std::pow(p.mass_total(), 0.5 * (p.alpha + p.beta - g));
    L.B_coef = std::pow(S, -ts / 2.0) / ts;
    L.rho_star = std::pow((2.0 - g) / (ts * (ts - g) * L.B_coef), 1.0 / (ts - 2.0));

    auto h = [&](double rho) {
        return 0.5 * rho * rho - L.A_coef * std::pow(rho, g) - L.B_coef * std::pow(rho, ts);
    };
    auto gfun = [&](double rho) {
        return std::pow(rho, 2.0 - g) - ts * L.B_coef * std::pow(rho, ts - g);
    };
    L.h_at_rho_star = h(L.rho_star);
    L.g_at_rho_star = gfun(L.rho_star);
    L.regime_ok = (L.h_at_rho_star > 0.0) && (L.g_at_rho_star > g * L.A_coef);
    if (!L.regime_ok) return L;  // zeros of h are not guaranteed to bracket

    // h < 0 near 0 (nu > 0), h(rho*) > 0, h -> -inf: one zero on each side
    auto bisect_zero = [&](double lo, double hi) {
        double flo = h(lo);
        for (int it = 0; it < 200 && (hi - lo) > 1e-14 * std::max(1.0, hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            if ((h(mid) <= 0.0) == (flo <= 0.0)) {
                lo = mid;
                flo = h(lo);
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    };
    if (nu > 0.0) {
        double lo = L.rho_star;
        while (h(lo) > 0.0) lo *= 0.5;
        L.R0 = bisect_zero(lo, L.rho_star);
    } else {
        L.R0 = 0.0;
    }
    double hi = L.rho_star;
    while (h(hi) > 0.0) hi *= 2.0;
    L.R1 = bisect_zero(L.rho_star, hi);
    return L;
}

bool o_nu_predicate(const FiberScalars& s, double nu) {
    return s.A > 2.0 * nu * s.D;
}

double k_tilde_of(double A, double D, double gamma) {
    return (gamma - 2.0) / (2.0 * gamma) *
           std::pow(std::pow(A, 0.5 * gamma) / (gamma * D), 2.0 / (gamma - 2.0));
}

LimitProjection limit_fiber_project_scalars(double A, double D, double gamma) {
    if (std::abs(gamma - 2.0) < 1e-12)
        throw domain_error("limit_fiber_project: gamma = 2 has no fiber critical point");
    if (!(D > 0.0)) throw domain_error("limit_fiber_project: vanishing coupling integral");
    LimitProjection out;
    // stationarity of (e^{2t}A/2 - e^{gamma t}D): e^{(2-gamma)t} = gamma D / A
    out.t_star = std::log(gamma * D / A) / (2.0 - gamma);
    out.k_tilde = k_tilde_of(A, D, gamma);
    return out;
}

LimitProjection limit_fiber_project(const FieldPair& uv, const Params& p) {
    const double A = grad_sq(uv.u) + grad_sq(uv.v);
    const double D = mixed_integral(uv, p.alpha, p.beta);
    return limit_fiber_project_scalars(A, D, p.gamma());
}

}  // namespace normstate
