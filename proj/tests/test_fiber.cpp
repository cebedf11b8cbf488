#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "normstate/fiber.hpp"
#include "normstate/gn.hpp"
#include "normstate/sampling.hpp"

using namespace normstate;
using namespace testutil;

namespace {

Params subcritical_params() {
    Params p;
    p.dim = 3;
    p.alpha = p.beta = 1.5;  // gamma = 1.5
    return p;
}

Params supercritical_params() {
    Params p;
    p.dim = 3;
    p.alpha = p.beta = 2.4;  // gamma = 4.2
    return p;
}

double vector_constant(const Params& p) {
    auto g = make_grid(p.dim, 30.0, 3072, Grading::uniform);
    return gn_constant_vector(p.dim, p.alpha, p.beta, g).oracle_value;
}

double embedding_constant(int dim) {
    auto g = make_grid(dim, 2000.0, 4096, Grading::geometric);
    return sobolev_constant(dim, g).value;
}

}  // namespace

TEST_CASE("scalars_of: zero pair, additivity, dilation law") {
    Params p = subcritical_params();
    auto g = make_grid(3, 40.0, 2048, Grading::uniform);
    FiberScalars z = scalars_of(FieldPair(zero_field(g), zero_field(g)), p);
    CHECK(z.A == 0.0);
    CHECK(z.B == 0.0);
    CHECK(z.D == 0.0);

    Field eta = cutoff_bubble(3, 0.5, g);
    FiberScalars s = scalars_of(FieldPair(eta, eta), p);
    CHECK(s.A == doctest::Approx(2.0 * grad_sq(eta)).epsilon(1e-13));
    CHECK(s.B == doctest::Approx(2.0 * lp_norm_p(eta, 6.0)).epsilon(1e-13));

    Field b1 = compact_bump(g, 0.7, 3.0);
    Field b2 = compact_bump(g, 0.5, 2.5, 0.9);
    FieldPair uv(b1, b2);
    FiberScalars s0 = scalars_of(uv, p);
    const double t = 0.6;
    FiberScalars s1 = scalars_of(l2_scale(t, uv), p);
    CHECK(s1.A == doctest::Approx(std::exp(2 * t) * s0.A).epsilon(1e-3));
    CHECK(s1.B == doctest::Approx(std::exp(6 * t) * s0.B).epsilon(1e-5));
    CHECK(s1.D == doctest::Approx(std::exp(1.5 * t) * s0.D).epsilon(1e-5));
}

TEST_CASE("energy, Pohozaev value and the reduced functional") {
    Params p = subcritical_params();
    FiberScalars s;
    s.two_star = 6.0;
    CHECK(energy(s, 1.0) == 0.0);
    CHECK(pohozaev(s, 1.0, 1.5) == 0.0);

    s.A = 2.0;
    s.B = 0.7;
    s.D = 0.4;
    CHECK(energy(s, 0.0) == doctest::Approx(s.A / 2 - s.B / 6));
    CHECK(pohozaev(s, 0.0, 1.5) == doctest::Approx(s.A - s.B));

    // J = I - P/2* as exact algebra, and its nu-sign behavior
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uni(0.1, 3.0);
    for (int k = 0; k < 100; ++k) {
        FiberScalars r;
        r.two_star = 6.0;
        r.A = uni(rng);
        r.B = uni(rng);
        r.D = uni(rng);
        const double nu = uni(rng) - 1.5, g = 1.5;
        CHECK(j_functional(r, nu, g) ==
              doctest::Approx(energy(r, nu) - pohozaev(r, nu, g) / 6.0).epsilon(1e-12));
    }
    CHECK(j_functional(s, 0.0, 1.5) == doctest::Approx(s.A / 3.0));
    CHECK(j_functional(s, -1.0, 1.5) > s.A / 3.0);
}

TEST_CASE("fiber derivative equals the Pohozaev value of the dilated pair") {
    Params p = subcritical_params();
    p.nu = 0.3;
    auto g = make_grid(3, 60.0, 3072, Grading::uniform);
    Field b1 = gaussian(g, 1.0);
    Field b2 = gaussian(g, 1.3, 0.8);
    FieldPair uv(b1, b2);
    FiberScalars s = scalars_of(uv, p);
    for (double t : {-1.0, 0.0, 1.0}) {
        const PhiJet jet = phi(s, p.nu, p.gamma(), t);
        const double direct = pohozaev(scalars_of(l2_scale(t, uv), p), p.nu, p.gamma());
        CHECK(jet.d1 == doctest::Approx(direct).epsilon(1e-4));
    }
    // t = 0 jet reproduces the plain functionals
    const PhiJet j0 = phi(s, p.nu, p.gamma(), 0.0);
    CHECK(j0.value == doctest::Approx(energy(s, p.nu)).epsilon(1e-14));
    CHECK(j0.d1 == doctest::Approx(pohozaev(s, p.nu, p.gamma())).epsilon(1e-14));
}

TEST_CASE("decoupled and critical-exponent fiber derivatives") {
    FiberScalars s;
    s.two_star = 6.0;
    s.A = 1.7;
    s.B = 0.9;
    s.D = 0.0;
    FiberCriticalSet cs = critical_points(s, 0.0, 1.5);
    REQUIRE(cs.points.size() == 1);
    CHECK(cs.points[0].kind == CritKind::max);
    CHECK(cs.points[0].t == doctest::Approx(std::log(s.A / s.B) / 4.0).epsilon(1e-9));

    // gamma = 2 (four dimensions): Phi' = e^{2t}(A - 2 nu D) - e^{4t}B
    FiberScalars s4;
    s4.two_star = 4.0;
    s4.A = 2.0;
    s4.B = 0.6;
    s4.D = 0.5;
    const double nu = 0.4;
    for (double t : {-0.8, 0.0, 0.9}) {
        const PhiJet jet = phi(s4, nu, 2.0, t);
        const double expect =
            std::exp(2 * t) * (s4.A - 2.0 * nu * s4.D) - std::exp(4 * t) * s4.B;
        CHECK(jet.d1 == doctest::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("critical point counts by regime") {
    Params psub = subcritical_params();
    const double nu0 = nu_zero(psub, vector_constant(psub), embedding_constant(3));
    CHECK(nu0 > 0.0);

    auto g = make_grid(3, 20.0, 512, Grading::uniform);
    std::mt19937_64 rng(5);

    SUBCASE("repulsive: one maximum at positive level") {
        for (int k = 0; k < 50; ++k) {
            FieldPair uv = random_torus_pair(g, psub, rng);
            FiberScalars s = scalars_of(uv, psub);
            FiberCriticalSet cs = critical_points(s, -1.0, psub.gamma());
            REQUIRE(cs.points.size() == 1);
            CHECK(cs.points[0].kind == CritKind::max);
            CHECK(phi(s, -1.0, psub.gamma(), cs.points[0].t).value > 0.0);
            CHECK(cs.regime == Regime::nonpositive);
        }
    }

    SUBCASE("subcritical attractive below the threshold: min then max") {
        for (int k = 0; k < 50; ++k) {
            FieldPair uv = random_torus_pair(g, psub, rng);
            FiberScalars s = scalars_of(uv, psub);
            FiberCriticalSet cs = critical_points(s, nu0 / 2.0, psub.gamma());
            REQUIRE(cs.points.size() == 2);
            CHECK(cs.points[0].kind == CritKind::local_min);
            CHECK(cs.points[1].kind == CritKind::max);
            CHECK(phi(s, nu0 / 2.0, psub.gamma(), cs.points[0].t).value < 0.0);
            CHECK(phi(s, nu0 / 2.0, psub.gamma(), cs.points[1].t).value > 0.0);
            REQUIRE(cs.zeros.size() == 2);
            CHECK(cs.points[0].t < cs.zeros[0]);
            CHECK(cs.zeros[0] < cs.points[1].t);
            CHECK(cs.points[1].t < cs.zeros[1]);
        }
    }

    SUBCASE("supercritical attractive: one maximum") {
        Params psup = supercritical_params();
        for (int k = 0; k < 50; ++k) {
            FieldPair uv = random_torus_pair(g, psup, rng);
            FiberScalars s = scalars_of(uv, psup);
            FiberCriticalSet cs = critical_points(s, 1.0, psup.gamma());
            REQUIRE(cs.points.size() == 1);
            CHECK(cs.points[0].kind == CritKind::max);
        }
    }
}

TEST_CASE("Pohozaev-manifold classification after dilation to a critical point") {
    Params p = subcritical_params();
    const double nu0 = nu_zero(p, vector_constant(p), embedding_constant(3));
    auto g = make_grid(3, 20.0, 512, Grading::uniform);
    std::mt19937_64 rng(7);
    const double nu = nu0 / 2.0, gam = p.gamma();
    for (int k = 0; k < 20; ++k) {
        FieldPair uv = random_torus_pair(g, p, rng);
        FiberScalars s = scalars_of(uv, p);
        CHECK(classify_pohozaev(s, nu, gam) == ManifoldClass::off_manifold);
        FiberCriticalSet cs = critical_points(s, nu, gam);
        REQUIRE(cs.points.size() == 2);
        CHECK(classify_pohozaev(s.dilated(cs.points[0].t, gam), nu, gam) == ManifoldClass::Pplus);
        CHECK(classify_pohozaev(s.dilated(cs.points[1].t, gam), nu, gam) == ManifoldClass::Pminus);
    }
}

TEST_CASE("coupling threshold: closed-form dependencies") {
    // gamma = 2 in four dimensions: explicit inverse square-root mass dependence
    Params p4;
    p4.dim = 4;
    p4.alpha = 1.4;
    p4.beta = 1.6;
    const double cv = vector_constant(p4);
    const double S4 = embedding_constant(4);
    p4.a = p4.b = 1.0;
    const double n1 = nu_zero(p4, cv, S4);
    Params p4d = p4;
    p4d.a = std::sqrt(1.5);
    p4d.b = std::sqrt(0.5);  // same a^2+b^2
    CHECK(nu_zero(p4d, cv, S4) == doctest::Approx(n1).epsilon(1e-13));
    Params p4x = p4;
    p4x.a = std::sqrt(2.0) * p4.a;
    p4x.b = std::sqrt(2.0) * p4.b;  // doubles a^2+b^2
    CHECK(nu_zero(p4x, cv, S4) == doctest::Approx(n1 / std::sqrt(2.0)).epsilon(1e-13));
    CHECK(n1 == doctest::Approx(0.5 / cv / std::sqrt(p4.mass_total())).epsilon(1e-13));

    // subcritical: decreasing in the total mass
    Params ps = subcritical_params();
    const double cvs = vector_constant(ps);
    const double S3 = embedding_constant(3);
    const double base = nu_zero(ps, cvs, S3);
    CHECK(base > 0.0);
    Params ps2 = ps;
    ps2.a = 1.4;
    CHECK(nu_zero(ps2, cvs, S3) < base);

    Params psup = supercritical_params();
    CHECK_THROWS_AS(nu_zero(psup, cvs, S3), domain_error);

    // concrete value stable under refinement of the interpolation constant
    auto gf = make_grid(3, 36.0, 6144, Grading::uniform);
    const double cv_fine = gn_constant_vector(3, 1.5, 1.5, gf).oracle_value;
    CHECK(nu_zero(ps, cv_fine, S3) == doctest::Approx(base).epsilon(1e-4));
}

TEST_CASE("landscape constants of the quadratic-coupling envelope") {
    Params p = subcritical_params();
    const double cv = vector_constant(p);
    const double S = embedding_constant(3);
    const double nu0 = nu_zero(p, cv, S);

    Landscape L = landscape_constants(p, nu0 / 2.0, cv, S);
    CHECK(L.regime_ok);
    CHECK(L.h_at_rho_star > 0.0);
    CHECK(L.g_at_rho_star > p.gamma() * L.A_coef);
    CHECK(L.R0 < L.rho_star);
    CHECK(L.rho_star < L.R1);
    auto h = [&](double rho) {
        return 0.5 * rho * rho - L.A_coef * std::pow(rho, p.gamma()) -
               L.B_coef * std::pow(rho, 6.0);
    };
    CHECK(std::abs(h(L.R0)) < 1e-8);
    CHECK(std::abs(h(L.R1)) < 1e-8);

    // vanishing coupling: the upper zero tends to the two-term closed form,
    // the lower zero collapses to the origin
    Landscape L0 = landscape_constants(p, 1e-8, cv, S);
    const double rho_bar = std::pow(3.0 * std::pow(S, 3.0), 1.0 / 4.0);  // (2*/2 S^{2*/2})^{1/(2*-2)}
    CHECK(L0.R1 == doctest::Approx(rho_bar).epsilon(1e-4));
    CHECK(L0.R0 < 1e-3);

    // above the threshold the envelope guarantee fails and is reported
    Landscape Lbad = landscape_constants(p, 4.0 * nu0, cv, S);
    CHECK_FALSE(Lbad.regime_ok);
}

TEST_CASE("critical-coupling admissible set") {
    Params p4;
    p4.dim = 4;
    p4.alpha = 1.4;
    p4.beta = 1.6;  // gamma = 2
    const double cv = vector_constant(p4);
    const double nu0 = nu_zero(p4, cv, embedding_constant(4));

    auto g = make_grid(4, 20.0, 512, Grading::uniform);
    std::mt19937_64 rng(3);
    for (int k = 0; k < 100; ++k) {
        FiberScalars s = scalars_of(random_torus_pair(g, p4, rng), p4);
        CHECK(o_nu_predicate(s, nu0 * 0.99));
        CHECK(o_nu_predicate(s, 0.0));
    }

    // oscillatory profiles drive the gradient-to-coupling ratio to infinity
    auto gp = make_grid(4, M_PI + 0.5, 2048, Grading::uniform);
    double prev_ratio = 0.0;
    for (int n : {1, 2, 4, 8}) {
        Field phi_n = sampled(gp, [&](double r) { return r <= M_PI ? std::sin(n * r) : 0.0; });
        Field u = renormalize_mass(phi_n, p4.a * p4.a);
        Field v = renormalize_mass(phi_n, p4.b * p4.b);
        FiberScalars s = scalars_of(FieldPair(u, v), p4);
        const double ratio = s.A / s.D;
        CHECK(ratio > 1.9 * prev_ratio);
        prev_ratio = ratio;
    }
}

TEST_CASE("projection onto the limit manifold") {
    // A = gamma D lands at t = 0
    LimitProjection at_zero = limit_fiber_project_scalars(1.5 * 0.8, 0.8, 1.5);
    CHECK(at_zero.t_star == doctest::Approx(0.0).epsilon(1e-14));

    // reduced energy is invariant under pre-dilation
    const double A = 2.3, D = 0.9;
    for (double gam : {1.5, 4.2}) {
        LimitProjection base = limit_fiber_project_scalars(A, D, gam);
        for (double s : {-1.0, 1.0}) {
            LimitProjection shifted = limit_fiber_project_scalars(std::exp(2 * s) * A,
                                                                  std::exp(gam * s) * D, gam);
            CHECK(shifted.k_tilde == doctest::Approx(base.k_tilde).epsilon(1e-12));
            CHECK(shifted.t_star == doctest::Approx(base.t_star - s).epsilon(1e-12));
        }
        if (gam < 2.0)
            CHECK(base.k_tilde < 0.0);
        else
            CHECK(base.k_tilde > 0.0);
    }

    // the projected pair sits on the limit manifold; pick the amplitude so
    // the projection shift is moderate and the resampling stays resolved
    Params p = subcritical_params();
    auto g = make_grid(3, 60.0, 3072, Grading::uniform);
    FieldPair raw(gaussian(g, 1.1), gaussian(g, 0.9, 0.7));
    const double A0 = grad_sq(raw.u) + grad_sq(raw.v);
    const double D0 = mixed_integral(raw, p.alpha, p.beta);
    const double c = A0 / (p.gamma() * D0);  // A ~ c^2, D ~ c^3 for alpha+beta=3
    FieldPair uv(Field(g, c * raw.u.values), Field(g, c * raw.v.values));
    LimitProjection proj = limit_fiber_project(uv, p);
    CHECK(std::abs(proj.t_star) < 0.05);
    FieldPair moved = l2_scale(proj.t_star, uv);
    const double A2 = grad_sq(moved.u) + grad_sq(moved.v);
    const double D2 = mixed_integral(moved, p.alpha, p.beta);
    CHECK(std::abs(A2 - p.gamma() * D2) < 1e-4 * A2);

    CHECK_THROWS_AS(limit_fiber_project_scalars(1.0, 0.0, 1.5), domain_error);
    CHECK_THROWS_AS(limit_fiber_project_scalars(1.0, 1.0, 2.0), domain_error);
}
