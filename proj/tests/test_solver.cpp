#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "normstate/gn.hpp"
#include "normstate/harness.hpp"
#include "normstate/solver.hpp"

using namespace normstate;
using namespace testutil;

namespace {

double vector_constant(const Params& p) {
    auto g = make_grid(p.dim, 30.0, 3072, Grading::uniform);
    return gn_constant_vector(p.dim, p.alpha, p.beta, g).oracle_value;
}

double embedding_constant(int dim) {
    auto g = make_grid(dim, 2000.0, 4096, Grading::geometric);
    return sobolev_constant(dim, g).value;
}

SolveConfig sub_config() {
    SolveConfig cfg;
    cfg.grid_r_max = 120.0;
    cfg.grid_count = 2048;
    cfg.grad_tol = 1e-6;
    cfg.max_iterations = 30000;
    return cfg;
}

SolveConfig sup_config() {
    SolveConfig cfg;
    cfg.grid_r_max = 40.0;
    cfg.grid_count = 2048;
    cfg.grad_tol = 1e-6;
    cfg.max_iterations = 30000;
    return cfg;
}

}  // namespace

TEST_CASE("subcritical attractive ground state: local minimizer branch") {
    Params p;
    p.dim = 3;
    p.alpha = p.beta = 1.5;
    const double nu0 = nu_zero(p, vector_constant(p), embedding_constant(3));
    p.nu = nu0 / 2.0;

    auto [w, rep] = minimize_ground_state(p, sub_config());
    CHECK(rep.converged);
    CHECK(rep.branch == Branch::Pplus_local_min);
    CHECK(rep.energy < 0.0);
    CHECK(rep.lambda1 > 0.0);
    CHECK(rep.lambda2 > 0.0);
    CHECK(rep.pde_residual < 1e-3);
    CHECK(rep.pohozaev_residual < 1e-6);
    CHECK(rep.manifold_class == ManifoldClass::Pplus);
    CHECK(rep.mass_u == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.mass_v == doctest::Approx(1.0).epsilon(1e-10));

    // multiplier identity: testing the system against (u, v)
    const double lhs = rep.lambda1 * p.a * p.a + rep.lambda2 * p.b * p.b;
    const double rhs = rep.B + p.nu * (p.alpha + p.beta) * rep.D - rep.A;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-3));

    // positive, radially nonincreasing representative
    const auto& vals = w.u.values;
    for (int i = 0; i + 1 < w.u.size(); ++i) {
        CHECK(vals[i] >= 0.0);
        CHECK(vals[i + 1] <= vals[i] + 1e-10);
    }
}

TEST_CASE("supercritical ground state at strong coupling: mountain-pass branch") {
    Params p;
    p.dim = 3;
    p.alpha = p.beta = 2.4;
    p.nu = 50.0;

    auto [w, rep] = minimize_ground_state(p, sup_config());
    const double S = embedding_constant(3);
    CHECK(rep.converged);
    CHECK(rep.branch == Branch::Pminus_mountain_pass);
    CHECK(rep.energy > 0.0);
    CHECK(rep.energy < std::pow(S, 1.5) / 3.0);
    CHECK(rep.pde_residual < 1e-3);
    CHECK(rep.manifold_class == ManifoldClass::Pminus);
    CHECK(rep.lambda1 > 0.0);
    CHECK(rep.lambda2 > 0.0);
}

TEST_CASE("ground-state energy is nonincreasing in the coupling") {
    Params p;
    p.dim = 3;
    p.alpha = p.beta = 2.4;
    SolveConfig cfg = sup_config();
    double prev = std::numeric_limits<double>::infinity();
    for (double nu : {20.0, 50.0, 120.0}) {
        p.nu = nu;
        const SolveReport rep = minimize_ground_state(p, cfg).second;
        CHECK(rep.converged);
        CHECK(rep.energy <= prev + 1e-8);
        prev = rep.energy;
    }
}

TEST_CASE("critical-exponent coupling in four dimensions: mountain pass below nu0") {
    Params p;
    p.dim = 4;
    p.alpha = 1.4;
    p.beta = 1.6;  // gamma = 2
    const double nu0 = nu_zero(p, vector_constant(p), embedding_constant(4));
    p.nu = nu0 / 2.0;

    SolveConfig cfg;
    cfg.grid_r_max = 40.0;
    cfg.grid_count = 2048;
    cfg.grad_tol = 1e-6;
    auto [w, rep] = minimize_ground_state(p, cfg);
    const double S = embedding_constant(4);
    CHECK(rep.converged);
    CHECK(rep.branch == Branch::Pminus_mountain_pass);
    CHECK(rep.energy > 0.0);
    CHECK(rep.energy < std::pow(S, 2.0) / 4.0);
}

TEST_CASE("closed-form limit states verify by substitution") {
    SUBCASE("symmetric subcritical") {
        Params p;
        p.dim = 3;
        p.alpha = p.beta = 1.5;
        auto grid = make_grid(3, 120.0, 2048, Grading::uniform);
        LimitClosedForm lcf = solve_limit_closed_form(p, grid);
        CHECK(lcf.sigma1 == doctest::Approx(lcf.sigma2).epsilon(1e-14));
        CHECK(lcf.mass_err1 < 1e-4);
        CHECK(lcf.mass_err2 < 1e-4);
        CHECK(lcf.pde_residual1 < 1e-3);
        CHECK(lcf.pde_residual2 < 1e-3);
        CHECK(lcf.lambda > 0.0);
        CHECK(lcf.energy < 0.0);
        CHECK(lcf.energy == doctest::Approx(lcf.l_closed).epsilon(1e-4));
        CHECK(lcf.coefficients_validated);
    }
    SUBCASE("symmetric supercritical") {
        Params p;
        p.dim = 3;
        p.alpha = p.beta = 2.4;
        auto grid = make_grid(3, 40.0, 2048, Grading::uniform);
        LimitClosedForm lcf = solve_limit_closed_form(p, grid);
        CHECK(lcf.energy > 0.0);
        CHECK(lcf.energy == doctest::Approx(lcf.l_closed).epsilon(1e-4));
        CHECK(lcf.coefficients_validated);
    }
    SUBCASE("hypothesis violation is a domain error") {
        Params p;
        p.dim = 3;
        p.alpha = 1.5;
        p.beta = 1.5;
        p.a = 1.0;
        p.b = 2.0;
        auto grid = make_grid(3, 40.0, 1024, Grading::uniform);
        CHECK_THROWS_AS(solve_limit_closed_form(p, grid), domain_error);
    }
}

TEST_CASE("numeric limit minimization against the closed form") {
    Params p;
    p.dim = 3;
    p.alpha = p.beta = 1.5;
    SolveConfig cfg = sub_config();
    auto [w, rep] = minimize_limit_system(p, cfg);
    CHECK(rep.converged);
    CHECK(rep.lambda1 > 0.0);
    CHECK(rep.lambda2 > 0.0);

    auto grid = make_grid(3, cfg.grid_r_max, cfg.grid_count, cfg.grid_grading);
    LimitClosedForm lcf = solve_limit_closed_form(p, grid);
    CHECK(rep.energy == doctest::Approx(lcf.l_closed).epsilon(1e-2));

    // profile match in relative discrete L2, at the numeric scale
    FieldPair actual = l2_scale(rep.t_total, w);
    const double rel1 = std::sqrt(mass_sq(Field(grid, actual.u.values - lcf.pair.u.values)) /
                                  mass_sq(lcf.pair.u));
    CHECK(rel1 < 1e-2);

    // generic masses: converged with positive multipliers
    Params pg = p;
    pg.a = 1.2;
    pg.b = 0.7;
    auto [wg, repg] = minimize_limit_system(pg, cfg);
    CHECK(repg.converged);
    CHECK(repg.lambda1 > 0.0);
    CHECK(repg.lambda2 > 0.0);

    // smaller masses cannot lower the limit energy (subcritical: l < 0)
    Params ph = p;
    ph.a = 0.5;
    ph.b = 0.5;
    auto grid2 = make_grid(3, cfg.grid_r_max, cfg.grid_count, cfg.grid_grading);
    LimitClosedForm lcf_half = solve_limit_closed_form(ph, grid2);
    CHECK(lcf.l_closed <= lcf_half.l_closed + 1e-10);
}

TEST_CASE("repulsive regime: projected energies respect the concentration level") {
    Params p;
    p.dim = 3;
    p.alpha = p.beta = 2.4;
    SolveConfig cfg;
    cfg.grid_r_max = 60.0;
    cfg.grid_count = 2048;
    cfg.grid_grading = Grading::geometric;

    for (double nu : {0.0, -1.0}) {
        p.nu = nu;
        NonpositiveReport rep = verify_nonpositive_regime(p, cfg, 40);
        CHECK(rep.bound_ok);
        CHECK(rep.bubble_decreasing);
        CHECK(rep.inf_projected >= rep.sobolev_level * (1.0 - 1e-2));
    }
}
