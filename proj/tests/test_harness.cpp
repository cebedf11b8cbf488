#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "helpers.hpp"
#include "normstate/harness.hpp"
#include "normstate/profiles.hpp"

using namespace normstate;
using namespace testutil;

TEST_CASE("power-law fitting") {
    SUBCASE("exact quadratic") {
        std::vector<double> xs = {0.5, 1.0, 2.0, 4.0, 8.0}, ys;
        for (double x : xs) ys.push_back(x * x);
        PowerLawFit fit = fit_power_law(xs, ys);
        CHECK(fit.exponent == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(fit.prefactor == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("noisy half power") {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> noise(-0.01, 0.01);
        std::vector<double> xs, ys;
        for (int i = 0; i < 24; ++i) {
            const double x = std::pow(10.0, -2.0 + 3.0 * i / 23.0);
            xs.push_back(x);
            ys.push_back(3.0 * std::sqrt(x) * (1.0 + noise(rng)));
        }
        PowerLawFit fit = fit_power_law(xs, ys);
        CHECK(std::abs(fit.exponent - 0.5) < 0.05);
        CHECK(fit.prefactor == doctest::Approx(3.0).epsilon(0.05));
    }
    SUBCASE("constant data has zero exponent") {
        std::vector<double> xs = {1.0, 2.0, 4.0, 8.0}, ys = {5.0, 5.0, 5.0, 5.0};
        CHECK(fit_power_law(xs, ys).exponent == doctest::Approx(0.0).epsilon(1e-13));
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(fit_power_law({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}), domain_error);
        CHECK_THROWS_AS(fit_power_law({1.0, 2.0, 3.0, -4.0}, {1.0, 2.0, 3.0, 4.0}),
                        domain_error);
    }
}

TEST_CASE("bubble-family distance: assignment and near-zero at a family member") {
    auto g = make_grid(3, 40.0, 2048, Grading::geometric);
    Field u = bubble(3, 0.3, g);
    Field z = zero_field(g);

    BubbleDistance d1 = dist_to_bubble_family(FieldPair(u, z));
    CHECK(d1.which_component == 0);
    CHECK(d1.value < 0.05 * std::sqrt(grad_sq(u)));

    BubbleDistance d2 = dist_to_bubble_family(FieldPair(z, bubble(3, 0.5, g)));
    CHECK(d2.which_component == 1);
}

TEST_CASE("limit-family distance vanishes at the representative") {
    Params p;
    p.dim = 3;
    p.alpha = p.beta = 1.5;
    auto g = make_grid(3, 120.0, 2048, Grading::uniform);
    LimitClosedForm lcf = solve_limit_closed_form(p, g);
    LimitDistance d = dist_to_limit_family(lcf.pair, p, &lcf.pair);
    CHECK(d.value <= 1e-12);
    CHECK_FALSE(d.numeric_fallback);
}

TEST_CASE("sweep emission: sorted rows, byte-identical reruns, CSV round trip") {
    Params p;
    p.dim = 3;
    p.alpha = p.beta = 1.5;
    SolveConfig cfg;
    cfg.grid_r_max = 120.0;
    cfg.grid_count = 1024;
    cfg.grad_tol = 1e-6;
    cfg.max_iterations = 8000;

    const std::vector<double> nus = {0.2, 0.05, 0.1, 0.4};
    std::vector<SweepRow> rows1 = sweep_nu(p, nus, cfg);
    std::vector<SweepRow> rows2 = sweep_nu(p, nus, cfg);

    for (size_t i = 0; i + 1 < rows1.size(); ++i) CHECK(rows1[i].nu < rows1[i + 1].nu);
    const std::string csv1 = sweep_rows_to_csv(rows1);
    const std::string csv2 = sweep_rows_to_csv(rows2);
    CHECK(csv1 == csv2);

    const std::string path = "test_sweep_roundtrip.csv";
    write_sweep_csv(rows1, path);
    std::vector<SweepRow> back = read_sweep_csv(path);
    REQUIRE(back.size() == rows1.size());
    for (size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].nu == rows1[i].nu);
        CHECK(back[i].m == rows1[i].m);
    }
    std::remove(path.c_str());
}
