#include "normstate/config.hpp"

#include <cmath>
#include <fstream>

namespace normstate {

using nlohmann::json;

namespace {

Grading grading_from(const std::string& s) {
    if (s == "uniform") return Grading::uniform;
    if (s == "geometric") return Grading::geometric;
    throw config_error("unknown grading: " + s);
}

InitRecipe init_from(const std::string& s) {
    if (s == "auto") return InitRecipe::automatic;
    if (s == "gaussian") return InitRecipe::gaussian;
    if (s == "bubble_gaussian") return InitRecipe::bubble_gaussian;
    throw config_error("unknown init recipe: " + s);
}

}  // namespace

AppConfig parse_config(const json& j) {
    AppConfig cfg;
    if (j.contains("problem")) {
        const auto& p = j.at("problem");
        cfg.problem.dim = p.value("dim", 3);
        cfg.problem.alpha = p.value("alpha", 1.5);
        cfg.problem.beta = p.value("beta", 1.5);
        cfg.problem.a = p.value("a", 1.0);
        cfg.problem.b = p.value("b", 1.0);
        cfg.problem.nu = p.value("nu", 0.0);
    }
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        cfg.solve.grid_r_max = g.value("r_max", cfg.solve.grid_r_max);
        cfg.solve.grid_count = g.value("count", cfg.solve.grid_count);
        cfg.solve.grid_grading = grading_from(g.value("grading", std::string("uniform")));
    }
    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        cfg.solve.step0 = s.value("step0", cfg.solve.step0);
        cfg.solve.max_backtracks = s.value("max_backtracks", cfg.solve.max_backtracks);
        cfg.solve.max_iterations = s.value("max_iterations", cfg.solve.max_iterations);
        cfg.solve.grad_tol = s.value("grad_tol", cfg.solve.grad_tol);
        cfg.solve.poh_tol = s.value("poh_tol", cfg.solve.poh_tol);
        cfg.solve.energy_tol = s.value("energy_tol", cfg.solve.energy_tol);
        cfg.solve.seed = s.value("seed", cfg.solve.seed);
        cfg.solve.init = init_from(s.value("init", std::string("auto")));
        if (s.contains("frame") && s.at("frame").is_number())
            cfg.solve.frame = s.at("frame").get<double>();
    }
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        if (s.contains("nu_values")) {
            cfg.sweep_nu = s.at("nu_values").get<std::vector<double>>();
        } else {
            const double lo = s.at("lo").get<double>();
            const double hi = s.at("hi").get<double>();
            const int points = s.value("points", 8);
            const std::string spacing = s.value("spacing", std::string("log"));
            for (int i = 0; i < points; ++i) {
                const double t = points == 1 ? 0.0 : double(i) / (points - 1);
                cfg.sweep_nu.push_back(spacing == "log" ? lo * std::pow(hi / lo, t)
                                                        : lo + (hi - lo) * t);
            }
        }
    }
    return cfg;
}

AppConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw config_error("cannot open config file: " + path);
    json j = json::parse(f);
    return parse_config(j);
}

json to_json(const SolveReport& rep) {
    return json{{"energy", rep.energy},
                {"lambda1", rep.lambda1},
                {"lambda2", rep.lambda2},
                {"pohozaev_residual", rep.pohozaev_residual},
                {"pde_residual", rep.pde_residual},
                {"branch", rep.branch == Branch::Pplus_local_min ? "Pplus_local_min"
                                                                 : "Pminus_mountain_pass"},
                {"iterations", rep.iterations},
                {"converged", rep.converged},
                {"t_total", rep.t_total},
                {"A", rep.A},
                {"B", rep.B},
                {"D", rep.D},
                {"mass_u", rep.mass_u},
                {"mass_v", rep.mass_v},
                {"structure_ok", rep.structure_ok}};
}

json to_json(const GNReport& rep) {
    json j{{"constant", rep.constant},
           {"oracle_value", rep.oracle_value},
           {"formula_defined", rep.formula_defined}};
    if (rep.formula_defined) {
        j["formula_value"] = rep.formula_value;
        j["relative_gap"] = rep.relative_gap;
    } else {
        j["formula_value"] = nullptr;
        j["relative_gap"] = nullptr;
    }
    return j;
}

json to_json(const FiberCriticalSet& cs) {
    json pts = json::array();
    for (const auto& p : cs.points) {
        const char* kind = p.kind == CritKind::local_min  ? "local_min"
                           : p.kind == CritKind::max      ? "max"
                                                          : "degenerate";
        pts.push_back(json{{"t", p.t}, {"kind", kind}});
    }
    const char* regime = cs.regime == Regime::subcritical     ? "subcritical"
                         : cs.regime == Regime::critical      ? "critical"
                         : cs.regime == Regime::supercritical ? "supercritical"
                                                              : "nonpositive";
    return json{{"regime", regime}, {"points", pts}, {"zeros", cs.zeros}};
}

json to_json(const Nu1Estimate& est) {
    return json{{"lo", est.lo},
                {"hi", est.hi},
                {"mid", est.mid},
                {"consistent_with_nu1_zero", est.consistent_with_zero},
                {"level", est.level},
                {"margin", est.margin},
                {"probed_nu", est.probed_nu}};
}

json to_json(const LimitClosedForm& lcf) {
    return json{{"energy", lcf.energy},
                {"l_closed_form", lcf.l_closed},
                {"sigma1", lcf.sigma1},
                {"sigma2", lcf.sigma2},
                {"mu", lcf.mu},
                {"lambda", lcf.lambda},
                {"mass_err1", lcf.mass_err1},
                {"mass_err2", lcf.mass_err2},
                {"pde_residual1", lcf.pde_residual1},
                {"pde_residual2", lcf.pde_residual2},
                {"coefficients_validated", lcf.coefficients_validated}};
}

json to_json(const SmallNuFit& fit) {
    return json{{"exp_lambda", fit.exp_lambda},
                {"exp_grad", fit.exp_grad},
                {"slope_tfit", fit.slope_tfit},
                {"target_exp", fit.target_exp},
                {"target_slope", fit.target_slope},
                {"rows_used", fit.rows_used}};
}

json to_json(const LargeNuFit& fit) {
    return json{{"exp_m", fit.exp_m},
                {"target_exp", fit.target_exp},
                {"prefactor", fit.prefactor},
                {"prefactor_target", fit.prefactor_target},
                {"d0", fit.d0},
                {"rows_used", fit.rows_used}};
}

json to_json(const NonpositiveReport& rep) {
    return json{{"inf_projected", rep.inf_projected},
                {"bubble_energies", rep.bubble_energies},
                {"sobolev_level", rep.sobolev_level},
                {"bound_ok", rep.bound_ok},
                {"bubble_decreasing", rep.bubble_decreasing}};
}

FiberScalars fiber_scalars_from_json(const json& j) {
    FiberScalars s;
    s.A = j.at("A").get<double>();
    s.B = j.at("B").get<double>();
    s.D = j.at("D").get<double>();
    if (j.contains("masses")) {
        s.mass_u = j.at("masses").at(0).get<double>();
        s.mass_v = j.at("masses").at(1).get<double>();
    }
    s.two_star = j.value("two_star", 6.0);
    return s;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace normstate
