// Command-line front end: profiles, interpolation constants, fiber-map
// diagnostics, constrained solves, coupling sweeps and scaling-law fits.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "normstate/config.hpp"
#include "normstate/harness.hpp"
#include "normstate/profiles.hpp"
#include "normstate/sampling.hpp"

using namespace normstate;
using nlohmann::json;

namespace {

void emit(const json& j, const std::string& out_path) {
    const std::string text = dump_json(j);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw config_error("cannot open output file: " + out_path);
        f << text;
    }
}

GridPtr grid_of(const AppConfig& cfg, int dim) {
    return make_grid(dim, cfg.solve.grid_r_max, cfg.solve.grid_count, cfg.solve.grid_grading);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"normalized ground states of the coupled critical system"};
    app.require_subcommand(1);

    std::string config_path, out_path, csv_path;
    std::string mode = "auto";
    double scalar_p = 0.0;
    double nu1_lo = 1e-4, nu1_hi = 1e2;
    bool closed_form = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_path, "output file (default: stdout)");
    };

    auto* sub_profile = app.add_subcommand("profile", "scalar profile, bubbles, cutoff table");
    add_common(sub_profile);
    sub_profile->add_option("--p", scalar_p, "profile exponent (default alpha+beta)");
    std::string profile_dir = ".";
    sub_profile->add_option("--dir", profile_dir, "directory for CSV profiles");

    auto* sub_gn = app.add_subcommand("gn", "sharp interpolation constants");
    add_common(sub_gn);
    sub_gn->add_option("--scalar-p", scalar_p, "scalar constant at this exponent");

    auto* sub_fiber = app.add_subcommand("fiber", "fiber-map critical points from scalars");
    sub_fiber->add_option("--in", csv_path, "JSON with A,B,D,masses,nu,params")->required();
    sub_fiber->add_option("--out", out_path, "output file (default: stdout)");

    auto* sub_solve = app.add_subcommand("solve", "normalized ground state");
    add_common(sub_solve);
    std::string profile_out;
    sub_solve->add_option("--profile-csv", profile_out, "dump solution profile (r,u,v)");

    auto* sub_limit = app.add_subcommand("limit", "limit-system ground state");
    add_common(sub_limit);
    sub_limit->add_flag("--closed-form", closed_form, "use the closed form (a^2/b^2 = alpha/beta)");
    sub_limit->add_option("--profile-csv", profile_out, "dump solution profile (r,u,v)");

    auto* sub_nu1 = app.add_subcommand("nu1", "existence threshold estimate");
    add_common(sub_nu1);
    sub_nu1->add_option("--lo", nu1_lo, "bracket lower end");
    sub_nu1->add_option("--hi", nu1_hi, "bracket upper end");

    auto* sub_sweep = app.add_subcommand("sweep", "coupling sweep to CSV");
    sub_sweep->add_option("--config", config_path, "JSON config file")->required();
    sub_sweep->add_option("--out", out_path, "CSV output path")->required();

    auto* sub_fit = app.add_subcommand("fit", "scaling-law fit of a sweep CSV");
    sub_fit->add_option("--config", config_path, "JSON config file")->required();
    sub_fit->add_option("--csv", csv_path, "sweep CSV")->required();
    sub_fit->add_option("--mode", mode, "small | large | auto");
    sub_fit->add_option("--out", out_path, "output file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sub_profile->parsed()) {
            AppConfig cfg = load_config(config_path);
            const double p = scalar_p > 0.0 ? scalar_p : cfg.problem.alpha + cfg.problem.beta;
            GridPtr grid = grid_of(cfg, cfg.problem.dim);
            ShootResult z = solve_scalar_profile(cfg.problem.dim, p, grid);
            write_profile_csv(z.profile, profile_dir + "/profile_Z.csv");
            write_profile_csv(bubble(cfg.problem.dim, 1.0, grid), profile_dir + "/bubble_1.csv");
            json eta = json::array();
            for (double eps : {0.2, 0.1, 0.05, 0.025}) {
                Field e = cutoff_bubble(cfg.problem.dim, eps, grid);
                eta.push_back(json{{"eps", eps},
                                   {"grad_sq", grad_sq(e)},
                                   {"mass_sq", mass_sq(e)},
                                   {"crit_norm", lp_norm_p(e, cfg.problem.two_star())}});
            }
            emit(json{{"dim", cfg.problem.dim},
                      {"p", p},
                      {"initial_height", z.initial_height},
                      {"nehari_residual", z.nehari_residual},
                      {"pohozaev_residual", z.pohozaev_residual},
                      {"mass_sq", mass_sq(z.profile)},
                      {"cutoff_table", eta}},
                 out_path);
        } else if (sub_gn->parsed()) {
            AppConfig cfg = load_config(config_path);
            GridPtr grid = grid_of(cfg, cfg.problem.dim);
            json j;
            j["dim"] = cfg.problem.dim;
            if (scalar_p > 0.0) {
                j["p"] = scalar_p;
                j.update(to_json(gn_constant_scalar(cfg.problem.dim, scalar_p, grid)));
            } else {
                j["alpha"] = cfg.problem.alpha;
                j["beta"] = cfg.problem.beta;
                j.update(to_json(
                    gn_constant_vector(cfg.problem.dim, cfg.problem.alpha, cfg.problem.beta, grid)));
            }
            emit(j, out_path);
        } else if (sub_fiber->parsed()) {
            std::ifstream f(csv_path);
            if (!f) throw config_error("cannot open " + csv_path);
            json in = json::parse(f);
            FiberScalars s = fiber_scalars_from_json(in);
            const double nu = in.at("nu").get<double>();
            double gamma;
            if (in.contains("gamma")) {
                gamma = in.at("gamma").get<double>();
            } else {
                const auto& pj = in.at("params");
                Params p;
                p.dim = pj.value("dim", 3);
                p.alpha = pj.at("alpha").get<double>();
                p.beta = pj.at("beta").get<double>();
                s.two_star = p.two_star();
                gamma = p.gamma();
            }
            emit(to_json(critical_points(s, nu, gamma)), out_path);
        } else if (sub_solve->parsed()) {
            AppConfig cfg = load_config(config_path);
            auto [w, rep] = minimize_ground_state(cfg.problem, cfg.solve);
            if (!profile_out.empty()) write_pair_csv(w, profile_out);
            emit(to_json(rep), out_path);
        } else if (sub_limit->parsed()) {
            AppConfig cfg = load_config(config_path);
            if (closed_form) {
                GridPtr grid = grid_of(cfg, cfg.problem.dim);
                LimitClosedForm lcf = solve_limit_closed_form(cfg.problem, grid);
                if (!profile_out.empty()) write_pair_csv(lcf.pair, profile_out);
                emit(to_json(lcf), out_path);
            } else {
                auto [w, rep] = minimize_limit_system(cfg.problem, cfg.solve);
                if (!profile_out.empty()) write_pair_csv(w, profile_out);
                emit(to_json(rep), out_path);
            }
        } else if (sub_nu1->parsed()) {
            AppConfig cfg = load_config(config_path);
            emit(to_json(estimate_nu1(cfg.problem, cfg.solve, nu1_lo, nu1_hi)), out_path);
        } else if (sub_sweep->parsed()) {
            AppConfig cfg = load_config(config_path);
            if (cfg.sweep_nu.empty()) throw config_error("sweep: config has no sweep section");
            write_sweep_csv(sweep_nu(cfg.problem, cfg.sweep_nu, cfg.solve), out_path);
        } else if (sub_fit->parsed()) {
            AppConfig cfg = load_config(config_path);
            std::vector<SweepRow> rows = read_sweep_csv(csv_path);
            const double g = cfg.problem.gamma();
            const bool small = mode == "small" || (mode == "auto" && g < 2.0);
            json j = small ? to_json(fit_small_nu_scaling(rows, cfg.problem))
                           : to_json(fit_large_nu_scaling(rows, cfg.problem));
            emit(j, out_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
