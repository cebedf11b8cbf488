#include "normstate/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "normstate/gn.hpp"

namespace normstate {

const char* kSweepCsvHeader = "nu,m,lambda1,lambda2,A,D,t_fit,dist_G,dist_bubble";

namespace {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

int worker_count() {
    if (const char* env = std::getenv("NORMSTATE_THREADS")) {
        const int k = std::atoi(env);
        if (k > 0) return k;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::min(hw == 0 ? 1u : hw, 8u));
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::string sweep_rows_to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << kSweepCsvHeader << "\r\n";
    for (const auto& r : rows) {
        os << fmt(r.nu) << ',' << fmt(r.m) << ',' << fmt(r.lambda1) << ',' << fmt(r.lambda2)
           << ',' << fmt(r.A) << ',' << fmt(r.D) << ',' << fmt(r.t_fit) << ',' << fmt(r.dist_G)
           << ',' << fmt(r.dist_bubble) << "\r\n";
    }
    return os.str();
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot open output file: " + path);
    f << sweep_rows_to_csv(rows);
}

std::vector<SweepRow> read_sweep_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw config_error("cannot open sweep CSV: " + path);
    std::string line;
    std::getline(f, line);
    std::vector<SweepRow> rows;
    while (std::getline(f, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        SweepRow r;
        double* cols[9] = {&r.nu, &r.m,     &r.lambda1, &r.lambda2,     &r.A,
                           &r.D,  &r.t_fit, &r.dist_G,  &r.dist_bubble};
        std::istringstream ls(line);
        std::string cell;
        for (int k = 0; k < 9 && std::getline(ls, cell, ','); ++k) *cols[k] = std::strtod(cell.c_str(), nullptr);
        r.converged = std::isfinite(r.m);
        rows.push_back(r);
    }
    return rows;
}

std::vector<SweepRow> sweep_nu(const Params& p, const std::vector<double>& nu_values,
                               const SolveConfig& cfg) {
    std::vector<double> nus = nu_values;
    std::sort(nus.begin(), nus.end());

    // shared references for the distance columns, built once
    GridPtr grid = make_grid(p.dim, cfg.grid_r_max, cfg.grid_count, cfg.grid_grading);
    std::optional<FieldPair> reference;
    bool fallback_reference = false;
    const double g = p.gamma();
    if (std::abs(g - 2.0) > 1e-12) {
        if (std::abs(p.a * p.a * p.beta - p.b * p.b * p.alpha) <=
            1e-9 * std::max(p.a * p.a * p.beta, p.b * p.b * p.alpha)) {
            reference = solve_limit_closed_form(p, grid).pair;
        } else {
            reference = minimize_limit_system(p, cfg).first;
            fallback_reference = true;
        }
    }

    std::vector<SweepRow> rows(nus.size());
    std::atomic<size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= nus.size()) return;
            Params q = p;
            q.nu = nus[i];
            SweepRow row;
            row.nu = nus[i];
            try {
                auto [w, rep] = minimize_ground_state(q, cfg);
                row.converged = rep.converged;
                if (rep.converged) {
                    row.m = rep.energy;
                    row.lambda1 = rep.lambda1;
                    row.lambda2 = rep.lambda2;
                    row.A = rep.A;
                    row.D = rep.D;
                    row.t_fit = 0.5 * std::log(rep.A);
                    // limit-fiber rescaling onto L(a,b), where the family lives
                    row.dist_G = kNaN;
                    if (reference) {
                        LimitProjection proj = limit_fiber_project(w, q);
                        FieldPair wl = l2_scale(proj.t_star, w);
                        row.dist_G = dist_to_limit_family(wl, q, &*reference).value;
                    }
                    // bubble distance needs the minimizer at its true scale
                    row.dist_bubble = kNaN;
                    if (std::abs(rep.t_total) < std::log(8.0)) {
                        FieldPair actual = l2_scale(rep.t_total, w);
                        row.dist_bubble = dist_to_bubble_family(actual).value;
                    }
                } else {
                    row.m = row.lambda1 = row.lambda2 = kNaN;
                    row.A = row.D = row.t_fit = row.dist_G = row.dist_bubble = kNaN;
                }
            } catch (const std::runtime_error&) {
                row.converged = false;
                row.m = row.lambda1 = row.lambda2 = kNaN;
                row.A = row.D = row.t_fit = row.dist_G = row.dist_bubble = kNaN;
            }
            rows[i] = row;
        }
    };
    const int workers = std::min<int>(worker_count(), static_cast<int>(nus.size()));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < workers; ++k) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    (void)fallback_reference;
    return rows;
}

PowerLawFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 4)
        throw domain_error("fit_power_law: need >= 4 paired points");
    const int n = static_cast<int>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
            throw domain_error("fit_power_law: data must be positive");
        const double lx = std::log(xs[i]), ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        syy += ly * ly;
    }
    PowerLawFit fit;
    const double den = n * sxx - sx * sx;
    fit.exponent = (n * sxy - sx * sy) / den;
    fit.prefactor = std::exp((sy - fit.exponent * sx) / n);
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (int i = 0; i < n; ++i) {
        const double pred = std::log(fit.prefactor) + fit.exponent * std::log(xs[i]);
        ss_res += (std::log(ys[i]) - pred) * (std::log(ys[i]) - pred);
    }
    fit.r2 = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

PowerLawFit fit_log_linear(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 4)
        throw domain_error("fit_log_linear: need >= 4 paired points");
    const int n = static_cast<int>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        if (!(xs[i] > 0.0)) throw domain_error("fit_log_linear: abscissae must be positive");
        const double lx = std::log(xs[i]);
        sx += lx;
        sy += ys[i];
        sxx += lx * lx;
        sxy += lx * ys[i];
    }
    PowerLawFit fit;
    fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);  // slope vs ln x
    fit.prefactor = (sy - fit.exponent * sx) / n;
    fit.r2 = 1.0;
    return fit;
}

namespace {

std::vector<SweepRow> converged_rows(const std::vector<SweepRow>& rows) {
    std::vector<SweepRow> out;
    for (const auto& r : rows)
        if (r.converged && r.nu > 0.0) out.push_back(r);
    if (out.size() < 4) throw domain_error("scaling fit: fewer than 4 converged rows");
    double lo = out.front().nu, hi = out.front().nu;
    for (const auto& r : out) {
        lo = std::min(lo, r.nu);
        hi = std::max(hi, r.nu);
    }
    if (hi / lo < std::pow(10.0, 1.5))
        throw domain_error("scaling fit: sweep spans less than 1.5 decades");
    return out;
}

}  // namespace

SmallNuFit fit_small_nu_scaling(const std::vector<SweepRow>& rows, const Params& p) {
    const double g = p.gamma();
    if (!(g < 2.0)) throw domain_error("fit_small_nu_scaling: requires gamma < 2");
    std::vector<SweepRow> use = converged_rows(rows);
    std::vector<double> nu, lam, grad, tfit;
    for (const auto& r : use) {
        nu.push_back(r.nu);
        lam.push_back(r.lambda1 + r.lambda2);
        grad.push_back(r.A);
        tfit.push_back(r.t_fit);
    }
    SmallNuFit fit;
    fit.rows_used = static_cast<int>(use.size());
    fit.exp_lambda = fit_power_law(nu, lam).exponent;
    fit.exp_grad = fit_power_law(nu, grad).exponent;
    fit.slope_tfit = fit_log_linear(nu, tfit).exponent;
    fit.target_exp = 2.0 / (2.0 - g);
    fit.target_slope = 1.0 / (2.0 - g);
    return fit;
}

LargeNuFit fit_large_nu_scaling(const std::vector<SweepRow>& rows, const Params& p) {
    const double g = p.gamma();
    if (!(g > 2.0)) throw domain_error("fit_large_nu_scaling: requires gamma > 2");
    std::vector<SweepRow> use = converged_rows(rows);
    std::vector<double> nu, m;
    for (const auto& r : use) {
        nu.push_back(r.nu);
        m.push_back(r.m);
    }
    LargeNuFit fit;
    fit.rows_used = static_cast<int>(use.size());
    PowerLawFit pw = fit_power_law(nu, m);
    fit.exp_m = pw.exponent;
    fit.prefactor = pw.prefactor;
    fit.target_exp = 2.0 / (2.0 - g);

    GridPtr zgrid = make_grid(p.dim, 30.0, 4096, Grading::uniform);
    const double c_vec = gn_constant_vector(p.dim, p.alpha, p.beta, zgrid).oracle_value;
    const double l_ab = limit_energy_closed_form(p, c_vec);
    fit.d0 = d0_constant(p, l_ab);
    fit.prefactor_target =
        (g - 2.0) / (2.0 * g) * std::pow(g * fit.d0, 2.0 / (2.0 - g));
    return fit;
}

LimitDistance dist_to_limit_family(const FieldPair& uv, const Params& p,
                                   const FieldPair* reference) {
    LimitDistance out;
    std::optional<FieldPair> own;
    if (reference == nullptr) {
        if (std::abs(p.a * p.a * p.beta - p.b * p.b * p.alpha) <=
            1e-9 * std::max(p.a * p.a * p.beta, p.b * p.b * p.alpha)) {
            own = solve_limit_closed_form(p, uv.grid()).pair;
        } else {
            SolveConfig cfg;
            cfg.grid_count = uv.grid()->size();
            cfg.grid_r_max = uv.grid()->r_max;
            cfg.grid_grading = uv.grid()->grading;
            own = minimize_limit_system(p, cfg).first;
            out.numeric_fallback = true;
        }
        reference = &*own;
    }
    out.value = std::sqrt(h1_dist_sq(uv.u, reference->u) + h1_dist_sq(uv.v, reference->v));
    return out;
}

BubbleDistance dist_to_bubble_family(const FieldPair& uv) {
    const GridPtr& grid = uv.grid();
    const int dim = grid->dim;
    auto gap_sq = [&](const Field& comp, double log_eps) {
        Field ub = bubble(dim, std::exp(log_eps), grid);
        return grad_sq(Field(grid, comp.values - ub.values));
    };
    auto best_over_eps = [&](const Field& comp) {
        // golden-section on log eps in [1e-3, 10]
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = std::log(1e-3), b = std::log(10.0);
        double c = b - gr * (b - a), d = a + gr * (b - a);
        double fc = gap_sq(comp, c), fd = gap_sq(comp, d);
        for (int it = 0; it < 60; ++it) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - gr * (b - a);
                fc = gap_sq(comp, c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + gr * (b - a);
                fd = gap_sq(comp, d);
            }
        }
        return std::min(fc, fd);
    };
    const double first = best_over_eps(uv.u) + grad_sq(uv.v);
    const double second = best_over_eps(uv.v) + grad_sq(uv.u);
    BubbleDistance out;
    if (first <= second) {
        out.value = std::sqrt(first);
        out.which_component = 0;
    } else {
        out.value = std::sqrt(second);
        out.which_component = 1;
    }
    return out;
}

}  // namespace normstate
