#include "normstate/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace normstate {

namespace {

struct OdePoint {
    double r, w, dw;
};

// w'' = -(N-1)/r w' + w - |w|^{p-2} w
inline void rhs(int dim, double p, double r, double w, double dw, double& f0, double& f1) {
    f0 = dw;
    f1 = -(dim - 1) / r * dw + w - std::copysign(std::pow(std::abs(w), p - 1.0), w);
}

enum class Shot { low, high };  // low: w(0) too small (turns up), high: crosses zero

// Integrate from the series start and classify the trajectory. When `trace`
// is non-null the accepted steps are recorded up to the classification event.
Shot integrate(int dim, double p, double height, double r_stop, std::vector<OdePoint>* trace) {
    const double r0 = 1e-4;
    double r = r0;
    double w = height + (height - std::pow(height, p - 1.0)) / (2.0 * dim) * r0 * r0;
    double dw = (height - std::pow(height, p - 1.0)) / dim * r0;
    if (trace) {
        trace->clear();
        trace->push_back({0.0, height, 0.0});
        trace->push_back({r, w, dw});
    }

    // classic RKF45 with PI-free halving/raising control
    double h = 1e-4;
    const double h_max = 0.005, h_min = 1e-12, tol = 1e-12;
    while (r < r_stop) {
        if (w <= 0.0) return Shot::high;
        if (dw > 0.0 || w > 2.0 * height) return Shot::low;

        double k1w, k1v, k2w, k2v, k3w, k3v, k4w, k4v, k5w, k5v, k6w, k6v;
        rhs(dim, p, r, w, dw, k1w, k1v);
        rhs(dim, p, r + h / 4, w + h / 4 * k1w, dw + h / 4 * k1v, k2w, k2v);
        rhs(dim, p, r + 3 * h / 8, w + h * (3. / 32 * k1w + 9. / 32 * k2w),
            dw + h * (3. / 32 * k1v + 9. / 32 * k2v), k3w, k3v);
        rhs(dim, p, r + 12 * h / 13,
            w + h * (1932. / 2197 * k1w - 7200. / 2197 * k2w + 7296. / 2197 * k3w),
            dw + h * (1932. / 2197 * k1v - 7200. / 2197 * k2v + 7296. / 2197 * k3v), k4w, k4v);
        rhs(dim, p, r + h,
            w + h * (439. / 216 * k1w - 8. * k2w + 3680. / 513 * k3w - 845. / 4104 * k4w),
            dw + h * (439. / 216 * k1v - 8. * k2v + 3680. / 513 * k3v - 845. / 4104 * k4v), k5w,
            k5v);
        rhs(dim, p, r + h / 2,
            w + h * (-8. / 27 * k1w + 2. * k2w - 3544. / 2565 * k3w + 1859. / 4104 * k4w -
                     11. / 40 * k5w),
            dw + h * (-8. / 27 * k1v + 2. * k2v - 3544. / 2565 * k3v + 1859. / 4104 * k4v -
                      11. / 40 * k5v),
            k6w, k6v);

        const double w5 =
            w + h * (16. / 135 * k1w + 6656. / 12825 * k3w + 28561. / 56430 * k4w -
                     9. / 50 * k5w + 2. / 55 * k6w);
        const double v5 =
            dw + h * (16. / 135 * k1v + 6656. / 12825 * k3v + 28561. / 56430 * k4v -
                      9. / 50 * k5v + 2. / 55 * k6v);
        const double w4 = w + h * (25. / 216 * k1w + 1408. / 2565 * k3w + 2197. / 4104 * k4w -
                                   1. / 5 * k5w);
        const double v4 = dw + h * (25. / 216 * k1v + 1408. / 2565 * k3v + 2197. / 4104 * k4v -
                                    1. / 5 * k5v);

        const double err = std::max(std::abs(w5 - w4), std::abs(v5 - v4));
        const double scale = tol * std::max(1.0, std::max(std::abs(w), std::abs(dw)));
        if (err <= scale || h <= h_min) {
            r += h;
            w = w5;
            dw = v5;
            if (trace) trace->push_back({r, w, dw});
        }
        const double grow = (err > 0.0) ? 0.9 * std::pow(scale / err, 0.2) : 2.0;
        h = std::min(h_max, std::max(h_min, h * std::min(2.0, std::max(0.2, grow))));
    }
    // no event: decide by the direction of the drift away from pure decay
    return (dw + w > 0.0) ? Shot::low : Shot::high;
}

// quintic Hermite on one interval from endpoint values/first/second derivatives
double quintic_eval(double t, double h, double f0, double d0, double s0, double f1, double d1,
                    double s1, bool want_derivative) {
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    if (!want_derivative) {
        const double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
        const double H1 = t - 6 * t3 + 8 * t4 - 3 * t5;
        const double H2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
        const double H3 = 10 * t3 - 15 * t4 + 6 * t5;
        const double H4 = -4 * t3 + 7 * t4 - 3 * t5;
        const double H5 = 0.5 * t3 - t4 + 0.5 * t5;
        return f0 * H0 + h * d0 * H1 + h * h * s0 * H2 + f1 * H3 + h * d1 * H4 + h * h * s1 * H5;
    }
    const double G0 = -30 * t2 + 60 * t3 - 30 * t4;
    const double G1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
    const double G2 = t - 4.5 * t2 + 6 * t3 - 2.5 * t4;
    const double G3 = 30 * t2 - 60 * t3 + 30 * t4;
    const double G4 = -12 * t2 + 28 * t3 - 15 * t4;
    const double G5 = 1.5 * t2 - 4 * t3 + 2.5 * t4;
    return (f0 * G0 + h * d0 * G1 + h * h * s0 * G2 + f1 * G3 + h * d1 * G4 + h * h * s1 * G5) /
           h;
}

double shoot_eval(const ShootResult& z, double r, bool want_derivative) {
    if (r > z.tail_r) {
        const double w = z.tail_c * std::pow(r, -(z.dim - 1) / 2.0) * std::exp(-r);
        return want_derivative ? -w * (1.0 + (z.dim - 1) / (2.0 * r)) : w;
    }
    const auto& rs = z.sample_r;
    const int j =
        static_cast<int>(std::upper_bound(rs.begin(), rs.end(), r) - rs.begin()) - 1;
    const int i = std::min(std::max(j, 0), static_cast<int>(rs.size()) - 2);
    const double h = rs[i + 1] - rs[i];
    const double t = (r - rs[i]) / h;
    return quintic_eval(t, h, z.sample_w[i], z.sample_dw[i], z.sample_ddw[i], z.sample_w[i + 1],
                        z.sample_dw[i + 1], z.sample_ddw[i + 1], want_derivative);
}

}  // namespace

double ShootResult::eval(double r) const { return shoot_eval(*this, r, false); }

double ShootResult::eval_derivative(double r) const { return shoot_eval(*this, r, true); }

ShootResult solve_scalar_profile(int dim, double p, const GridPtr& grid, double tol) {
    if (dim != 3 && dim != 4) throw config_error("solve_scalar_profile: dim must be 3 or 4");
    const double two_star = 2.0 * dim / (dim - 2.0);
    if (!(p > 2.0) || !(p < two_star))
        throw config_error("solve_scalar_profile: need 2 < p < 2N/(N-2)");
    if (!(tol > 0.0)) throw config_error("solve_scalar_profile: tol must be positive");

    const double r_stop = std::max(80.0, 2.0 * grid->r_max);
    double lo = 1.0, hi = 50.0;
    if (integrate(dim, p, lo, r_stop, nullptr) != Shot::low ||
        integrate(dim, p, hi, r_stop, nullptr) != Shot::high)
        throw solver_error("solve_scalar_profile: no dichotomy bracket in [1, 50]");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (integrate(dim, p, mid, r_stop, nullptr) == Shot::low ? lo : hi) = mid;
    }
    const double height = 0.5 * (lo + hi);

    std::vector<OdePoint> trace;
    integrate(dim, p, height, r_stop, &trace);

    // keep the clean monotone part, then graft the far-field asymptotics
    size_t keep = trace.size();
    for (size_t i = 2; i < trace.size(); ++i) {
        if (trace[i].w <= 1e-9 || trace[i].w <= 0.0 || trace[i].dw > 0.0) {
            keep = i;
            break;
        }
    }
    trace.resize(std::max<size_t>(keep, 3));

    ShootResult out;
    out.dim = dim;
    out.initial_height = height;
    const OdePoint& last = trace.back();
    out.tail_r = last.r;
    out.tail_c = last.w * std::pow(last.r, (dim - 1) / 2.0) * std::exp(last.r);

    const int m = static_cast<int>(trace.size());
    out.sample_r.resize(m);
    out.sample_w.resize(m);
    out.sample_dw.resize(m);
    out.sample_ddw.resize(m);
    for (int i = 0; i < m; ++i) {
        out.sample_r[i] = trace[i].r;
        out.sample_w[i] = trace[i].w;
        out.sample_dw[i] = trace[i].dw;
        if (i == 0) {
            out.sample_ddw[i] = (height - std::pow(height, p - 1.0)) / dim;
        } else {
            double f0, f1;
            rhs(dim, p, trace[i].r, trace[i].w, trace[i].dw, f0, f1);
            out.sample_ddw[i] = f1;
        }
    }

    Eigen::ArrayXd pv(grid->size()), pd(grid->size());
    for (int i = 0; i < grid->size(); ++i) {
        pv[i] = out.eval(grid->nodes[i]);
        pd[i] = out.eval_derivative(grid->nodes[i]);
    }
    pd[0] = 0.0;
    out.profile = Field(grid, std::move(pv));
    out.profile_derivative = Field(grid, std::move(pd));

    const double G = integrate_radial(*grid, out.profile_derivative.values.square());
    const double M = mass_sq(out.profile);
    const double P = lp_norm_p(out.profile, p);
    out.nehari_residual = std::abs(G + M - P) / P;
    out.pohozaev_residual =
        std::abs(0.5 * (dim - 2) * G + 0.5 * dim * M - dim / p * P) / (dim / p * P);
    const double target = std::max(1e-6, 100.0 * tol);
    if (out.nehari_residual > target || out.pohozaev_residual > target)
        throw resolution_error("solve_scalar_profile: residual tolerance unreachable on grid");
    return out;
}

double bubble_value(int dim, double eps, double r) {
    const double c = std::pow(dim * (dim - 2.0), (dim - 2.0) / 4.0);
    return c * std::pow(eps / (eps * eps + r * r), (dim - 2.0) / 2.0);
}

double bubble_derivative(int dim, double eps, double r) {
    const double c = std::pow(dim * (dim - 2.0), (dim - 2.0) / 4.0);
    const double q = eps / (eps * eps + r * r);
    return c * (dim - 2.0) / 2.0 * std::pow(q, (dim - 2.0) / 2.0 - 1.0) *
           (-eps * 2.0 * r / ((eps * eps + r * r) * (eps * eps + r * r)));
}

Field bubble(int dim, double eps, const GridPtr& grid) {
    if (!(eps > 0.0)) throw domain_error("bubble: eps must be positive");
    Eigen::ArrayXd v(grid->size());
    for (int i = 0; i < grid->size(); ++i) v[i] = bubble_value(dim, eps, grid->nodes[i]);
    return Field(grid, std::move(v));
}

SobolevEstimate sobolev_constant(int dim, const GridPtr& grid, double tol) {
    auto quotient = [dim](const GridPtr& g) {
        Field u = bubble(dim, 1.0, g);
        const double two_star = 2.0 * dim / (dim - 2.0);
        return grad_sq(u) / std::pow(lp_norm_p(u, two_star), 2.0 / two_star);
    };
    SobolevEstimate est;
    est.value = quotient(grid);
    GridPtr doubled = make_grid(dim, 2.0 * grid->r_max, grid->size(), grid->grading);
    est.truncation_error = std::abs(quotient(doubled) - est.value) / est.value;
    if (est.truncation_error > tol)
        throw resolution_error("sobolev_constant: truncation tail not converged");
    return est;
}

double cutoff_value(double r) {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    const double t = r - 1.0;
    return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

Field cutoff_bubble(int dim, double eps, const GridPtr& grid) {
    if (!(eps > 0.0) || eps > 1.0) throw domain_error("cutoff_bubble: need 0 < eps <= 1");
    Eigen::ArrayXd v(grid->size());
    for (int i = 0; i < grid->size(); ++i) {
        const double r = grid->nodes[i];
        v[i] = cutoff_value(r) * bubble_value(dim, eps, r);
    }
    return Field(grid, std::move(v));
}

namespace {
void write_csv_columns(const std::string& path, const RadialGrid& g,
                       const std::vector<const Eigen::ArrayXd*>& cols,
                       const std::string& header) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw config_error("cannot open output file: " + path);
    f << header << "\r\n";
    char buf[64];
    for (int i = 0; i < g.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", g.nodes[i]);
        f << buf;
        for (const auto* c : cols) {
            std::snprintf(buf, sizeof buf, "%.17g", (*c)[i]);
            f << ',' << buf;
        }
        f << "\r\n";
    }
}
}  // namespace

void write_profile_csv(const Field& u, const std::string& path) {
    write_csv_columns(path, *u.grid, {&u.values}, "r,value");
}

void write_pair_csv(const FieldPair& uv, const std::string& path) {
    write_csv_columns(path, *uv.grid(), {&uv.u.values, &uv.v.values}, "r,u,v");
}

}  // namespace normstate
