#include "normstate/interp.hpp"

#include <algorithm>
#include <cmath>

#include "normstate/errors.hpp"

namespace normstate {

PchipInterpolant::PchipInterpolant(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y) : x_(x), y_(y) {
    const int n = static_cast<int>(x.size());
    if (n < 2 || y.size() != n) throw config_error("PchipInterpolant: bad knot data");
    d_.resize(n);
    Eigen::ArrayXd h(n - 1), delta(n - 1);
    for (int i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        if (!(h[i] > 0.0)) throw config_error("PchipInterpolant: knots must increase");
        delta[i] = (y[i + 1] - y[i]) / h[i];
    }
    if (n == 2) {
        d_[0] = d_[1] = delta[0];
        return;
    }
    // interior slopes: weighted harmonic mean, zero across sign changes
    for (int i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            d_[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    // one-sided ends (shape-limited, standard PCHIP rule)
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (d * d0 <= 0.0)
            d = 0.0;
        else if (d0 * d1 <= 0.0 && std::abs(d) > 3.0 * std::abs(d0))
            d = 3.0 * d0;
        return d;
    };
    d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

double PchipInterpolant::operator()(double xq) const {
    const int n = static_cast<int>(x_.size());
    if (xq <= x_[0]) return y_[0];
    if (xq >= x_[n - 1]) return y_[n - 1];
    const double* begin = x_.data();
    int j = static_cast<int>(std::upper_bound(begin, begin + n, xq) - begin) - 1;
    j = std::min(std::max(j, 0), n - 2);
    const double h = x_[j + 1] - x_[j];
    const double t = (xq - x_[j]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[j] + h10 * h * d_[j] + h01 * y_[j + 1] + h11 * h * d_[j + 1];
}

}  // namespace normstate
