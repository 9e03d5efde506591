#include "flowsched/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flowsched {

namespace {

void check_grid(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("interpolant needs >= 2 matching nodes");
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i)
        if (!(x(i) < x(i + 1)))
            throw std::invalid_argument("interpolant abscissae must be strictly increasing");
}

// Fritsch-Carlson limiter: scale (m_i, m_{i+1}) into the monotonicity region
// of the secant d_i.
void limit_slopes(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y, Eigen::ArrayXd& m) {
    const Eigen::Index n = x.size();
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double d = (y(i + 1) - y(i)) / (x(i + 1) - x(i));
        if (d == 0.0) {
            m(i) = 0.0;
            m(i + 1) = 0.0;
            continue;
        }
        const double a = m(i) / d;
        const double b = m(i + 1) / d;
        if (a < 0.0) m(i) = 0.0;
        if (b < 0.0) m(i + 1) = 0.0;
        const double r = std::hypot(std::max(a, 0.0), std::max(b, 0.0));
        if (r > 3.0) {
            const double s = 3.0 / r;
            m(i) *= s;
            m(i + 1) *= s;
        }
    }
}

}  // namespace

MonotoneCubic::MonotoneCubic(Eigen::ArrayXd x, Eigen::ArrayXd y, Eigen::ArrayXd m)
    : x_(std::move(x)), y_(std::move(y)), m_(std::move(m)) {}

MonotoneCubic MonotoneCubic::fritsch_carlson(Eigen::ArrayXd x, Eigen::ArrayXd y) {
    check_grid(x, y);
    const Eigen::Index n = x.size();
    Eigen::ArrayXd m(n);
    Eigen::ArrayXd d(n - 1);
    for (Eigen::Index i = 0; i + 1 < n; ++i)
        d(i) = (y(i + 1) - y(i)) / (x(i + 1) - x(i));
    m(0) = d(0);
    m(n - 1) = d(n - 2);
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
        if (d(i - 1) * d(i) <= 0.0) {
            m(i) = 0.0;
        } else {
            // weighted harmonic mean, robust on non-uniform grids
            const double w1 = 2.0 * (x(i + 1) - x(i)) + (x(i) - x(i - 1));
            const double w2 = (x(i + 1) - x(i)) + 2.0 * (x(i) - x(i - 1));
            m(i) = (w1 + w2) / (w1 / d(i - 1) + w2 / d(i));
        }
    }
    limit_slopes(x, y, m);
    return MonotoneCubic(std::move(x), std::move(y), std::move(m));
}

MonotoneCubic MonotoneCubic::with_slopes(Eigen::ArrayXd x, Eigen::ArrayXd y,
                                         Eigen::ArrayXd slopes) {
    check_grid(x, y);
    if (slopes.size() != x.size())
        throw std::invalid_argument("slope array size mismatch");
    limit_slopes(x, y, slopes);
    return MonotoneCubic(std::move(x), std::move(y), std::move(slopes));
}

Eigen::Index MonotoneCubic::cell(double x) const {
    const double* begin = x_.data();
    const double* end = begin + x_.size();
    Eigen::Index i = std::upper_bound(begin, end, x) - begin - 1;
    return std::clamp<Eigen::Index>(i, 0, x_.size() - 2);
}

double MonotoneCubic::eval(double x) const {
    const Eigen::Index i = cell(x);
    const double h = x_(i + 1) - x_(i);
    const double s = (x - x_(i)) / h;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    return h00 * y_(i) + h10 * h * m_(i) + h01 * y_(i + 1) + h11 * h * m_(i + 1);
}

double MonotoneCubic::deriv(double x) const {
    const Eigen::Index i = cell(x);
    const double h = x_(i + 1) - x_(i);
    const double s = (x - x_(i)) / h;
    const double s2 = s * s;
    const double d00 = (6.0 * s2 - 6.0 * s) / h;
    const double d10 = 3.0 * s2 - 4.0 * s + 1.0;
    const double d01 = (-6.0 * s2 + 6.0 * s) / h;
    const double d11 = 3.0 * s2 - 2.0 * s;
    return d00 * y_(i) + d10 * m_(i) + d01 * y_(i + 1) + d11 * m_(i + 1);
}

double MonotoneCubic::second_deriv(double x) const {
    const Eigen::Index i = cell(x);
    const double h = x_(i + 1) - x_(i);
    const double s = (x - x_(i)) / h;
    const double dd00 = (12.0 * s - 6.0) / (h * h);
    const double dd10 = (6.0 * s - 4.0) / h;
    const double dd01 = (-12.0 * s + 6.0) / (h * h);
    const double dd11 = (6.0 * s - 2.0) / h;
    return dd00 * y_(i) + dd10 * m_(i) + dd01 * y_(i + 1) + dd11 * m_(i + 1);
}

double MonotoneCubic::solve(double y) const {
    double lo = x_front();
    double hi = x_back();
    if (y <= eval(lo)) return lo;
    if (y >= eval(hi)) return hi;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (eval(mid) < y)
            lo = mid;
        else
            hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) {
        const double d = deriv(x);
        if (d <= 0.0) break;
        const double step = (eval(x) - y) / d;
        const double next = x - step;
        if (next < lo || next > hi) break;
        x = next;
        if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

}  // namespace flowsched
