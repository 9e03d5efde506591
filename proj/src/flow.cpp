#include "flowsched/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "flowsched/lipschitz.hpp"

namespace flowsched {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TransportMap1D TransportMap1D::affine(double slope, double intercept) {
    if (!(slope > 0.0))
        throw MapNotAdmissibleError("affine map requires positive slope");
    TransportMap1D m;
    m.kind_ = Kind::Affine;
    m.a_ = slope;
    m.b_ = intercept;
    m.lo_ = -kInf;
    m.hi_ = kInf;
    return m;
}

TransportMap1D TransportMap1D::cdf_composed(GaussianMixture source, GaussianMixture target,
                                            double delta, Eigen::Index n_cache) {
    if (!(delta > 0.0 && delta < 0.5))
        throw std::domain_error("truncation quantile must lie in (0, 0.5)");
    if (n_cache < 2) throw std::invalid_argument("quantile cache needs n_cache >= 2");
    TransportMap1D m;
    m.kind_ = Kind::CdfComposed;
    m.delta_ = delta;
    m.source_ = std::move(source);
    m.target_ = std::move(target);
    m.lo_ = m.source_->quantile(delta);
    m.hi_ = m.source_->quantile(1.0 - delta);
    m.cache_q_ = Eigen::ArrayXd::LinSpaced(n_cache, delta, 1.0 - delta);
    m.cache_x_ = Eigen::ArrayXd(n_cache);
    for (Eigen::Index j = 0; j < n_cache; ++j)
        m.cache_x_(j) = m.target_->quantile(m.cache_q_(j));
    return m;
}

bool TransportMap1D::bounded() const { return std::isfinite(lo_) && std::isfinite(hi_); }

double TransportMap1D::quantile_target(double q) const {
    if (q <= cache_q_(0) || q >= cache_q_(cache_q_.size() - 1))
        return target_->quantile(q);
    const double* begin = cache_q_.data();
    const double* end = begin + cache_q_.size();
    const Eigen::Index j = std::upper_bound(begin, end, q) - begin - 1;
    double lo = cache_x_(j);
    double hi = cache_x_(j + 1);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (target_->cdf(mid) < q)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-13 * std::max(1.0, std::max(std::abs(lo), std::abs(hi))))
            break;
    }
    return 0.5 * (lo + hi);
}

double TransportMap1D::operator()(double x) const {
    if (kind_ == Kind::Affine) return a_ * x + b_;
    const double q =
        std::clamp(source_->cdf(x), std::numeric_limits<double>::min(), 1.0 - 1e-16);
    return quantile_target(q);
}

double TransportMap1D::deriv(double x) const {
    if (kind_ == Kind::Affine) return a_;
    // Change of variables: T'(x) = p_src(x) / p_tgt(T(x)), in log space to
    // survive far-tail density ratios.
    const double tx = (*this)(x);
    return std::exp(source_->log_pdf(x) - target_->log_pdf(tx));
}

TransportMap1D gaussian_map(double mu1, double theta1, double mu2, double theta2) {
    if (!(theta1 > 0.0) || !(theta2 > 0.0))
        throw std::domain_error("gaussian map requires positive standard deviations");
    const double a = theta2 / theta1;
    return TransportMap1D::affine(a, mu2 - a * mu1);
}

TransportMap1D gmm_map(const GaussianMixture& source, const GaussianMixture& target,
                       double delta, Eigen::Index n_cache) {
    return TransportMap1D::cdf_composed(source, target, delta, n_cache);
}

SpectralField field_from_map1d(const TransportMap1D& map, double lo, double hi,
                               Eigen::Index n) {
    if (n < 2) throw std::invalid_argument("field_from_map1d needs n >= 2");
    if (!(hi > lo)) throw std::invalid_argument("field_from_map1d needs hi > lo");
    if (map.bounded()) {
        const double slack = 1e-9 * (map.domain_hi() - map.domain_lo());
        if (lo < map.domain_lo() - slack || hi > map.domain_hi() + slack)
            throw std::domain_error("requested interval exceeds the map working domain");
    }
    Eigen::ArrayXd grid = Eigen::ArrayXd::LinSpaced(n, lo, hi);
    Eigen::ArrayXd dev(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = map.deriv(grid(i));
        if (!(d > 0.0) || !std::isfinite(d))
            throw MapNotAdmissibleError("map not admissible: non-positive derivative on grid");
        dev(i) = d - 1.0;
    }
    const double h = (hi - lo) / double(n - 1);
    Eigen::ArrayXd w = Eigen::ArrayXd::Constant(n, h);
    w(0) *= 0.5;
    w(n - 1) *= 0.5;
    return SpectralField(std::move(grid), dev, dev, std::move(w));
}

FlowTrajectory exact_flow(const TransportMap1D& map, const Schedule& schedule,
                          double x0, const Eigen::ArrayXd& times) {
    const Eigen::Index n = times.size();
    if (n < 1) throw std::invalid_argument("exact_flow needs at least one time");
    if (times(0) != 0.0 || times(n - 1) != 1.0)
        throw std::invalid_argument("trajectory times must run from 0 to 1");
    for (Eigen::Index k = 0; k + 1 < n; ++k)
        if (!(times(k) < times(k + 1)))
            throw std::invalid_argument("trajectory times must be strictly increasing");
    const double tx0 = map(x0);
    FlowTrajectory traj;
    traj.x0 = x0;
    traj.times = times;
    traj.positions = Eigen::ArrayXd(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double tau = schedule.eval(times(k));
        traj.positions(k) = (1.0 - tau) * x0 + tau * tx0;
    }
    traj.method = FlowTrajectory::Method::Exact;
    return traj;
}

namespace {

// Preimage of y under x -> (1-tau) x + tau T(x), strictly increasing in x.
double invert_flow_map(const TransportMap1D& map, double tau, double y) {
    if (tau <= 0.0) return y;
    auto phi = [&](double x) { return (1.0 - tau) * x + tau * map(x); };
    double lo, hi;
    if (map.bounded()) {
        lo = map.domain_lo();
        hi = map.domain_hi();
        if (y < phi(lo) || y > phi(hi))
            throw std::domain_error("position outside the scheduled flow range");
    } else {
        double r = 1.0 + std::abs(y);
        lo = y - r;
        hi = y + r;
        for (int it = 0; it < 200 && phi(lo) > y; ++it) {
            r *= 2.0;
            lo = y - r;
        }
        for (int it = 0; it < 200 && phi(hi) < y; ++it) {
            r *= 2.0;
            hi = y + r;
        }
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (phi(mid) < y)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi))))
            break;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) {
        const double dphi = 1.0 - tau + tau * map.deriv(x);
        if (!(dphi > 0.0)) break;
        const double step = (phi(x) - y) / dphi;
        const double next = x - step;
        if (next < lo || next > hi) break;
        x = next;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

}  // namespace

double velocity(const TransportMap1D& map, const Schedule& schedule, double y, double t) {
    const double tau = schedule.eval(t);
    const double x = invert_flow_map(map, tau, y);
    return schedule.deriv(t) * (map(x) - x);
}

FlowTrajectory euler_flow(const TransportMap1D& map, const Schedule& schedule,
                          double x0, int n_steps) {
    if (n_steps < 1) throw std::invalid_argument("euler_flow needs n_steps >= 1");
    const double h = 1.0 / double(n_steps);
    FlowTrajectory traj;
    traj.x0 = x0;
    traj.method = FlowTrajectory::Method::Euler;
    traj.step = h;
    traj.times = Eigen::ArrayXd(n_steps + 1);
    traj.positions = Eigen::ArrayXd(n_steps + 1);
    double y = x0;
    for (int k = 0; k <= n_steps; ++k) {
        const double t = (k == n_steps) ? 1.0 : double(k) * h;
        traj.times(k) = t;
        traj.positions(k) = y;
        if (k < n_steps) y += h * velocity(map, schedule, y, t);
    }
    return traj;
}

double error_bound(const SpectralBounds& bounds, const TransportMap1D& map,
                   const Schedule& schedule, double h, double lo, double hi) {
    if (!(h > 0.0)) throw std::invalid_argument("error_bound needs h > 0");
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
        throw std::invalid_argument("error_bound needs a finite interval");

    const int nt = 1025;
    double sup_dd = 0.0;
    for (int i = 0; i < nt; ++i) {
        const double t = double(i) / double(nt - 1);
        sup_dd = std::max(sup_dd, std::abs(schedule.second_deriv(t)));
    }
    if (schedule.kind() == ScheduleKind::Piecewise) {
        // tau_ddot jumps at t0; take both one-sided values.
        const double t0 = schedule.t0();
        sup_dd = std::max(sup_dd, std::abs(schedule.second_deriv(t0)));
        const double t0p = std::nextafter(t0, 2.0);
        if (t0p <= 1.0) sup_dd = std::max(sup_dd, std::abs(schedule.second_deriv(t0p)));
    }

    const int nx = 1025;
    double sup_disp = 0.0;
    for (int i = 0; i < nx; ++i) {
        const double x = lo + (hi - lo) * double(i) / double(nx - 1);
        sup_disp = std::max(sup_disp, std::abs(map(x) - x));
    }

    const double m_const = sup_dd * sup_disp;
    const double lambda = lambda_of_schedule(bounds, schedule);
    const double growth = lambda < 1e-8 ? 1.0 + 0.5 * lambda : std::expm1(lambda) / lambda;
    return 0.5 * h * m_const * growth;
}

}  // namespace flowsched
