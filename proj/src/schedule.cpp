#include "flowsched/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace flowsched {

const char* to_string(ScheduleKind kind) {
    switch (kind) {
        case ScheduleKind::Trivial: return "trivial";
        case ScheduleKind::SimpleF: return "simple_f";
        case ScheduleKind::SimpleG: return "simple_g";
        case ScheduleKind::Piecewise: return "piecewise";
        case ScheduleKind::Tabulated: return "tabulated";
    }
    return "unknown";
}

std::optional<TransitionPoint> transition_time(const SpectralBounds& bounds) {
    const double f = bounds.f_star;
    const double g = bounds.g_star;
    // A switch requires the dilation and contraction branches to cross at
    // some tau in [0,1], which needs g < 0 < f. Equality f == 0 or g == 0
    // leaves a single binding branch on all of [0,1].
    if (!(g < 0.0) || !(f > 0.0)) return std::nullopt;

    const double num = std::log(0.5 * (1.0 - f / g));
    const double den =
        -std::log1p(g) + std::log(0.25 * (f / -g + -g / f + 2.0));
    const double t0 = num / den;
    if (!(t0 >= 0.0 && t0 <= 1.0)) return std::nullopt;
    return TransitionPoint{t0, -0.5 * (1.0 / f + 1.0 / g)};
}

Schedule Schedule::make_trivial(bool warning) {
    Schedule s(ScheduleKind::Trivial);
    s.warning_ = warning;
    return s;
}

Schedule Schedule::make_simple_f(double f_star, double g_star) {
    if (!(f_star > 0.0))
        throw std::domain_error("simple_f schedule requires f_star > 0");
    Schedule s(ScheduleKind::SimpleF);
    s.f_ = f_star;
    s.g_ = g_star;
    s.ln_a_ = std::log1p(f_star);
    s.inv_z_ = s.ln_a_;
    return s;
}

Schedule Schedule::make_simple_g(double f_star, double g_star) {
    if (!(g_star > -1.0 && g_star < 0.0))
        throw std::domain_error("simple_g schedule requires -1 < g_star < 0");
    Schedule s(ScheduleKind::SimpleG);
    s.f_ = f_star;
    s.g_ = g_star;
    s.ln_a_ = std::log1p(g_star);
    s.inv_z_ = -s.ln_a_;
    return s;
}

Schedule Schedule::make_piecewise(double f_star, double g_star) {
    const auto tp = transition_time(SpectralBounds(f_star, g_star));
    if (!tp)
        throw std::domain_error("piecewise schedule requires a transition time in [0,1]");
    Schedule s(ScheduleKind::Piecewise);
    s.f_ = f_star;
    s.g_ = g_star;
    s.t0_ = tp->t0;
    s.tau0_ = tp->tau0;
    // First branch on [0,t0]: tau = (A^t - 1)/f with ln A = 1/Z. Second
    // branch on [t0,1]: tau = c2 * B^t * D^(1-t) - 1/g with
    //   B = (g+1) / ((1 - g/f)/2),  D = (1 - f/g)/2,  c2 = (1/g - 1/f)/2,
    // matched at t0 by construction.
    s.inv_z_ = -std::log1p(g_star) +
               std::log(0.25 * (f_star / -g_star + -g_star / f_star + 2.0));
    s.ln_a_ = s.inv_z_;
    const double tau0_f = 0.5 * (1.0 - f_star / g_star);  // tau0*f + 1
    const double tau0_g = 0.5 * (1.0 - g_star / f_star);  // tau0*g + 1
    s.ln_b_ = std::log1p(g_star) - std::log(tau0_g);
    s.ln_d_ = std::log(tau0_f);
    s.c2_ = 0.5 * (1.0 / g_star - 1.0 / f_star);
    return s;
}

namespace {

// Tables must cover [0,1] -> [0,1] exactly; endpoints are snapped after a
// tight consistency check so boundary identities hold bit-for-bit.
void snap_endpoints(Eigen::ArrayXd& t, Eigen::ArrayXd& tau) {
    if (t.size() != tau.size() || t.size() < 2)
        throw std::invalid_argument("tabulated schedule needs >= 2 (t, tau) pairs");
    const Eigen::Index n = t.size();
    if (std::abs(t(0)) > 1e-12 || std::abs(t(n - 1) - 1.0) > 1e-12 ||
        std::abs(tau(0)) > 1e-12 || std::abs(tau(n - 1) - 1.0) > 1e-12)
        throw std::domain_error("tabulated schedule must run from (0,0) to (1,1)");
    t(0) = 0.0;
    t(n - 1) = 1.0;
    tau(0) = 0.0;
    tau(n - 1) = 1.0;
}

}  // namespace

Schedule Schedule::make_tabulated(Eigen::ArrayXd t, Eigen::ArrayXd tau) {
    snap_endpoints(t, tau);
    Schedule s(ScheduleKind::Tabulated);
    s.t_of_tau_ = MonotoneCubic::fritsch_carlson(std::move(tau), std::move(t));
    return s;
}

Schedule Schedule::make_tabulated(Eigen::ArrayXd t, Eigen::ArrayXd tau,
                                  Eigen::ArrayXd dtau_dt) {
    snap_endpoints(t, tau);
    if ((dtau_dt <= 0.0).any())
        throw std::domain_error("tabulated schedule slopes must be positive");
    Eigen::ArrayXd dt_dtau = dtau_dt.inverse();
    Schedule s(ScheduleKind::Tabulated);
    s.t_of_tau_ =
        MonotoneCubic::with_slopes(std::move(tau), std::move(t), std::move(dt_dtau));
    return s;
}

void Schedule::check_time(double t) {
    if (!(t >= 0.0 && t <= 1.0))
        throw std::domain_error("schedule time must lie in [0,1]");
}

double Schedule::eval(double t) const {
    check_time(t);
    switch (kind_) {
        case ScheduleKind::Trivial:
            return t;
        case ScheduleKind::SimpleF:
            return std::expm1(t * ln_a_) / f_;
        case ScheduleKind::SimpleG:
            return std::expm1(t * ln_a_) / g_;
        case ScheduleKind::Piecewise:
            if (t <= t0_) return std::expm1(t * ln_a_) / f_;
            return c2_ * std::exp(t * ln_b_ + (1.0 - t) * ln_d_) - 1.0 / g_;
        case ScheduleKind::Tabulated:
            return t_of_tau_.solve(t);
    }
    return t;
}

double Schedule::deriv(double t) const {
    check_time(t);
    switch (kind_) {
        case ScheduleKind::Trivial:
            return 1.0;
        case ScheduleKind::SimpleF:
            return ln_a_ * std::exp(t * ln_a_) / f_;
        case ScheduleKind::SimpleG:
            return ln_a_ * std::exp(t * ln_a_) / g_;
        case ScheduleKind::Piecewise:
            if (t <= t0_) return ln_a_ * std::exp(t * ln_a_) / f_;
            return (ln_b_ - ln_d_) * c2_ * std::exp(t * ln_b_ + (1.0 - t) * ln_d_);
        case ScheduleKind::Tabulated: {
            const double tau = t_of_tau_.solve(t);
            return 1.0 / t_of_tau_.deriv(tau);
        }
    }
    return 1.0;
}

double Schedule::second_deriv(double t) const {
    check_time(t);
    switch (kind_) {
        case ScheduleKind::Trivial:
            return 0.0;
        case ScheduleKind::SimpleF:
            return ln_a_ * ln_a_ * std::exp(t * ln_a_) / f_;
        case ScheduleKind::SimpleG:
            return ln_a_ * ln_a_ * std::exp(t * ln_a_) / g_;
        case ScheduleKind::Piecewise: {
            if (t <= t0_) return ln_a_ * ln_a_ * std::exp(t * ln_a_) / f_;
            const double r = ln_b_ - ln_d_;
            return r * r * c2_ * std::exp(t * ln_b_ + (1.0 - t) * ln_d_);
        }
        case ScheduleKind::Tabulated: {
            const double tau = t_of_tau_.solve(t);
            const double dt = t_of_tau_.deriv(tau);
            const double ddt = t_of_tau_.second_deriv(tau);
            return -ddt / (dt * dt * dt);
        }
    }
    return 0.0;
}

double Schedule::inverse(double tau) const {
    if (!(tau >= 0.0 && tau <= 1.0))
        throw std::domain_error("schedule value must lie in [0,1]");
    switch (kind_) {
        case ScheduleKind::Trivial:
            return tau;
        case ScheduleKind::SimpleF:
            return std::log1p(tau * f_) / ln_a_;
        case ScheduleKind::SimpleG:
            return std::log1p(tau * g_) / ln_a_;
        case ScheduleKind::Piecewise: {
            if (tau <= tau0_) return std::log1p(tau * f_) / inv_z_;
            const double num = std::log1p(tau * g_) - std::log1p(tau0_ * g_);
            return t0_ - num / inv_z_;
        }
        case ScheduleKind::Tabulated:
            return t_of_tau_.eval(tau);
    }
    return tau;
}

Eigen::ArrayXd Schedule::table_t() const {
    if (kind_ != ScheduleKind::Tabulated) return {};
    return t_of_tau_.ordinates();
}

Eigen::ArrayXd Schedule::table_tau() const {
    if (kind_ != ScheduleKind::Tabulated) return {};
    return t_of_tau_.abscissae();
}

Eigen::ArrayXd Schedule::table_dtau_dt() const {
    if (kind_ != ScheduleKind::Tabulated) return {};
    return t_of_tau_.slopes().inverse();
}

Schedule trivial_schedule() { return Schedule::make_trivial(); }

Schedule optimal_schedule(const SpectralBounds& bounds) {
    if (bounds.trivial()) return Schedule::make_trivial(true);
    if (transition_time(bounds)) return Schedule::make_piecewise(bounds.f_star, bounds.g_star);
    if (bounds.f_star >= -bounds.g_star)
        return Schedule::make_simple_f(bounds.f_star, bounds.g_star);
    return Schedule::make_simple_g(bounds.f_star, bounds.g_star);
}

}  // namespace flowsched
