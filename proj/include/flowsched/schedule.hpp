#pragma once

#include <optional>

#include <Eigen/Core>

#include "flowsched/interpolation.hpp"
#include "flowsched/spectral.hpp"

namespace flowsched {

enum class ScheduleKind { Trivial, SimpleF, SimpleG, Piecewise, Tabulated };

const char* to_string(ScheduleKind kind);

struct TransitionPoint {
    double t0 = 0.0;
    double tau0 = 0.0;
};

// Time where the binding term of the Lipschitz objective switches from the
// dilation branch (f_star) to the contraction branch (g_star), together with
// the schedule value there. Empty when no switch happens inside [0, 1],
// including the degenerate f_star == g_star case.
std::optional<TransitionPoint> transition_time(const SpectralBounds& bounds);

// Monotone C^1 time reparameterization tau: [0,1] -> [0,1] with tau(0) = 0,
// tau(1) = 1. Closed-form kinds evaluate exactly; tabulated schedules
// interpolate a monotone table t(tau) with a shape-preserving cubic and
// recover tau(t) by bisection. Immutable value type.
class Schedule {
public:
    Schedule() : Schedule(make_trivial(false)) {}

    static Schedule make_trivial(bool trivial_transport_warning = false);
    static Schedule make_simple_f(double f_star, double g_star);
    static Schedule make_simple_g(double f_star, double g_star);
    static Schedule make_piecewise(double f_star, double g_star);
    // Table of (t_i, tau_i) pairs, both strictly increasing, endpoints (0,0)
    // and (1,1). Node derivatives dtau/dt may be supplied when known.
    static Schedule make_tabulated(Eigen::ArrayXd t, Eigen::ArrayXd tau);
    static Schedule make_tabulated(Eigen::ArrayXd t, Eigen::ArrayXd tau,
                                   Eigen::ArrayXd dtau_dt);

    double eval(double t) const;
    double deriv(double t) const;
    double second_deriv(double t) const;
    // t such that eval(t) == tau, for strictly increasing schedules.
    double inverse(double tau) const;

    ScheduleKind kind() const { return kind_; }
    bool trivial_transport_warning() const { return warning_; }

    double f_star() const { return f_; }
    double g_star() const { return g_; }
    double t0() const { return t0_; }
    double tau0() const { return tau0_; }
    // 1/Z of the constant-rate identity tau_dot * sup-term == 1/Z.
    double inv_z() const { return inv_z_; }

    // Tabulated node access (empty for closed forms).
    Eigen::ArrayXd table_t() const;
    Eigen::ArrayXd table_tau() const;
    Eigen::ArrayXd table_dtau_dt() const;

private:
    Schedule(ScheduleKind kind) : kind_(kind) {}

    static void check_time(double t);

    ScheduleKind kind_ = ScheduleKind::Trivial;
    bool warning_ = false;

    double f_ = 0.0, g_ = 0.0;
    double t0_ = 0.0, tau0_ = 0.0;
    double inv_z_ = 0.0;
    // Branch exponents, precomputed once: tau(t) = expm1(t*ln_a)/f (first
    // branch / simple forms) and tau(t) = c2*exp(t*ln_b + (1-t)*ln_d) - 1/g
    // (second branch).
    double ln_a_ = 0.0, ln_b_ = 0.0, ln_d_ = 0.0, c2_ = 0.0;

    MonotoneCubic t_of_tau_;  // tabulated only: abscissa tau, ordinate t
};

Schedule trivial_schedule();

// Closed-form minimizer of the uniform Lipschitz bound for the given
// spectral bounds: piecewise exponential when a transition time exists,
// a single exponential branch otherwise. Isometry bounds yield the trivial
// schedule with the warning flag set.
Schedule optimal_schedule(const SpectralBounds& bounds);

}  // namespace flowsched
