#pragma once

#include "flowsched/schedule.hpp"
#include "flowsched/spectral.hpp"

namespace flowsched {

struct LpSolution {
    int p = 1;
    Schedule schedule;
    double z_p = 0.0;          // normalization constant of the rate equation
    double residual_sup = 0.0; // sup rate-equation residual at interior nodes
    Eigen::Index grid_size = 0;
};

// ln K_p(x) with K_p(x) = integral over the domain of
// (f/(1+x f))^{2p} + (g/(1+x g))^{2p}, evaluated as a max-shifted
// exponential sum over grid cells; stable for p up to at least 512.
double k_p(const SpectralField& field, double x, int p);

// The relaxed objective (integral_0^1 lambda_p dt)^{1/(2p)} with
// lambda_p(t) = tau_dot(t)^{2p} K_p(tau(t)), computed in log scale on an
// n_time-point trapezoid grid.
double lp_objective(const SpectralField& field, const Schedule& schedule, int p,
                    int n_time = 2049);

// Minimizer of the relaxed objective. The rate equation
// tau_dot = K_p(tau)^{-1/(2p)} / Z_p is separable: integrate
// dt/dtau = K_p(tau)^{1/(2p)} / Z_p on a Chebyshev-clustered tau grid and
// invert the monotone table. No shooting.
LpSolution solve_lp(const SpectralField& field, int p, Eigen::Index n_tau = 2048);

// Same separable construction for the limit rate equation with integrand
// max{ f*/(1+u f*), -g*/(1+u g*) }; serves as a quadrature oracle for the
// closed-form schedule.
Schedule solve_linf_numeric(const SpectralBounds& bounds, Eigen::Index n_tau = 2048);

// L2([0,1]) distance between two schedules on an n-point trapezoid grid.
double l2_distance(const Schedule& a, const Schedule& b, int n = 2001);

}  // namespace flowsched
