#pragma once

#include <memory>
#include <optional>

#include <Eigen/Core>

#include "flowsched/gaussian_mixture.hpp"
#include "flowsched/schedule.hpp"
#include "flowsched/spectral.hpp"

namespace flowsched {

// Monotone increasing scalar transport map with an analytic derivative.
// Either affine (T(x) = a*x + b, a > 0) or the CDF composition
// F_target^{-1} o F_source restricted to the [delta, 1-delta] quantile box
// of the source. Immutable after construction; the quantile cache is built
// eagerly.
class TransportMap1D {
public:
    enum class Kind { Affine, CdfComposed };

    static TransportMap1D affine(double slope, double intercept);
    static TransportMap1D cdf_composed(GaussianMixture source, GaussianMixture target,
                                       double delta, Eigen::Index n_cache);

    double operator()(double x) const;
    double deriv(double x) const;

    Kind kind() const { return kind_; }
    // Working domain; affine maps are unbounded (+-inf).
    double domain_lo() const { return lo_; }
    double domain_hi() const { return hi_; }
    bool bounded() const;

    const GaussianMixture* source() const { return source_ ? &*source_ : nullptr; }
    const GaussianMixture* target() const { return target_ ? &*target_ : nullptr; }
    double truncation_delta() const { return delta_; }

private:
    TransportMap1D() = default;

    double quantile_target(double q) const;

    Kind kind_ = Kind::Affine;
    double a_ = 1.0, b_ = 0.0;
    double lo_ = 0.0, hi_ = 0.0;
    double delta_ = 0.0;
    std::optional<GaussianMixture> source_, target_;
    // Monotone cache (q_j, x_j) of target quantiles; queries bisect inside
    // the bracketing cache cell.
    Eigen::ArrayXd cache_q_, cache_x_;
};

// Optimal transport map between two univariate Gaussians.
TransportMap1D gaussian_map(double mu1, double theta1, double mu2, double theta2);

// Quantile-composition map between Gaussian mixtures, truncated at the
// [delta, 1-delta] source quantiles.
TransportMap1D gmm_map(const GaussianMixture& source, const GaussianMixture& target,
                       double delta, Eigen::Index n_cache);

// Per-point eigenvalue deviations of a scalar map on n uniform samples of
// [lo, hi] (in 1d both extremal deviations coincide with T'(s) - 1).
SpectralField field_from_map1d(const TransportMap1D& map, double lo, double hi,
                               Eigen::Index n);

struct FlowTrajectory {
    enum class Method { Exact, Euler };

    double x0 = 0.0;
    Eigen::ArrayXd times;
    Eigen::ArrayXd positions;
    Method method = Method::Exact;
    double step = 0.0;  // Euler only
};

// Scheduled interpolation trajectory: x(t) = (1 - tau(t)) x0 + tau(t) T(x0).
FlowTrajectory exact_flow(const TransportMap1D& map, const Schedule& schedule,
                          double x0, const Eigen::ArrayXd& times);

// Velocity field of the scheduled flow at position y, time t:
// tau_dot(t) * (T(x) - x) with x the preimage of y under the time-t flow map.
double velocity(const TransportMap1D& map, const Schedule& schedule, double y, double t);

// Explicit Euler integration of the scheduled velocity field from x0 with
// n_steps uniform steps on [0, 1].
FlowTrajectory euler_flow(const TransportMap1D& map, const Schedule& schedule,
                          double x0, int n_steps);

// A priori bound h*M/(2*Lambda) * (e^Lambda - 1) on the Euler endpoint error,
// with M the grid supremum of |tau_ddot(t)| * |T(x) - x| over [lo, hi] x [0,1]
// and Lambda the uniform Lipschitz bound of the scheduled velocity.
double error_bound(const SpectralBounds& bounds, const TransportMap1D& map,
                   const Schedule& schedule, double h, double lo, double hi);

}  // namespace flowsched
