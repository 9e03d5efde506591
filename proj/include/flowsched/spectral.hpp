#pragma once

#include <cmath>

#include <Eigen/Core>

#include "flowsched/errors.hpp"

namespace flowsched {

// Eigenvalue deviations below this threshold (everywhere) classify the
// transport as an isometry.
inline constexpr double kIsometryThreshold = 1e-14;

// Extremal eigenvalue deviations of the transport Jacobian: f_star is the
// largest eigenvalue minus one over the domain, g_star the smallest minus
// one. These two scalars drive every closed-form schedule expression.
struct SpectralBounds {
    double f_star = 0.0;
    double g_star = 0.0;

    SpectralBounds(double f_star_, double g_star_);

    double sigma_max() const { return f_star + 1.0; }
    double sigma_min() const { return g_star + 1.0; }

    bool trivial() const {
        return std::abs(f_star) < kIsometryThreshold &&
               std::abs(g_star) < kIsometryThreshold;
    }
};

// Sampled eigenvalue-deviation functions f(s) >= g(s) > -1 on a discretized
// domain, with positive quadrature weights summing to the domain measure.
// Immutable after construction.
class SpectralField {
public:
    SpectralField(Eigen::ArrayXd grid, Eigen::ArrayXd f_values,
                  Eigen::ArrayXd g_values, Eigen::ArrayXd cell_weights);

    const Eigen::ArrayXd& grid() const { return grid_; }
    const Eigen::ArrayXd& f() const { return f_; }
    const Eigen::ArrayXd& g() const { return g_; }
    const Eigen::ArrayXd& weights() const { return w_; }

    Eigen::Index size() const { return grid_.size(); }
    double domain_measure() const { return w_.sum(); }

    bool trivial() const {
        return f_.abs().maxCoeff() < kIsometryThreshold &&
               g_.abs().maxCoeff() < kIsometryThreshold;
    }

private:
    Eigen::ArrayXd grid_, f_, g_, w_;
};

// Extremal bounds of a sampled field. Throws TrivialTransportError on
// isometry fields.
SpectralBounds bounds_from_field(const SpectralField& field);

// Bounds implied by a strongly convex potential with Hessian spectrum in
// [alpha, beta]: f_star = beta - 1, g_star = alpha - 1.
SpectralBounds bounds_from_potential(double alpha, double beta);

// Constant field f == g == value on n uniform samples of [lo, hi] with
// composite-trapezoid weights. Convenience for comparing closed forms
// against full-field quadrature.
SpectralField constant_field(double value, double lo, double hi, Eigen::Index n);

}  // namespace flowsched
