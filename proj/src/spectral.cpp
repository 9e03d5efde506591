#include "flowsched/spectral.hpp"

#include <stdexcept>

namespace flowsched {

SpectralBounds::SpectralBounds(double f_star_, double g_star_)
    : f_star(f_star_), g_star(g_star_) {
    if (!(g_star > -1.0))
        throw std::domain_error("spectral bounds require g_star > -1");
    if (!(g_star <= f_star))
        throw std::domain_error("spectral bounds require g_star <= f_star");
    if (!std::isfinite(f_star) || !std::isfinite(g_star))
        throw std::domain_error("spectral bounds must be finite");
}

SpectralField::SpectralField(Eigen::ArrayXd grid, Eigen::ArrayXd f_values,
                             Eigen::ArrayXd g_values, Eigen::ArrayXd cell_weights)
    : grid_(std::move(grid)),
      f_(std::move(f_values)),
      g_(std::move(g_values)),
      w_(std::move(cell_weights)) {
    const Eigen::Index n = grid_.size();
    if (n < 1 || f_.size() != n || g_.size() != n || w_.size() != n)
        throw std::invalid_argument("spectral field arrays must have equal nonzero size");
    if ((f_ < g_).any())
        throw std::domain_error("spectral field requires f(s) >= g(s)");
    if ((g_ <= -1.0).any())
        throw std::domain_error("spectral field requires g(s) > -1 (positive definite Jacobian)");
    if ((w_ <= 0.0).any())
        throw std::domain_error("spectral field requires strictly positive cell weights");
    if (!f_.isFinite().all() || !g_.isFinite().all() || !w_.isFinite().all())
        throw std::domain_error("spectral field values must be finite");
}

SpectralBounds bounds_from_field(const SpectralField& field) {
    if (field.trivial())
        throw TrivialTransportError("trivial transport: all eigenvalue deviations vanish");
    return SpectralBounds(field.f().maxCoeff(), field.g().minCoeff());
}

SpectralBounds bounds_from_potential(double alpha, double beta) {
    if (!(alpha > 0.0))
        throw std::domain_error("potential bounds require alpha > 0");
    if (!(beta >= alpha))
        throw std::domain_error("potential bounds require beta >= alpha");
    SpectralBounds b(beta - 1.0, alpha - 1.0);
    if (b.trivial())
        throw TrivialTransportError("trivial transport: potential bounds give an isometry");
    return b;
}

SpectralField constant_field(double value, double lo, double hi, Eigen::Index n) {
    if (n < 2) throw std::invalid_argument("constant_field needs n >= 2");
    if (!(hi > lo)) throw std::invalid_argument("constant_field needs hi > lo");
    Eigen::ArrayXd grid = Eigen::ArrayXd::LinSpaced(n, lo, hi);
    Eigen::ArrayXd vals = Eigen::ArrayXd::Constant(n, value);
    const double h = (hi - lo) / double(n - 1);
    Eigen::ArrayXd w = Eigen::ArrayXd::Constant(n, h);
    w(0) *= 0.5;
    w(n - 1) *= 0.5;
    return SpectralField(std::move(grid), vals, vals, std::move(w));
}

}  // namespace flowsched
