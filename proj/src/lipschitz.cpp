#include "flowsched/lipschitz.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace flowsched {

namespace {

double sup_term(const SpectralBounds& b, double tau) {
    return std::max(b.f_star / (1.0 + tau * b.f_star),
                    -b.g_star / (1.0 + tau * b.g_star));
}

double sup_term(const SpectralField& field, double tau) {
    return ((field.f() / (1.0 + tau * field.f())).abs()
                .max((field.g() / (1.0 + tau * field.g())).abs()))
        .maxCoeff();
}

// Grid supremum plus golden-section refinement around the discrete argmax.
// The integrand is piecewise smooth with at most one kink, so the local
// search recovers the true supremum to high accuracy.
double grid_sup(const std::function<double(double)>& h, int n_time) {
    if (n_time < 2) throw std::invalid_argument("lipschitz evaluation needs n_time >= 2");
    double best = -1.0;
    int best_i = 0;
    for (int i = 0; i < n_time; ++i) {
        const double t = double(i) / double(n_time - 1);
        const double v = h(t);
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    double lo = double(std::max(0, best_i - 1)) / double(n_time - 1);
    double hi = double(std::min(n_time - 1, best_i + 1)) / double(n_time - 1);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = h(x1), f2 = h(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = h(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = h(x1);
        }
    }
    return std::max(best, std::max(f1, f2));
}

}  // namespace

double lambda_of_schedule(const SpectralBounds& bounds, const Schedule& schedule,
                          int n_time) {
    auto h = [&](double t) { return schedule.deriv(t) * sup_term(bounds, schedule.eval(t)); };
    return grid_sup(h, n_time);
}

double lambda_of_schedule_field(const SpectralField& field, const Schedule& schedule,
                                int n_time) {
    auto h = [&](double t) { return schedule.deriv(t) * sup_term(field, schedule.eval(t)); };
    return grid_sup(h, n_time);
}

double lambda_trivial_closed(const SpectralBounds& b) {
    return std::max(b.f_star, -b.g_star / (1.0 + b.g_star));
}

double lambda_optimal_closed(const SpectralBounds& b) {
    if (b.trivial()) return 0.0;
    if (transition_time(b))
        return -std::log1p(b.g_star) +
               std::log(0.25 * (b.f_star / -b.g_star + -b.g_star / b.f_star + 2.0));
    if (b.f_star >= -b.g_star) return std::log1p(b.f_star);
    return -std::log1p(b.g_star);
}

namespace {

template <typename Data>
std::vector<std::pair<double, double>> curve_impl(const Data& data,
                                                  const Schedule& schedule, int n_time) {
    if (n_time < 2) throw std::invalid_argument("lipschitz curve needs n_time >= 2");
    std::vector<std::pair<double, double>> out;
    out.reserve(size_t(n_time));
    for (int i = 0; i < n_time; ++i) {
        const double t = double(i) / double(n_time - 1);
        out.emplace_back(t, schedule.deriv(t) * sup_term(data, schedule.eval(t)));
    }
    return out;
}

template <typename Data>
LipschitzReport report_impl(const SpectralBounds& bounds, const Data& data,
                            const Schedule* user, int n_time, bool with_curve) {
    LipschitzReport rep;
    rep.lambda_trivial = lambda_trivial_closed(bounds);
    rep.lambda_optimal = lambda_optimal_closed(bounds);
    rep.ratio = rep.lambda_optimal > 0.0 ? rep.lambda_trivial / rep.lambda_optimal : 1.0;
    const Schedule opt = optimal_schedule(bounds);
    if (user) {
        auto h = [&](double t) { return user->deriv(t) * sup_term(data, user->eval(t)); };
        rep.lambda_of_input = grid_sup(h, n_time);
    }
    if (with_curve) rep.curve = curve_impl(data, user ? *user : opt, n_time);
    return rep;
}

}  // namespace

std::vector<std::pair<double, double>> lipschitz_curve(const SpectralBounds& bounds,
                                                       const Schedule& schedule,
                                                       int n_time) {
    return curve_impl(bounds, schedule, n_time);
}

std::vector<std::pair<double, double>> lipschitz_curve(const SpectralField& field,
                                                       const Schedule& schedule,
                                                       int n_time) {
    return curve_impl(field, schedule, n_time);
}

LipschitzReport report(const SpectralBounds& bounds, const Schedule* user_schedule,
                       int n_time, bool with_curve) {
    return report_impl(bounds, bounds, user_schedule, n_time, with_curve);
}

LipschitzReport report(const SpectralField& field, const Schedule* user_schedule,
                       int n_time, bool with_curve) {
    return report_impl(bounds_from_field(field), field, user_schedule, n_time, with_curve);
}

}  // namespace flowsched
