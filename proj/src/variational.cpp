#include "flowsched/variational.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace flowsched {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logsumexp(const Eigen::ArrayXd& v) {
    const double m = v.maxCoeff();
    if (!std::isfinite(m)) return m;
    return m + std::log((v - m).exp().sum());
}

// Chebyshev-Lobatto points on [0,1], clustered at both endpoints where the
// inverse schedule is steepest.
Eigen::ArrayXd chebyshev_nodes(Eigen::Index n) {
    Eigen::ArrayXd u(n);
    for (Eigen::Index j = 0; j < n; ++j)
        u(j) = 0.5 * (1.0 - std::cos(std::numbers::pi * double(j) / double(n - 1)));
    u(0) = 0.0;
    u(n - 1) = 1.0;
    return u;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate_cell(const std::function<double(double)>& f, double a, double b,
                      double tol) {
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 24);
}

struct SeparableTable {
    Eigen::ArrayXd t, tau, dtau_dt;
    double integral = 0.0;  // integral_0^1 of the rate integrand
};

// Cumulative quadrature of dt/dtau = phi(tau) on a Chebyshev tau grid,
// normalized so t(1) = 1. Node derivatives carry the exact rate values.
// Cells containing a supplied split point (a kink of phi) are integrated in
// two pieces.
SeparableTable tabulate_separable(const std::function<double(double)>& phi,
                                  Eigen::Index n_tau,
                                  const std::vector<double>& splits) {
    if (n_tau < 16) throw std::invalid_argument("separable solve needs n_tau >= 16");
    SeparableTable out;
    out.tau = chebyshev_nodes(n_tau);
    out.t = Eigen::ArrayXd(n_tau);
    out.t(0) = 0.0;
    double acc = 0.0;
    for (Eigen::Index j = 0; j + 1 < n_tau; ++j) {
        const double a = out.tau(j);
        const double b = out.tau(j + 1);
        const double tol = 1e-11 * (b - a) + 1e-300;
        double cell = 0.0;
        double left = a;
        for (double s : splits) {
            if (s > a && s < b) {
                cell += integrate_cell(phi, left, s, tol);
                left = s;
            }
        }
        cell += integrate_cell(phi, left, b, tol);
        acc += cell;
        out.t(j + 1) = acc;
    }
    out.integral = acc;
    if (!(acc > 0.0) || !std::isfinite(acc))
        throw std::runtime_error("separable quadrature produced a non-finite integral");
    out.t /= acc;
    out.t(n_tau - 1) = 1.0;
    out.dtau_dt = Eigen::ArrayXd(n_tau);
    for (Eigen::Index j = 0; j < n_tau; ++j) out.dtau_dt(j) = acc / phi(out.tau(j));
    return out;
}

void require_nontrivial(const SpectralField& field) {
    if (field.trivial())
        throw TrivialTransportError("trivial transport: spectral field vanishes");
}

}  // namespace

double k_p(const SpectralField& field, double x, int p) {
    if (p < 1) throw std::invalid_argument("k_p requires p >= 1");
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("k_p requires x in [0,1]");
    const Eigen::ArrayXd& w = field.weights();
    const Eigen::ArrayXd lnw = w.log();
    const double two_p = 2.0 * double(p);
    const auto branch = [&](const Eigen::ArrayXd& vals) -> Eigen::ArrayXd {
        // 2p*ln|v/(1+x v)| + ln w, with -inf marking vanishing deviations
        Eigen::ArrayXd term(vals.size());
        for (Eigen::Index i = 0; i < vals.size(); ++i) {
            const double v = vals(i);
            if (v == 0.0) {
                term(i) = kNegInf;
                continue;
            }
            term(i) = two_p * (std::log(std::abs(v)) - std::log1p(x * v)) + lnw(i);
        }
        return term;
    };
    Eigen::ArrayXd terms(2 * field.size());
    terms << branch(field.f()), branch(field.g());
    return logsumexp(terms);
}

double lp_objective(const SpectralField& field, const Schedule& schedule, int p,
                    int n_time) {
    require_nontrivial(field);
    if (p < 1) throw std::invalid_argument("lp_objective requires p >= 1");
    if (n_time < 3) throw std::invalid_argument("lp_objective needs n_time >= 3");
    const double two_p = 2.0 * double(p);
    const double h = 1.0 / double(n_time - 1);
    Eigen::ArrayXd terms(n_time);
    for (int i = 0; i < n_time; ++i) {
        const double t = double(i) / double(n_time - 1);
        const double td = schedule.deriv(t);
        const double lnw = std::log(h) + (i == 0 || i == n_time - 1 ? std::log(0.5) : 0.0);
        if (td <= 0.0) {
            terms(i) = kNegInf;
            continue;
        }
        terms(i) = two_p * std::log(td) + k_p(field, schedule.eval(t), p) + lnw;
    }
    return std::exp(logsumexp(terms) / two_p);
}

LpSolution solve_lp(const SpectralField& field, int p, Eigen::Index n_tau) {
    require_nontrivial(field);
    if (p < 1) throw std::invalid_argument("solve_lp requires p >= 1");
    const double two_p = 2.0 * double(p);
    // Shift K_p^{1/2p} by its grid maximum so the quadrature runs on O(1)
    // numbers; the shift cancels in t and is restored in z_p.
    const Eigen::ArrayXd probe = chebyshev_nodes(n_tau);
    double shift = kNegInf;
    for (Eigen::Index j = 0; j < n_tau; ++j)
        shift = std::max(shift, k_p(field, probe(j), p) / two_p);
    auto phi = [&](double u) { return std::exp(k_p(field, u, p) / two_p - shift); };

    SeparableTable table = tabulate_separable(phi, n_tau, {});
    LpSolution sol;
    sol.p = p;
    sol.grid_size = n_tau;
    sol.z_p = 1.0 / (table.integral * std::exp(shift));
    sol.schedule = Schedule::make_tabulated(table.t, table.tau, table.dtau_dt);

    double res = 0.0;
    for (Eigen::Index j = 1; j + 1 < n_tau; ++j) {
        const double td = sol.schedule.deriv(table.t(j));
        const double rate = td * std::exp(k_p(field, table.tau(j), p) / two_p) * sol.z_p;
        res = std::max(res, std::abs(rate - 1.0));
    }
    sol.residual_sup = res;
    return sol;
}

Schedule solve_linf_numeric(const SpectralBounds& bounds, Eigen::Index n_tau) {
    if (bounds.trivial())
        throw TrivialTransportError("trivial transport: no limit schedule to solve for");
    const double f = bounds.f_star;
    const double g = bounds.g_star;
    auto rate = [&](double u) {
        return std::max(f / (1.0 + u * f), -g / (1.0 + u * g));
    };
    std::vector<double> splits;
    if (g < 0.0 && f > 0.0) {
        const double tau0 = -0.5 * (1.0 / f + 1.0 / g);
        if (tau0 > 0.0 && tau0 < 1.0) splits.push_back(tau0);
    }
    SeparableTable table = tabulate_separable(rate, n_tau, splits);
    return Schedule::make_tabulated(table.t, table.tau, table.dtau_dt);
}

double l2_distance(const Schedule& a, const Schedule& b, int n) {
    if (n < 3) throw std::invalid_argument("l2_distance needs n >= 3");
    const double h = 1.0 / double(n - 1);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = double(i) / double(n - 1);
        const double d = a.eval(t) - b.eval(t);
        const double w = (i == 0 || i == n - 1) ? 0.5 * h : h;
        acc += w * d * d;
    }
    return std::sqrt(acc);
}

}  // namespace flowsched
