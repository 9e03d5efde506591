#include "flowsched/gaussian_mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace flowsched {

namespace {
constexpr double kLnSqrt2Pi = 0.91893853320467274178;  // ln sqrt(2*pi)

// Acklam's rational approximation to the inverse normal CDF.
double normal_quantile_estimate(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}
}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("normal_quantile requires p in (0,1)");
    double z = normal_quantile_estimate(p);
    for (int it = 0; it < 3; ++it) {
        const double err = normal_cdf(z) - p;
        const double pdf = std::exp(-0.5 * z * z - kLnSqrt2Pi);
        if (pdf <= 0.0) break;
        z -= err / pdf;
    }
    return z;
}

GaussianMixture::GaussianMixture(std::vector<MixtureComponent> components)
    : comps_(std::move(components)) {
    if (comps_.empty())
        throw std::invalid_argument("mixture needs at least one component");
    double wsum = 0.0;
    for (const auto& c : comps_) {
        if (!(c.weight > 0.0))
            throw std::domain_error("mixture weights must be positive");
        if (!(c.stddev > 0.0))
            throw std::domain_error("mixture standard deviations must be positive");
        wsum += c.weight;
    }
    if (std::abs(wsum - 1.0) > 1e-12)
        throw std::domain_error("mixture weights must sum to one");
}

double GaussianMixture::log_pdf(double x) const {
    double mx = -std::numeric_limits<double>::infinity();
    Eigen::ArrayXd terms(Eigen::Index(comps_.size()));
    for (size_t i = 0; i < comps_.size(); ++i) {
        const auto& c = comps_[i];
        const double z = (x - c.mean) / c.stddev;
        terms(Eigen::Index(i)) =
            std::log(c.weight) - 0.5 * z * z - std::log(c.stddev) - kLnSqrt2Pi;
        mx = std::max(mx, terms(Eigen::Index(i)));
    }
    if (!std::isfinite(mx)) return mx;
    return mx + std::log((terms - mx).exp().sum());
}

double GaussianMixture::pdf(double x) const { return std::exp(log_pdf(x)); }

double GaussianMixture::cdf(double x) const {
    double acc = 0.0;
    for (const auto& c : comps_) acc += c.weight * normal_cdf((x - c.mean) / c.stddev);
    return acc;
}

double GaussianMixture::quantile(double q) const {
    if (!(q > 0.0 && q < 1.0))
        throw std::domain_error("mixture quantile requires q in (0,1)");
    const double qc = std::clamp(q, 1e-15, 1.0 - 1e-15);
    const double z = normal_quantile(qc);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& c : comps_) {
        lo = std::min(lo, c.mean + c.stddev * z);
        hi = std::max(hi, c.mean + c.stddev * z);
    }
    if (lo == hi) return lo;
    for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) < q)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-13 * std::max(1.0, std::max(std::abs(lo), std::abs(hi))))
            break;
    }
    const double x = 0.5 * (lo + hi);
    if (!std::isfinite(x))
        throw std::runtime_error("mixture quantile inversion failed");
    return x;
}

}  // namespace flowsched
