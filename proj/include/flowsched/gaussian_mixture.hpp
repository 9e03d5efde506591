#pragma once

#include <vector>

#include <Eigen/Core>

namespace flowsched {

double normal_cdf(double z);
// Inverse standard-normal CDF, rational approximation polished with Newton
// steps on normal_cdf; accurate to ~1e-15 away from the extreme tails.
double normal_quantile(double p);

struct MixtureComponent {
    double weight = 1.0;
    double mean = 0.0;
    double stddev = 1.0;
};

// Finite Gaussian mixture on the real line. Weights must be positive and
// sum to one within 1e-12; standard deviations must be positive. Density
// evaluations go through log space so far-tail queries neither overflow nor
// underflow prematurely.
class GaussianMixture {
public:
    explicit GaussianMixture(std::vector<MixtureComponent> components);

    const std::vector<MixtureComponent>& components() const { return comps_; }

    double log_pdf(double x) const;
    double pdf(double x) const;
    double cdf(double x) const;
    // Bracketed bisection on the strictly increasing CDF; the bracket comes
    // from per-component Gaussian quantiles and is therefore exact.
    double quantile(double q) const;

private:
    std::vector<MixtureComponent> comps_;
};

}  // namespace flowsched
