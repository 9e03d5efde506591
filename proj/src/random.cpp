#include "flowsched/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace flowsched {

namespace {
// Box-Muller on the portable uniform stream.
double next_normal(SplitMix64& rng) {
    const double u1 = rng.next_uniform();
    const double u2 = rng.next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}
}  // namespace

Schedule random_monotone_schedule(SplitMix64& rng, int n_knots, double strength) {
    if (n_knots < 2) throw std::invalid_argument("need n_knots >= 2");
    Eigen::ArrayXd t = Eigen::ArrayXd::LinSpaced(n_knots, 0.0, 1.0);
    Eigen::ArrayXd tau(n_knots);
    tau(0) = 0.0;
    for (int i = 1; i < n_knots; ++i)
        tau(i) = tau(i - 1) + std::exp(strength * next_normal(rng));
    tau /= tau(n_knots - 1);
    tau(n_knots - 1) = 1.0;
    return Schedule::make_tabulated(t, tau);
}

}  // namespace flowsched
