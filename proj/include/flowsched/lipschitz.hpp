#pragma once

#include <optional>
#include <vector>

#include "flowsched/schedule.hpp"
#include "flowsched/spectral.hpp"

namespace flowsched {

struct LipschitzReport {
    double lambda_trivial = 0.0;
    double lambda_optimal = 0.0;
    std::optional<double> lambda_of_input;
    double ratio = 1.0;  // lambda_trivial / lambda_optimal
    std::vector<std::pair<double, double>> curve;
};

// Uniform-in-time spatial Lipschitz bound of the scheduled velocity field,
// reduced to the extremal deviations: sup_t tau_dot(t) * max{ f*/(1+tau f*),
// -g*/(1+tau g*) }. Grid supremum over n_time points with golden-section
// refinement around the discrete argmax.
double lambda_of_schedule(const SpectralBounds& bounds, const Schedule& schedule,
                          int n_time = 4096);

// Same bound from the full sampled field, taking the supremum over the
// (s, t) product grid. Agrees with the reduced form.
double lambda_of_schedule_field(const SpectralField& field, const Schedule& schedule,
                                int n_time = 4096);

// Closed form for the trivial schedule: max{ sigma_max - 1, (1 - sigma_min) / sigma_min }.
double lambda_trivial_closed(const SpectralBounds& bounds);

// Closed form for the optimal schedule; equals the constant 1/Z of the
// optimal rate identity.
double lambda_optimal_closed(const SpectralBounds& bounds);

// Pointwise t -> tau_dot(t) * sup-term curve on a uniform n_time grid.
std::vector<std::pair<double, double>> lipschitz_curve(const SpectralBounds& bounds,
                                                       const Schedule& schedule,
                                                       int n_time);
std::vector<std::pair<double, double>> lipschitz_curve(const SpectralField& field,
                                                       const Schedule& schedule,
                                                       int n_time);

LipschitzReport report(const SpectralBounds& bounds,
                       const Schedule* user_schedule = nullptr, int n_time = 4096,
                       bool with_curve = false);
LipschitzReport report(const SpectralField& field,
                       const Schedule* user_schedule = nullptr, int n_time = 4096,
                       bool with_curve = false);

}  // namespace flowsched
