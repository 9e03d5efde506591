#include <doctest.h>

#include <cmath>

#include "flowsched/lipschitz.hpp"
#include "flowsched/random.hpp"

using namespace flowsched;

namespace {

SpectralField wavy_field(int n = 129) {
    Eigen::ArrayXd s = Eigen::ArrayXd::LinSpaced(n, -1.0, 1.0);
    Eigen::ArrayXd f = 1.2 + 0.8 * (2.0 * s).cos();
    Eigen::ArrayXd g = -0.7 + 0.25 * (1.0 + s.sin());
    Eigen::ArrayXd w = Eigen::ArrayXd::Constant(n, 2.0 / double(n - 1));
    w(0) *= 0.5;
    w(n - 1) *= 0.5;
    return SpectralField(s, f, g, w);
}

}  // namespace

TEST_CASE("trivial-schedule sup for the canonical pair") {
    const SpectralBounds b(1.0, -0.5);
    CHECK(lambda_of_schedule(b, trivial_schedule()) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(lambda_trivial_closed(b) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("optimal-schedule sup equals ln 2.25 for the canonical pair") {
    const SpectralBounds b(1.0, -0.5);
    const Schedule opt = optimal_schedule(b);
    CHECK(lambda_optimal_closed(b) == doctest::Approx(std::log(2.25)).epsilon(1e-14));
    CHECK(lambda_of_schedule(b, opt) == doctest::Approx(std::log(2.25)).epsilon(1e-6));
}

TEST_CASE("closed trivial bound") {
    CHECK(lambda_trivial_closed(SpectralBounds(9.0, -0.9)) == doctest::Approx(9.0));
    // Gaussian pair with ratio r: max{r - 1, (1-r)/r}
    const double r = 0.1;
    CHECK(lambda_trivial_closed(SpectralBounds(r - 1.0, r - 1.0)) ==
          doctest::Approx((1.0 - r) / r).epsilon(1e-14));
    const double eps = 1e-9;
    CHECK(lambda_trivial_closed(SpectralBounds(eps, eps)) == doctest::Approx(eps));
}

TEST_CASE("closed optimal bound and case selection") {
    CHECK(lambda_optimal_closed(SpectralBounds(1.0, -0.5)) ==
          doctest::Approx(std::log(2.0) + std::log(1.125)).epsilon(1e-14));
    for (double r : {0.1, 0.5, 2.0, 10.0})
        CHECK(lambda_optimal_closed(SpectralBounds(r - 1.0, r - 1.0)) ==
              doctest::Approx(std::abs(std::log(r))).epsilon(1e-13));
    // sigma_max + sigma_min = 1.6 < 2 picks the contraction branch
    CHECK(lambda_optimal_closed(SpectralBounds(0.5, -0.9)) ==
          doctest::Approx(std::log(10.0)).epsilon(1e-13));
}

TEST_CASE("grid evaluation agrees with closed forms") {
    SplitMix64 rng(31);
    for (int k = 0; k < 20; ++k) {
        const double g = rng.next_in(-0.9, 1.5);
        const double f = g + rng.next_in(1e-3, 4.0);
        const SpectralBounds b(f, g);
        const Schedule opt = optimal_schedule(b);
        CHECK(lambda_of_schedule(b, trivial_schedule()) ==
              doctest::Approx(lambda_trivial_closed(b)).epsilon(1e-8));
        CHECK(lambda_of_schedule(b, opt) ==
              doctest::Approx(lambda_optimal_closed(b)).epsilon(1e-6));
    }
}

TEST_CASE("full-field evaluation equals the reduced form") {
    const SpectralField field = wavy_field();
    const SpectralBounds b = bounds_from_field(field);
    for (const Schedule& s : {trivial_schedule(), optimal_schedule(b)}) {
        const double full = lambda_of_schedule_field(field, s);
        const double reduced = lambda_of_schedule(b, s);
        CHECK(std::abs(full - reduced) <= 1e-9 * std::max(1.0, reduced));
    }
}

TEST_CASE("no schedule beats the closed-form optimum") {
    const SpectralBounds b(2.5, -0.8);
    const double lam_opt = lambda_optimal_closed(b);
    SplitMix64 rng(999);
    for (int k = 0; k < 100; ++k) {
        const Schedule pert = random_monotone_schedule(rng, 65, 0.4);
        CHECK(lambda_of_schedule(b, pert) >= lam_opt - 1e-8);
    }
}

TEST_CASE("logarithmic scaling of the optimal bound") {
    for (double smax : {1e2, 1e3, 1e4}) {
        const double smin = 1.0 / smax;
        const SpectralBounds b(smax - 1.0, smin - 1.0);
        const double ratio = lambda_optimal_closed(b) / (std::log(smax) - std::log(smin));
        CHECK(ratio >= 0.5);
        CHECK(ratio <= 2.0);
    }
}

TEST_CASE("curves: flat under the optimal schedule, pinned max under the trivial one") {
    const SpectralBounds b(1.5, -0.75);
    const Schedule opt = optimal_schedule(b);
    const auto curve_opt = lipschitz_curve(b, opt, 2001);
    double lo = 1e300, hi = 0.0;
    for (const auto& [t, v] : curve_opt) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(hi / lo <= 1.0 + 1e-6);

    // contracting Gaussian pair: the trivial-schedule curve rises toward t=1
    const double r = 0.2;
    const SpectralBounds bg(r - 1.0, r - 1.0);
    const auto curve_triv = lipschitz_curve(bg, trivial_schedule(), 2001);
    for (size_t i = 1; i < curve_triv.size(); ++i)
        CHECK(curve_triv[i].second >= curve_triv[i - 1].second - 1e-12);
    CHECK(curve_triv.back().second == doctest::Approx((1.0 - r) / r).epsilon(1e-12));
}

TEST_CASE("report bundles the pieces") {
    const SpectralBounds b(1.0, -0.5);
    const Schedule user = trivial_schedule();
    const LipschitzReport rep = report(b, &user, 2001, true);
    CHECK(rep.lambda_trivial == doctest::Approx(1.0));
    CHECK(rep.lambda_optimal == doctest::Approx(std::log(2.25)));
    CHECK(rep.ratio == doctest::Approx(1.0 / std::log(2.25)));
    REQUIRE(rep.lambda_of_input.has_value());
    CHECK(*rep.lambda_of_input == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rep.curve.size() == 2001);
    CHECK(rep.lambda_optimal <= rep.lambda_trivial + 1e-9);
    CHECK(rep.ratio >= 1.0 - 1e-9);
}
