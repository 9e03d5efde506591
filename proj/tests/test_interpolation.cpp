#include <doctest.h>

#include <cmath>

#include "flowsched/interpolation.hpp"

using flowsched::MonotoneCubic;

TEST_CASE("interpolates nodes exactly") {
    Eigen::ArrayXd x = Eigen::ArrayXd::LinSpaced(9, 0.0, 1.0);
    Eigen::ArrayXd y = x.square();
    auto c = MonotoneCubic::fritsch_carlson(x, y);
    for (Eigen::Index i = 0; i < x.size(); ++i)
        CHECK(c.eval(x(i)) == doctest::Approx(y(i)).epsilon(1e-14));
}

TEST_CASE("monotone data stays monotone between nodes") {
    Eigen::ArrayXd x(6), y(6);
    x << 0.0, 0.1, 0.3, 0.55, 0.8, 1.0;
    y << 0.0, 0.4, 0.41, 0.42, 0.9, 1.0;  // near-plateau in the middle
    auto c = MonotoneCubic::fritsch_carlson(x, y);
    double prev = c.eval(0.0);
    for (int i = 1; i <= 1000; ++i) {
        const double v = c.eval(double(i) / 1000.0);
        CHECK(v >= prev - 1e-14);
        prev = v;
    }
}

TEST_CASE("exact slopes reproduce smooth functions to high order") {
    const int n = 64;
    Eigen::ArrayXd x = Eigen::ArrayXd::LinSpaced(n, 0.0, 1.0);
    Eigen::ArrayXd y = (2.0 * x).exp();
    Eigen::ArrayXd m = 2.0 * (2.0 * x).exp();
    auto c = MonotoneCubic::with_slopes(x, y, m);
    double err = 0.0;
    for (int i = 0; i <= 500; ++i) {
        const double t = double(i) / 500.0;
        err = std::max(err, std::abs(c.eval(t) - std::exp(2.0 * t)));
    }
    CHECK(err < 1e-7);
}

TEST_CASE("solve inverts strictly increasing interpolants") {
    Eigen::ArrayXd x = Eigen::ArrayXd::LinSpaced(33, 0.0, 1.0);
    Eigen::ArrayXd y = x + 0.3 * (x * 3.0).sin().abs();
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) REQUIRE(y(i) < y(i + 1));
    auto c = MonotoneCubic::fritsch_carlson(x, y);
    for (int i = 0; i <= 40; ++i) {
        const double target = y(0) + (y(y.size() - 1) - y(0)) * double(i) / 40.0;
        const double t = c.solve(target);
        CHECK(c.eval(t) == doctest::Approx(target).epsilon(1e-12));
    }
}
