#pragma once

#include <Eigen/Core>

namespace flowsched {

// Shape-preserving cubic Hermite interpolant on a strictly increasing
// abscissa grid. Node slopes are either supplied by the caller (when the
// derivative of the interpolated function is known exactly) or estimated
// with the Fritsch-Carlson scheme; in both cases they are clamped so the
// interpolant is monotone whenever the data is.
class MonotoneCubic {
public:
    MonotoneCubic() = default;

    static MonotoneCubic fritsch_carlson(Eigen::ArrayXd x, Eigen::ArrayXd y);
    static MonotoneCubic with_slopes(Eigen::ArrayXd x, Eigen::ArrayXd y,
                                     Eigen::ArrayXd slopes);

    double eval(double x) const;
    double deriv(double x) const;
    // Piecewise linear; at interior nodes takes the right-cell value.
    double second_deriv(double x) const;

    // Solves eval(x) = y on [x_front, x_back] for strictly increasing data.
    // Bisection to machine interval width, then Newton polish.
    double solve(double y) const;

    double x_front() const { return x_(0); }
    double x_back() const { return x_(x_.size() - 1); }
    const Eigen::ArrayXd& abscissae() const { return x_; }
    const Eigen::ArrayXd& ordinates() const { return y_; }
    const Eigen::ArrayXd& slopes() const { return m_; }

private:
    MonotoneCubic(Eigen::ArrayXd x, Eigen::ArrayXd y, Eigen::ArrayXd m);

    Eigen::Index cell(double x) const;

    Eigen::ArrayXd x_, y_, m_;
};

}  // namespace flowsched
