#pragma once

#include <Eigen/Dense>
#include <complex>

#include "biphoton/grid.hpp"

namespace biphoton::quad {

// Trapezoid weights for a (possibly non-uniform) strictly increasing axis.
inline Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& x) {
    Eigen::Index n = x.size();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        double h = 0.5 * (x(i + 1) - x(i));
        w(i) += h;
        w(i + 1) += h;
    }
    return w;
}

inline double trapezoid(const Eigen::VectorXd& x, const Eigen::VectorXd& f) {
    return trapezoid_weights(x).dot(f);
}

template <typename Scalar>
Scalar trapezoid_2d(const SpectralGrid& grid,
                    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& f) {
    Eigen::VectorXd w1 = trapezoid_weights(grid.omega1());
    Eigen::VectorXd w2 = trapezoid_weights(grid.omega2());
    // sum_ij w1_i w2_j f_ij
    return (w1.transpose().template cast<Scalar>() * f *
            w2.template cast<Scalar>())(0, 0);
}

// Same integral on the stride-2 subgrid. Together with trapezoid_2d this is
// the refine-and-compare convergence check: |I_h - I_2h| bounds the error of
// the coarse value without re-evaluating the underlying model. When an axis
// has even length the trailing interval is integrated at full resolution and
// added, so no sliver of the domain is dropped.
template <typename Scalar>
Scalar trapezoid_2d_coarse(const SpectralGrid& grid,
                           const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& f) {
    auto subsample = [](const Eigen::VectorXd& x) {
        Eigen::Index m = (x.size() + 1) / 2;
        Eigen::VectorXd s(m);
        for (Eigen::Index i = 0; i < m; ++i) s(i) = x(2 * i);
        return s;
    };
    Eigen::VectorXd x1 = subsample(grid.omega1());
    Eigen::VectorXd x2 = subsample(grid.omega2());
    Eigen::VectorXd w1 = trapezoid_weights(x1);
    Eigen::VectorXd w2 = trapezoid_weights(x2);

    auto axis_weights = [&](const Eigen::VectorXd& full, const Eigen::VectorXd& sub_w) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(full.size());
        for (Eigen::Index i = 0; i < sub_w.size(); ++i) w(2 * i) = sub_w(i);
        if (full.size() % 2 == 0) {
            // trailing fine interval [x_{n-2}, x_{n-1}]
            double h = 0.5 * (full(full.size() - 1) - full(full.size() - 2));
            w(full.size() - 2) += h;
            w(full.size() - 1) += h;
        }
        return w;
    };
    Eigen::VectorXd W1 = axis_weights(grid.omega1(), w1);
    Eigen::VectorXd W2 = axis_weights(grid.omega2(), w2);
    return (W1.transpose().template cast<Scalar>() * f *
            W2.template cast<Scalar>())(0, 0);
}

} // namespace biphoton::quad
