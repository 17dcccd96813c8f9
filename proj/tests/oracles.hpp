// Test-only reference implementations, independent of the library's numerical
// paths, plus the worked 2x2 example data used across the suite.
#pragma once

#include <cmath>
#include <random>

#include <Eigen/Dense>

namespace oracle {

// Matrix exponential by scaling-and-squaring on a Taylor series. Accurate to
// ~1e-14 for the moderate norms used in tests; deliberately not the RK4 route.
inline Eigen::MatrixXd expm(const Eigen::MatrixXd& A) {
    const auto n = A.rows();
    double nrm = A.lpNorm<1>();
    int s = 0;
    while (nrm > 0.5) {
        nrm /= 2;
        ++s;
    }
    Eigen::MatrixXd T = A / std::pow(2.0, s);
    Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
    for (int k = 1; k <= 40; ++k) {
        term = (term * T) / static_cast<double>(k);
        acc += term;
        if (term.norm() < 1e-18 * acc.norm())
            break;
    }
    for (int k = 0; k < s; ++k)
        acc = acc * acc;
    return acc;
}

// The running 2x2 worked example: controllable and observable.
inline Eigen::MatrixXd example_A() {
    Eigen::MatrixXd A(2, 2);
    A << -8.0 / 45, 1.0 / 30, -1.0 / 45, -1.0 / 10;
    return A;
}

inline Eigen::MatrixXd example_B() {
    Eigen::MatrixXd B(2, 1);
    B << 2, 1;
    return B;
}

inline Eigen::MatrixXd example_C() {
    Eigen::MatrixXd C(1, 2);
    C << 3, 4;
    return C;
}

inline Eigen::VectorXd example_x0() {
    Eigen::VectorXd x(2);
    x << 5, 2;
    return x;
}

inline Eigen::MatrixXd randn(Eigen::Index rows, Eigen::Index cols, std::mt19937& rng,
                             double scale = 1.0) {
    std::normal_distribution<double> d(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            m(i, j) = scale * d(rng);
    return m;
}

} // namespace oracle
