#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "tscontrol/system.hpp"
#include "tscontrol/timescale.hpp"

namespace tsc {

struct RegressivityReport {
    bool ok = false;
    double tau = 0;              // sigma_min threshold actually used
    double worst_sigma_min = 0;  // min over nodes of sigma_min(I + mu A)
    double worst_condition = 0;  // max over nodes of cond_2(I + mu A)
    std::vector<double> failing_times;
};

// I + mu(t) A(t) must be invertible at every node: sigma_min > 1e-10 * (1 + ||A(t)||).
RegressivityReport check_regressive(const LinearSystem& sys, const TimeScaleGrid& grid);

// Phi_A(t, s). Forward (t >= s): products of (I + mu A) across scattered nodes and
// one RK4 step per dense quadrature substep; backward: inverse of the forward map.
Eigen::MatrixXd transition_matrix(const LinearSystem& sys, const TimeScaleGrid& grid, double t,
                                  double s);

// e_lambda(t, s) for constant scalar lambda: exact product over scattered nodes
// times exp(lambda * dense length). Backward values are reciprocals.
std::complex<double> scalar_exp(const TimeScaleGrid& grid, std::complex<double> lambda, double t,
                                double s);

// Propagates x from t0 to tf and samples state/output at every node in [t0, tf].
// u may be null (zero input). Output at tf uses u's value there when available,
// else the D-term contribution is taken as zero.
SimulationResult simulate(const LinearSystem& sys, const TimeScaleGrid& grid,
                          const Eigen::VectorXd& x0, const Trajectory* u, double t0, double tf);

// G(t, sigma(s)) = C(t) Phi_A(t, sigma(s)) B(s); requires t, s on the grid.
Eigen::MatrixXd weighting_pattern(const LinearSystem& sys, const TimeScaleGrid& grid, double t,
                                  double s);

namespace detail {
// One classical RK4 step for X' = F(t, X) over [t, t+h], X matrix-valued.
template <class F>
Eigen::MatrixXd rk4_step(const F& f, double t, double h, const Eigen::MatrixXd& x) {
    Eigen::MatrixXd k1 = f(t, x);
    Eigen::MatrixXd k2 = f(t + h / 2, x + (h / 2) * k1);
    Eigen::MatrixXd k3 = f(t + h / 2, x + (h / 2) * k2);
    Eigen::MatrixXd k4 = f(t + h, x + h * k3);
    return x + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
}

double spectral_norm(const Eigen::MatrixXd& m);

// Solve (I + mu A) Y = X without forming the inverse; throws PreconditionError
// when I + mu A is numerically singular.
Eigen::MatrixXd jump_solve(const Eigen::MatrixXd& A, double mu, const Eigen::MatrixXd& X,
                           double t_for_message);
} // namespace detail

} // namespace tsc
