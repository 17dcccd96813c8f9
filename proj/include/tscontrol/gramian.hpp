#pragma once

#include <Eigen/Dense>

#include "tscontrol/dynamics.hpp"
#include "tscontrol/system.hpp"
#include "tscontrol/timescale.hpp"

namespace tsc {

struct GramianResult {
    enum class Kind { Controllability, Observability };
    Kind kind = Kind::Controllability;
    Eigen::MatrixXd matrix; // symmetrized accumulator
    double t0 = 0, tf = 0;
    double eig_min = 0, eig_max = 0;
    double tau_pd = 1e-9;
    bool invertible = false; // eig_min > tau_pd * eig_max
};

// G_C(t0, tf) = integral over [t0, tf) of Phi(t0, sigma(t)) B(t) B^T(t) Phi^T(t0, sigma(t)).
// Scattered nodes contribute exactly through the jump recurrence
// Phi(t0, sigma(t)) = Phi(t0, t) (I + mu A(t))^{-1}; dense runs propagate the
// transition recurrence and the accumulator jointly with RK4 (the quadrature
// must match simulate's input coupling order, or steering accuracy collapses).
GramianResult controllability_gramian(const LinearSystem& sys, const TimeScaleGrid& grid,
                                      double t0, double tf);

// G_O(t0, tf) = integral over [t0, tf) of Phi^T(t, t0) C^T(t) C(t) Phi(t, t0).
GramianResult observability_gramian(const LinearSystem& sys, const TimeScaleGrid& grid, double t0,
                                    double tf);

// u(t) = -B^T(t) Phi^T(t0, sigma(t)) G_C^{-1}(t0, tf) (x0 - Phi(t0, tf) xf) on [t0, tf).
// The returned trajectory carries node samples and a dense-time evaluator so
// simulate can sample it at RK4 stage times. Throws PreconditionError when the
// Gramian fails the invertibility test.
Trajectory min_energy_input(const LinearSystem& sys, const TimeScaleGrid& grid, double t0,
                            double tf, const Eigen::VectorXd& x0, const Eigen::VectorXd& xf);

// x0 = G_O^{-1}(t0, tf) * integral over [t0, tf) of Phi^T(t, t0) C^T(t) y(t).
// y must sample the zero-input output on the grid nodes of [t0, tf).
Eigen::VectorXd reconstruct_initial_state(const LinearSystem& sys, const TimeScaleGrid& grid,
                                          double t0, double tf, const Trajectory& y);

} // namespace tsc
