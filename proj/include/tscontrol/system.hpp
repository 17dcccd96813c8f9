#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tscontrol/errors.hpp"

namespace tsc {

using MatrixFn = std::function<Eigen::MatrixXd(double)>;

// Optional analytic delta derivatives. When absent, consumers fall back to
// finite differences on the grid.
struct DerivativeHooks {
    MatrixFn A_delta;
    MatrixFn B_delta;
    MatrixFn C_delta;
    std::function<double(double)> mu_delta;
};

// x^Delta = A(t) x + B(t) u,  y = C(t) x + D(t) u with dims n, m <= n, p <= n.
class LinearSystem {
  public:
    static LinearSystem constant(Eigen::MatrixXd A, Eigen::MatrixXd B, Eigen::MatrixXd C,
                                 Eigen::MatrixXd D = Eigen::MatrixXd());
    static LinearSystem varying(int n, int m, int p, MatrixFn A, MatrixFn B, MatrixFn C,
                                MatrixFn D = nullptr);

    Eigen::MatrixXd A(double t) const { return eval(Afn_, t, n_, n_, "A"); }
    Eigen::MatrixXd B(double t) const { return eval(Bfn_, t, n_, m_, "B"); }
    Eigen::MatrixXd C(double t) const { return eval(Cfn_, t, p_, n_, "C"); }
    Eigen::MatrixXd D(double t) const;

    int n() const { return n_; }
    int m() const { return m_; }
    int p() const { return p_; }
    bool time_invariant() const { return time_invariant_; }

    // Constant-coefficient access; requires time_invariant().
    const Eigen::MatrixXd& A0() const;
    const Eigen::MatrixXd& B0() const;
    const Eigen::MatrixXd& C0() const;
    const Eigen::MatrixXd& D0() const;

    const std::optional<DerivativeHooks>& hooks() const { return hooks_; }
    void set_hooks(DerivativeHooks h) { hooks_ = std::move(h); }

  private:
    static Eigen::MatrixXd eval(const MatrixFn& f, double t, int r, int c, const char* name);

    int n_ = 0, m_ = 0, p_ = 0;
    bool time_invariant_ = false;
    MatrixFn Afn_, Bfn_, Cfn_, Dfn_;
    Eigen::MatrixXd A0_, B0_, C0_, D0_; // cached when time-invariant
    std::optional<DerivativeHooks> hooks_;
};

// Samples of a signal on grid nodes. `evaluator`, when set, extends the signal
// to dense sub-node times (used by the RK4 stages of simulate); sample-only
// trajectories are held constant across each dense quadrature substep.
struct Trajectory {
    enum class Role { State, Output, Input };
    Role role = Role::Input;
    std::vector<double> times;
    std::vector<Eigen::VectorXd> values;
    std::function<Eigen::VectorXd(double)> evaluator;

    Eigen::VectorXd at_time(double t) const; // exact sample lookup, InputError if absent
};

struct SimulationResult {
    Trajectory state;
    Trajectory output;
};

} // namespace tsc
