#include "tscontrol/dynamics.hpp"

#include <cmath>

namespace tsc {

namespace detail {

double spectral_norm(const Eigen::MatrixXd& m) {
    if (m.size() == 0)
        return 0;
    return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
}

Eigen::MatrixXd jump_solve(const Eigen::MatrixXd& A, double mu, const Eigen::MatrixXd& X,
                           double t_for_message) {
    const auto n = A.rows();
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n) + mu * A;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible())
        throw PreconditionError("nonregressive: I + mu A is singular at t = " +
                                std::to_string(t_for_message));
    return lu.solve(X);
}

} // namespace detail

RegressivityReport check_regressive(const LinearSystem& sys, const TimeScaleGrid& grid) {
    RegressivityReport rep;
    rep.ok = true;
    rep.worst_sigma_min = 1.0;
    rep.worst_condition = 1.0;
    const auto n = sys.n();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& p = grid.point(i);
        if (p.step != StepKind::Scattered)
            continue;
        Eigen::MatrixXd A = sys.A(p.t);
        Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n) + p.gap * A;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
        double smin = svd.singularValues()(n - 1);
        double smax = svd.singularValues()(0);
        double tau = 1e-10 * (1.0 + detail::spectral_norm(A));
        rep.tau = std::max(rep.tau, tau);
        rep.worst_sigma_min = std::min(rep.worst_sigma_min, smin);
        rep.worst_condition = std::max(rep.worst_condition, smin > 0 ? smax / smin
                                                                     : std::numeric_limits<double>::infinity());
        if (!(smin > tau)) {
            rep.ok = false;
            rep.failing_times.push_back(p.t);
        }
    }
    if (rep.tau == 0)
        rep.tau = 1e-10; // purely dense window: nothing to check
    return rep;
}

namespace {

// Forward propagation of X <- Phi(node range) X across [is, it).
Eigen::MatrixXd propagate_forward(const LinearSystem& sys, const TimeScaleGrid& grid,
                                  std::size_t is, std::size_t it, Eigen::MatrixXd X) {
    auto ode = [&](double tau, const Eigen::MatrixXd& Y) -> Eigen::MatrixXd {
        return sys.A(tau) * Y;
    };
    const auto n = sys.n();
    for (std::size_t i = is; i < it; ++i) {
        const auto& p = grid.point(i);
        if (p.step == StepKind::Scattered) {
            X = (Eigen::MatrixXd::Identity(n, n) + p.gap * sys.A(p.t)) * X;
        } else {
            X = detail::rk4_step(ode, p.t, p.gap, X);
        }
    }
    return X;
}

} // namespace

Eigen::MatrixXd transition_matrix(const LinearSystem& sys, const TimeScaleGrid& grid, double t,
                                  double s) {
    std::size_t it = grid.index_of(t);
    std::size_t is = grid.index_of(s);
    const auto n = sys.n();
    if (it == is)
        return Eigen::MatrixXd::Identity(n, n);
    if (it > is)
        return propagate_forward(sys, grid, is, it, Eigen::MatrixXd::Identity(n, n));
    Eigen::MatrixXd F = propagate_forward(sys, grid, it, is, Eigen::MatrixXd::Identity(n, n));
    Eigen::FullPivLU<Eigen::MatrixXd> lu(F);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible())
        throw PreconditionError("transition matrix not invertible over the window (nonregressive)");
    return lu.solve(Eigen::MatrixXd::Identity(n, n));
}

std::complex<double> scalar_exp(const TimeScaleGrid& grid, std::complex<double> lambda, double t,
                                double s) {
    std::size_t it = grid.index_of(t);
    std::size_t is = grid.index_of(s);
    bool backward = it < is;
    if (backward)
        std::swap(it, is);
    std::complex<double> prod = 1.0;
    double dense_len = 0;
    for (std::size_t i = is; i < it; ++i) {
        const auto& p = grid.point(i);
        if (p.step == StepKind::Scattered)
            prod *= 1.0 + p.gap * lambda;
        else
            dense_len += p.gap;
    }
    std::complex<double> v = prod * std::exp(lambda * dense_len);
    if (!backward)
        return v;
    if (v == 0.0)
        throw PreconditionError("scalar exponential: backward value undefined, 1 + mu*lambda "
                                "vanishes inside the window");
    return 1.0 / v;
}

SimulationResult simulate(const LinearSystem& sys, const TimeScaleGrid& grid,
                          const Eigen::VectorXd& x0, const Trajectory* u, double t0, double tf) {
    std::size_t i0 = grid.index_of(t0);
    std::size_t i1 = grid.index_of(tf);
    if (i0 > i1)
        throw InputError("simulate: t0 must not exceed tf");
    if (x0.size() != sys.n())
        throw InputError("simulate: x0 has wrong dimension");

    const int m = sys.m();
    auto checked = [&](Eigen::VectorXd v, const char* what) -> Eigen::VectorXd {
        if (v.size() != m)
            throw InputError(std::string("simulate: ") + what + " has wrong dimension");
        return v;
    };
    // Node values come from samples when present: at a right-scattered point
    // the sample carries the post-jump input, which the evaluator (the dense
    // restriction) cannot express.
    auto u_node = [&](double t, bool required) -> Eigen::VectorXd {
        if (!u)
            return Eigen::VectorXd::Zero(m);
        if (!u->times.empty()) {
            try {
                return checked(u->at_time(t), "input sample");
            } catch (const InputError&) {
                if (u->evaluator)
                    return checked(u->evaluator(t), "input evaluator");
                if (required)
                    throw;
                return Eigen::VectorXd::Zero(m);
            }
        }
        if (u->evaluator)
            return checked(u->evaluator(t), "input evaluator");
        if (required)
            throw InputError("simulate: input trajectory has neither samples nor evaluator");
        return Eigen::VectorXd::Zero(m);
    };
    auto u_stage = [&](double tau) -> Eigen::VectorXd {
        return checked(u->evaluator(tau), "input evaluator");
    };

    SimulationResult res;
    res.state.role = Trajectory::Role::State;
    res.output.role = Trajectory::Role::Output;

    Eigen::VectorXd x = x0;
    for (std::size_t i = i0; i <= i1; ++i) {
        const auto& p = grid.point(i);
        // input at the terminal node is not part of the steering window; its
        // D-term falls back to zero when no sample is available
        Eigen::VectorXd ui = u_node(p.t, i < i1);
        res.state.times.push_back(p.t);
        res.state.values.push_back(x);
        res.output.times.push_back(p.t);
        res.output.values.push_back(sys.C(p.t) * x + sys.D(p.t) * ui);
        if (i == i1)
            break;
        if (p.step == StepKind::Scattered) {
            x = x + p.gap * (sys.A(p.t) * x + sys.B(p.t) * ui);
        } else {
            const bool dense_input = u && u->evaluator;
            auto ode = [&](double tau, const Eigen::MatrixXd& v) -> Eigen::MatrixXd {
                Eigen::VectorXd uu = dense_input ? u_stage(tau) : ui;
                return sys.A(tau) * v + sys.B(tau) * uu;
            };
            x = detail::rk4_step(ode, p.t, p.gap, x);
        }
    }
    return res;
}

Eigen::MatrixXd weighting_pattern(const LinearSystem& sys, const TimeScaleGrid& grid, double t,
                                  double s) {
    double ss = grid.sigma(s);
    return sys.C(t) * transition_matrix(sys, grid, t, ss) * sys.B(s);
}

} // namespace tsc
