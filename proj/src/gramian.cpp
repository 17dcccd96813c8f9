#include "tscontrol/gramian.hpp"

#include <cmath>
#include <memory>

namespace tsc {

namespace {

// X (I + mu A)^{-1} without forming the inverse.
Eigen::MatrixXd jump_solve_right(const Eigen::MatrixXd& A, double mu, const Eigen::MatrixXd& X,
                                 double t) {
    return detail::jump_solve(A.transpose(), mu, X.transpose(), t).transpose();
}

void finish(GramianResult& G) {
    G.matrix = ((G.matrix + G.matrix.transpose()) / 2).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G.matrix);
    G.eig_min = es.eigenvalues().minCoeff();
    G.eig_max = es.eigenvalues().maxCoeff();
    G.invertible = G.eig_min > G.tau_pd * G.eig_max && G.eig_max > 0;
}

struct ControllabilityPass {
    // Psi tracks Phi(t0, t); G accumulates the Gramian. Dense runs advance both
    // with one joint RK4 step per substep so the quadrature order matches the
    // simulation path; scattered nodes use the exact jump recurrence.
    Eigen::MatrixXd Psi, G;

    ControllabilityPass(const LinearSystem& sys, const TimeScaleGrid& grid, std::size_t i0,
                        std::size_t i1, std::vector<Eigen::MatrixXd>* node_psis) {
        const auto n = sys.n();
        Psi = Eigen::MatrixXd::Identity(n, n);
        G = Eigen::MatrixXd::Zero(n, n);
        if (node_psis)
            node_psis->push_back(Psi);
        for (std::size_t i = i0; i < i1; ++i) {
            const auto& p = grid.point(i);
            if (p.step == StepKind::Scattered) {
                Eigen::MatrixXd PsiS = jump_solve_right(sys.A(p.t), p.gap, Psi, p.t);
                Eigen::MatrixXd v = PsiS * sys.B(p.t);
                G += p.gap * v * v.transpose();
                Psi = PsiS;
            } else {
                double h = p.gap;
                auto fP = [&](double tau, const Eigen::MatrixXd& P) -> Eigen::MatrixXd {
                    return -P * sys.A(tau);
                };
                auto fG = [&](double tau, const Eigen::MatrixXd& P) -> Eigen::MatrixXd {
                    Eigen::MatrixXd v = P * sys.B(tau);
                    return v * v.transpose();
                };
                Eigen::MatrixXd kP1 = fP(p.t, Psi), kG1 = fG(p.t, Psi);
                Eigen::MatrixXd P2 = Psi + (h / 2) * kP1;
                Eigen::MatrixXd kP2 = fP(p.t + h / 2, P2), kG2 = fG(p.t + h / 2, P2);
                Eigen::MatrixXd P3 = Psi + (h / 2) * kP2;
                Eigen::MatrixXd kP3 = fP(p.t + h / 2, P3), kG3 = fG(p.t + h / 2, P3);
                Eigen::MatrixXd P4 = Psi + h * kP3;
                Eigen::MatrixXd kP4 = fP(p.t + h, P4), kG4 = fG(p.t + h, P4);
                Psi += (h / 6) * (kP1 + 2 * kP2 + 2 * kP3 + kP4);
                G += (h / 6) * (kG1 + 2 * kG2 + 2 * kG3 + kG4);
            }
            if (node_psis)
                node_psis->push_back(Psi);
        }
    }
};

} // namespace

GramianResult controllability_gramian(const LinearSystem& sys, const TimeScaleGrid& grid,
                                      double t0, double tf) {
    std::size_t i0 = grid.index_of(t0), i1 = grid.index_of(tf);
    if (i0 > i1)
        throw InputError("gramian: t0 must not exceed tf");
    ControllabilityPass pass(sys, grid, i0, i1, nullptr);
    GramianResult G;
    G.kind = GramianResult::Kind::Controllability;
    G.t0 = t0;
    G.tf = tf;
    G.matrix = pass.G;
    finish(G);
    return G;
}

GramianResult observability_gramian(const LinearSystem& sys, const TimeScaleGrid& grid, double t0,
                                    double tf) {
    std::size_t i0 = grid.index_of(t0), i1 = grid.index_of(tf);
    if (i0 > i1)
        throw InputError("gramian: t0 must not exceed tf");
    const auto n = sys.n();
    Eigen::MatrixXd Theta = Eigen::MatrixXd::Identity(n, n); // Phi(t, t0)
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = i0; i < i1; ++i) {
        const auto& p = grid.point(i);
        if (p.step == StepKind::Scattered) {
            Eigen::MatrixXd v = sys.C(p.t) * Theta;
            G += p.gap * v.transpose() * v;
            Theta = (Eigen::MatrixXd::Identity(n, n) + p.gap * sys.A(p.t)) * Theta;
        } else {
            double h = p.gap;
            auto fT = [&](double tau, const Eigen::MatrixXd& T) -> Eigen::MatrixXd {
                return sys.A(tau) * T;
            };
            auto fG = [&](double tau, const Eigen::MatrixXd& T) -> Eigen::MatrixXd {
                Eigen::MatrixXd v = sys.C(tau) * T;
                return v.transpose() * v;
            };
            Eigen::MatrixXd kT1 = fT(p.t, Theta), kG1 = fG(p.t, Theta);
            Eigen::MatrixXd T2 = Theta + (h / 2) * kT1;
            Eigen::MatrixXd kT2 = fT(p.t + h / 2, T2), kG2 = fG(p.t + h / 2, T2);
            Eigen::MatrixXd T3 = Theta + (h / 2) * kT2;
            Eigen::MatrixXd kT3 = fT(p.t + h / 2, T3), kG3 = fG(p.t + h / 2, T3);
            Eigen::MatrixXd T4 = Theta + h * kT3;
            Eigen::MatrixXd kT4 = fT(p.t + h, T4), kG4 = fG(p.t + h, T4);
            Theta += (h / 6) * (kT1 + 2 * kT2 + 2 * kT3 + kT4);
            G += (h / 6) * (kG1 + 2 * kG2 + 2 * kG3 + kG4);
        }
    }
    GramianResult R;
    R.kind = GramianResult::Kind::Observability;
    R.t0 = t0;
    R.tf = tf;
    R.matrix = G;
    finish(R);
    return R;
}

Trajectory min_energy_input(const LinearSystem& sys, const TimeScaleGrid& grid, double t0,
                            double tf, const Eigen::VectorXd& x0, const Eigen::VectorXd& xf) {
    std::size_t i0 = grid.index_of(t0), i1 = grid.index_of(tf);
    if (i0 >= i1)
        throw InputError("min_energy_input: window must be nonempty");
    if (x0.size() != sys.n() || xf.size() != sys.n())
        throw InputError("min_energy_input: state dimension mismatch");

    auto psis = std::make_shared<std::vector<Eigen::MatrixXd>>();
    psis->reserve(i1 - i0 + 1);
    ControllabilityPass pass(sys, grid, i0, i1, psis.get());

    GramianResult G;
    G.kind = GramianResult::Kind::Controllability;
    G.t0 = t0;
    G.tf = tf;
    G.matrix = pass.G;
    finish(G);
    if (!G.invertible)
        throw PreconditionError("min_energy_input: controllability Gramian is singular on this "
                                "window (eig ratio below tolerance)");

    // w = G^{-1} (x0 - Phi(t0, tf) xf); Phi(t0, tf) is the last cached Psi
    Eigen::VectorXd rhs = x0 - psis->back() * xf;
    Eigen::VectorXd w = G.matrix.ldlt().solve(rhs);

    // copy the window's node structure so the evaluator owns everything it needs
    struct Window {
        std::vector<double> times;
        std::vector<double> gaps;
        std::vector<bool> scattered;
    };
    auto win = std::make_shared<Window>();
    for (std::size_t i = i0; i <= i1; ++i) {
        const auto& p = grid.point(i);
        win->times.push_back(p.t);
        win->gaps.push_back(p.gap);
        win->scattered.push_back(p.step == StepKind::Scattered);
    }

    // the evaluator owns a copy of the system so it cannot dangle
    struct Evals {
        MatrixFn A, B;
    };
    auto fns = std::make_shared<Evals>();
    fns->A = [sys](double t) { return sys.A(t); };
    fns->B = [sys](double t) { return sys.B(t); };

    // Dense-limit values only: u(s) = -B^T(s) Phi^T(t0, s) w. The sigma-jump
    // belongs to the node samples at scattered points, never to the RK4 stage
    // values, or the last stage of a dense run picks up a spurious jump.
    auto evaluator = [psis, win, fns, w](double s) -> Eigen::VectorXd {
        double tol = 1e-12 * std::max(1.0, std::abs(s));
        auto& ts = win->times;
        auto it = std::upper_bound(ts.begin(), ts.end(), s + tol);
        if (it == ts.begin())
            throw InputError("min-energy input evaluated before its window");
        std::size_t k = static_cast<std::size_t>(it - ts.begin()) - 1;
        double tk = ts[k];
        const Eigen::MatrixXd& Psi = (*psis)[k];
        if (std::abs(s - tk) <= tol)
            return -fns->B(tk).transpose() * Psi.transpose() * w;
        if (win->scattered[k] || k + 1 >= ts.size())
            throw InputError("min-energy input evaluated off the dense part of its window");
        auto f = [&](double tau, const Eigen::MatrixXd& P) -> Eigen::MatrixXd {
            return -P * fns->A(tau);
        };
        Eigen::MatrixXd Ps = detail::rk4_step(f, tk, s - tk, Psi);
        return -fns->B(s).transpose() * Ps.transpose() * w;
    };

    Trajectory u;
    u.role = Trajectory::Role::Input;
    for (std::size_t i = i0; i < i1; ++i) {
        const auto& p = grid.point(i);
        u.times.push_back(p.t);
        if (p.step == StepKind::Scattered) {
            const Eigen::MatrixXd& Psi = (*psis)[i - i0];
            Eigen::MatrixXd PsiS =
                detail::jump_solve(fns->A(p.t).transpose(), p.gap, Psi.transpose(), p.t)
                    .transpose();
            u.values.push_back(-fns->B(p.t).transpose() * PsiS.transpose() * w);
        } else {
            u.values.push_back(evaluator(p.t));
        }
    }
    u.evaluator = evaluator;
    return u;
}

Eigen::VectorXd reconstruct_initial_state(const LinearSystem& sys, const TimeScaleGrid& grid,
                                          double t0, double tf, const Trajectory& y) {
    std::size_t i0 = grid.index_of(t0), i1 = grid.index_of(tf);
    if (i0 >= i1)
        throw InputError("reconstruct_initial_state: window must be nonempty");
    const auto n = sys.n();

    // Node-sampled y forces node quadrature here; using the *same* trapezoid
    // weights for the Gramian and the y-integral makes the identity
    // z = G_O x0 hold to roundoff whenever y came from simulate on this grid.
    Eigen::MatrixXd Theta = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);

    std::vector<Eigen::MatrixXd> thetas;
    thetas.reserve(i1 - i0 + 1);
    thetas.push_back(Theta);
    auto ode = [&](double tau, const Eigen::MatrixXd& T) -> Eigen::MatrixXd {
        return sys.A(tau) * T;
    };
    for (std::size_t i = i0; i < i1; ++i) {
        const auto& p = grid.point(i);
        if (p.step == StepKind::Scattered)
            Theta = (Eigen::MatrixXd::Identity(n, n) + p.gap * sys.A(p.t)) * Theta;
        else
            Theta = detail::rk4_step(ode, p.t, p.gap, Theta);
        thetas.push_back(Theta);
    }

    grid.for_each_weight(i0, i1, [&](std::size_t i, double wgt) {
        const auto& p = grid.point(i);
        Eigen::MatrixXd CT = sys.C(p.t) * thetas[i - i0];
        G += wgt * CT.transpose() * CT;
        z += wgt * CT.transpose() * y.at_time(p.t);
    });

    G = ((G + G.transpose()) / 2).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    double emin = es.eigenvalues().minCoeff(), emax = es.eigenvalues().maxCoeff();
    if (!(emin > 1e-9 * emax) || emax <= 0)
        throw PreconditionError("reconstruct_initial_state: observability Gramian is singular on "
                                "this window");
    return G.ldlt().solve(z);
}

} // namespace tsc
