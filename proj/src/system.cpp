#include "tscontrol/system.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace tsc {

namespace {
void check_dims(int n, int m, int p) {
    if (n < 1)
        throw InputError("system: state dimension must be positive");
    if (m < 1 || m > n)
        throw InputError("system: input dimension must satisfy 1 <= m <= n");
    if (p < 1 || p > n)
        throw InputError("system: output dimension must satisfy 1 <= p <= n");
}
} // namespace

LinearSystem LinearSystem::constant(Eigen::MatrixXd A, Eigen::MatrixXd B, Eigen::MatrixXd C,
                                    Eigen::MatrixXd D) {
    if (A.rows() != A.cols())
        throw InputError("system: A must be square");
    const int n = static_cast<int>(A.rows());
    if (B.rows() != n)
        throw InputError("system: B must have n rows");
    if (C.cols() != n)
        throw InputError("system: C must have n columns");
    const int m = static_cast<int>(B.cols());
    const int p = static_cast<int>(C.rows());
    check_dims(n, m, p);
    if (D.size() == 0)
        D = Eigen::MatrixXd::Zero(p, m);
    if (D.rows() != p || D.cols() != m)
        throw InputError("system: D must be p x m");

    LinearSystem sys;
    sys.n_ = n;
    sys.m_ = m;
    sys.p_ = p;
    sys.time_invariant_ = true;
    sys.A0_ = std::move(A);
    sys.B0_ = std::move(B);
    sys.C0_ = std::move(C);
    sys.D0_ = std::move(D);
    sys.Afn_ = [M = sys.A0_](double) { return M; };
    sys.Bfn_ = [M = sys.B0_](double) { return M; };
    sys.Cfn_ = [M = sys.C0_](double) { return M; };
    sys.Dfn_ = [M = sys.D0_](double) { return M; };
    return sys;
}

LinearSystem LinearSystem::varying(int n, int m, int p, MatrixFn A, MatrixFn B, MatrixFn C,
                                   MatrixFn D) {
    check_dims(n, m, p);
    if (!A || !B || !C)
        throw InputError("system: A, B, C evaluators are required");
    LinearSystem sys;
    sys.n_ = n;
    sys.m_ = m;
    sys.p_ = p;
    sys.time_invariant_ = false;
    sys.Afn_ = std::move(A);
    sys.Bfn_ = std::move(B);
    sys.Cfn_ = std::move(C);
    if (D)
        sys.Dfn_ = std::move(D);
    else
        sys.Dfn_ = [p, m](double) { return Eigen::MatrixXd::Zero(p, m); };
    return sys;
}

Eigen::MatrixXd LinearSystem::eval(const MatrixFn& f, double t, int r, int c, const char* name) {
    Eigen::MatrixXd v = f(t);
    if (v.rows() != r || v.cols() != c)
        throw InputError(std::string("system: ") + name + "(t) has wrong dimensions");
    return v;
}

Eigen::MatrixXd LinearSystem::D(double t) const { return eval(Dfn_, t, p_, m_, "D"); }

const Eigen::MatrixXd& LinearSystem::A0() const {
    if (!time_invariant_)
        throw Error("system: constant-coefficient access on a time-varying system");
    return A0_;
}
const Eigen::MatrixXd& LinearSystem::B0() const {
    if (!time_invariant_)
        throw Error("system: constant-coefficient access on a time-varying system");
    return B0_;
}
const Eigen::MatrixXd& LinearSystem::C0() const {
    if (!time_invariant_)
        throw Error("system: constant-coefficient access on a time-varying system");
    return C0_;
}
const Eigen::MatrixXd& LinearSystem::D0() const {
    if (!time_invariant_)
        throw Error("system: constant-coefficient access on a time-varying system");
    return D0_;
}

Eigen::VectorXd Trajectory::at_time(double t) const {
    double tol = 1e-12 * std::max(1.0, std::abs(t));
    auto it = std::lower_bound(times.begin(), times.end(), t - tol);
    if (it != times.end() && std::abs(*it - t) <= tol)
        return values[static_cast<std::size_t>(it - times.begin())];
    throw InputError("trajectory: no sample at the requested time");
}

} // namespace tsc
