#include "tscontrol/ranktests.hpp"
#include "tscontrol/dynamics.hpp"
#include "tscontrol/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <limits>
#include <map>

namespace tsc {

namespace {

template <typename Mat>
std::pair<int, Eigen::VectorXd> svd_rank(const Mat& m, double& tol) {
    Eigen::JacobiSVD<Mat> svd(m);
    Eigen::VectorXd sv = svd.singularValues();
    if (tol < 0) {
        double smax = sv.size() ? sv(0) : 0.0;
        tol = std::max(m.rows(), m.cols()) * std::numeric_limits<double>::epsilon() * smax;
    }
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > tol)
            ++r;
    return {r, sv};
}

Eigen::MatrixXd build_ctrb(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    const int n = static_cast<int>(A.rows());
    if (A.cols() != n || B.rows() != n)
        throw InputError("controllability matrix: dimension mismatch");
    Eigen::MatrixXd m(n, n * B.cols());
    Eigen::MatrixXd blk = B;
    for (int k = 0; k < n; ++k) {
        m.middleCols(k * B.cols(), B.cols()) = blk;
        blk = A * blk;
    }
    return m;
}

} // namespace

RankVerdict kalman_controllability(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                   double tol) {
    RankVerdict v;
    v.matrix = build_ctrb(A, B);
    v.tol = tol;
    auto [r, sv] = svd_rank(v.matrix, v.tol);
    v.rank = r;
    v.singular_values = sv;
    v.pass = v.rank == A.rows();
    return v;
}

RankVerdict kalman_observability(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                                 double tol) {
    if (C.cols() != A.rows())
        throw InputError("observability matrix: dimension mismatch");
    RankVerdict v = kalman_controllability(A.transpose(), C.transpose(), tol);
    v.matrix = Eigen::MatrixXd(v.matrix.transpose());
    return v;
}

ExactRankVerdict kalman_controllability_exact(const RatMat& A, const RatMat& B) {
    const int n = A.rows();
    if (A.cols() != n || B.rows() != n)
        throw InputError("controllability matrix: dimension mismatch");
    ExactRankVerdict v;
    v.matrix = B;
    RatMat blk = B;
    for (int k = 1; k < n; ++k) {
        blk = A * blk;
        v.matrix = v.matrix.hstack(blk);
    }
    v.rank = v.matrix.rank();
    v.pass = v.rank == n;
    return v;
}

ExactRankVerdict kalman_observability_exact(const RatMat& A, const RatMat& C) {
    ExactRankVerdict v = kalman_controllability_exact(A.transpose(), C.transpose());
    v.matrix = v.matrix.transpose();
    return v;
}

namespace {

// Evaluates the K_j / L_j recurrences over grid nodes with memoization; the
// delta derivatives of the sequence members recurse through the grid stencil.
class SeqEval {
public:
    SeqEval(const LinearSystem& sys, const TimeScaleGrid& grid)
        : sys_(sys), grid_(grid) {}

    bool used_hooks() const { return used_hooks_; }

    Eigen::MatrixXd A_delta(double t) {
        if (sys_.hooks() && sys_.hooks()->A_delta) {
            used_hooks_ = true;
            return sys_.hooks()->A_delta(t);
        }
        return grid_.delta_derivative([this](double s) { return sys_.A(s); }, t);
    }

    double mu_delta(double t) {
        if (sys_.hooks() && sys_.hooks()->mu_delta) {
            used_hooks_ = true;
            return sys_.hooks()->mu_delta(t);
        }
        std::size_t i = grid_.index_of(t);
        auto mu_at = [this](std::size_t idx) {
            return grid_.is_scattered(idx) ? grid_.point(idx).gap : 0.0;
        };
        auto mu_fn = [this](double s) {
            Eigen::MatrixXd m(1, 1);
            m(0, 0) = grid_.mu(s);
            return m;
        };
        // constant graininess short-circuit keeps junction nodes harmless
        std::size_t nb = i + 1 < grid_.size() ? i + 1 : i;
        if (mu_at(i) == mu_at(nb) && (i == 0 || mu_at(i - 1) == mu_at(i)))
            return 0.0;
        return grid_.delta_derivative(mu_fn, t)(0, 0);
    }

    Eigen::MatrixXd K(int j, std::size_t i) {
        if (auto it = kmemo_.find({j, i}); it != kmemo_.end())
            return it->second;
        double t = grid_.point(i).t;
        Eigen::MatrixXd val;
        if (j == 0) {
            val = sys_.B(t);
        } else {
            double mu = grid_.mu(t);
            double ts = grid_.sigma(t);
            double mus = grid_.mu(ts);
            Eigen::MatrixXd At = sys_.A(t);
            Eigen::MatrixXd As = sys_.A(ts);
            Eigen::MatrixXd Kprev = K(j - 1, i);
            Eigen::MatrixXd Kd;
            if (j == 1 && sys_.hooks() && sys_.hooks()->B_delta) {
                used_hooks_ = true;
                Kd = sys_.hooks()->B_delta(t);
            } else {
                Kd = grid_.delta_derivative(
                    [this, j](double s) { return K(j - 1, grid_.index_of(s)); }, t);
            }
            Eigen::MatrixXd Kjump = detail::jump_solve(At, mu, Kprev, t);
            Eigen::MatrixXd inner = Kd - (mu_delta(t) * As + mu * A_delta(t)) * Kjump;
            val = detail::jump_solve(As, mus, inner, ts) - At * Kjump;
        }
        kmemo_.emplace(std::make_pair(j, i), val);
        return val;
    }

    Eigen::MatrixXd L(int j, std::size_t i) {
        if (auto it = lmemo_.find({j, i}); it != lmemo_.end())
            return it->second;
        double t = grid_.point(i).t;
        Eigen::MatrixXd val;
        if (j == 0) {
            val = sys_.C(t);
        } else {
            double mu = grid_.mu(t);
            Eigen::MatrixXd At = sys_.A(t);
            Eigen::MatrixXd Lprev = L(j - 1, i);
            Eigen::MatrixXd Ld;
            if (j == 1 && sys_.hooks() && sys_.hooks()->C_delta) {
                used_hooks_ = true;
                Ld = sys_.hooks()->C_delta(t);
            } else {
                Ld = grid_.delta_derivative(
                    [this, j](double s) { return L(j - 1, grid_.index_of(s)); }, t);
            }
            val = Lprev * At + Ld * (Eigen::MatrixXd::Identity(At.rows(), At.cols()) + mu * At);
        }
        lmemo_.emplace(std::make_pair(j, i), val);
        return val;
    }

private:
    const LinearSystem& sys_;
    const TimeScaleGrid& grid_;
    bool used_hooks_ = false;
    std::map<std::pair<int, std::size_t>, Eigen::MatrixXd> kmemo_, lmemo_;
};

} // namespace

std::vector<Eigen::MatrixXd> k_sequence(const LinearSystem& sys, const TimeScaleGrid& grid,
                                        double t, int q) {
    if (q < 0)
        throw InputError("negative sequence length");
    SeqEval ev(sys, grid);
    std::size_t i = grid.index_of(t);
    std::vector<Eigen::MatrixXd> out;
    for (int j = 0; j <= q; ++j)
        out.push_back(ev.K(j, i));
    return out;
}

std::vector<Eigen::MatrixXd> l_sequence(const LinearSystem& sys, const TimeScaleGrid& grid,
                                        double t, int q) {
    if (q < 0)
        throw InputError("negative sequence length");
    SeqEval ev(sys, grid);
    std::size_t i = grid.index_of(t);
    std::vector<Eigen::MatrixXd> out;
    for (int j = 0; j <= q; ++j)
        out.push_back(ev.L(j, i));
    return out;
}

namespace {

TvRankVerdict tv_rank_impl(const LinearSystem& sys, const TimeScaleGrid& grid,
                           const std::vector<double>& t_candidates, int q, bool ctrb) {
    if (t_candidates.empty())
        throw InputError("no candidate times supplied");
    const int n = sys.n();
    TvRankVerdict v;
    SeqEval ev(sys, grid);
    for (double tc : t_candidates) {
        std::size_t i = grid.index_of(tc);
        Eigen::MatrixXd stack;
        if (ctrb) {
            stack.resize(n, static_cast<Eigen::Index>(q + 1) * sys.m());
            for (int j = 0; j <= q; ++j)
                stack.middleCols(static_cast<Eigen::Index>(j) * sys.m(), sys.m()) = ev.K(j, i);
        } else {
            stack.resize(static_cast<Eigen::Index>(q + 1) * sys.p(), n);
            for (int j = 0; j <= q; ++j)
                stack.middleRows(static_cast<Eigen::Index>(j) * sys.p(), sys.p()) = ev.L(j, i);
        }
        double tol = -1.0;
        auto [r, sv] = svd_rank(stack, tol);
        (void)sv;
        v.tol = tol;
        if (r > v.best_rank)
            v.best_rank = r;
        if (r == n) {
            v.sufficient_pass = true;
            v.witness_t = tc;
            break;
        }
    }
    v.used_hooks = ev.used_hooks();
    if (v.sufficient_pass) {
        v.note = "full rank at the witness time certifies the property";
    } else {
        v.note = "inconclusive: the rank test is sufficient only";
        if (!v.used_hooks)
            v.note += "; derivatives were taken by grid finite differences";
    }
    return v;
}

} // namespace

TvRankVerdict tv_controllability_rank(const LinearSystem& sys, const TimeScaleGrid& grid,
                                      const std::vector<double>& t_candidates, int q) {
    return tv_rank_impl(sys, grid, t_candidates, q, true);
}

TvRankVerdict tv_observability_rank(const LinearSystem& sys, const TimeScaleGrid& grid,
                                    const std::vector<double>& t_candidates, int q) {
    return tv_rank_impl(sys, grid, t_candidates, q, false);
}

namespace {

std::vector<std::complex<double>> distinct_eigenvalues(const Eigen::MatrixXd& A, double tol) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(A);
    if (es.info() != Eigen::Success)
        throw PreconditionError("eigensolver failed");
    std::vector<std::complex<double>> out;
    for (int i = 0; i < A.rows(); ++i) {
        std::complex<double> lam = es.eigenvalues()(i);
        bool seen = false;
        for (const auto& l : out)
            if (std::abs(l - lam) <= tol) {
                seen = true;
                break;
            }
        if (!seen)
            out.push_back(lam);
    }
    return out;
}

} // namespace

PbhVerdict pbh_controllability(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                               double witness_tol) {
    const int n = static_cast<int>(A.rows());
    if (A.cols() != n || B.rows() != n)
        throw InputError("PBH: dimension mismatch");
    PbhVerdict v;
    v.witness_tol = witness_tol;
    double cluster = 1e-8 * std::max(1.0, A.norm());
    auto lambdas = distinct_eigenvalues(A, cluster);

    Eigen::EigenSolver<Eigen::MatrixXd> left(A.transpose());
    double bnorm = B.norm();

    v.pass = true;
    for (const auto& lam : lambdas) {
        PbhTest t;
        t.lambda = lam;
        Eigen::MatrixXcd m(n, n + B.cols());
        m.leftCols(n) = lam * Eigen::MatrixXcd::Identity(n, n) - A.cast<std::complex<double>>();
        m.rightCols(B.cols()) = B.cast<std::complex<double>>();
        double tol = -1.0;
        auto [r, sv] = svd_rank(m, tol);
        (void)sv;
        v.rank_tol = tol;
        t.rank = r;
        t.pass = r == n;
        if (!t.pass) {
            v.pass = false;
            // left eigenvector of A at lam orthogonal to range(B)
            for (int i = 0; i < n; ++i) {
                if (std::abs(left.eigenvalues()(i) - lam) > cluster)
                    continue;
                Eigen::VectorXcd p = left.eigenvectors().col(i);
                if ((p.transpose() * B.cast<std::complex<double>>()).norm() <=
                    witness_tol * p.norm() * std::max(bnorm, 1e-300)) {
                    t.witness = p;
                    break;
                }
            }
        }
        v.tests.push_back(std::move(t));
    }
    return v;
}

PbhVerdict pbh_observability(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                             double witness_tol) {
    if (C.cols() != A.rows())
        throw InputError("PBH: dimension mismatch");
    // duality: rank [C; lambda I - A] = rank [lambda I - A^T, C^T], and a left
    // eigenvector of A^T is a right eigenvector of A annihilated by C
    return pbh_controllability(A.transpose(), C.transpose(), witness_tol);
}

namespace {

Decomposition decomposition_impl(const Eigen::MatrixXd& A, const Eigen::MatrixXd& InOut,
                                 bool ctrb) {
    const int n = static_cast<int>(A.rows());
    RankVerdict kv = ctrb ? kalman_controllability(A, InOut) : kalman_observability(A, InOut);
    const int q = kv.rank;
    if (q == 0)
        throw PreconditionError(ctrb ? "controllable subspace is trivial"
                                     : "observable subspace is trivial");

    Decomposition d;
    d.q = q;
    d.tol = 1e-9 * std::max(1.0, A.norm());

    // orthogonal basis adapted to the range of the Kalman matrix (its first q
    // columns after column pivoting), completed by the factorization itself
    Eigen::MatrixXd M = ctrb ? kv.matrix : Eigen::MatrixXd(kv.matrix.transpose());
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
    Eigen::MatrixXd Q = qr.householderQ();
    d.P = Q;

    Eigen::MatrixXd Ah = Q.transpose() * A * Q;
    d.A_hat = Ah;
    if (q == n) {
        d.trivial = true;
        d.P = Eigen::MatrixXd::Identity(n, n);
        d.A_hat = A;
        d.B_hat = ctrb ? InOut : Eigen::MatrixXd();
        d.C_hat = ctrb ? Eigen::MatrixXd() : InOut;
        d.zero_block_norm = 0.0;
        d.certified = true;
        return d;
    }

    if (ctrb) {
        d.B_hat = Q.transpose() * InOut;
        double za = Ah.bottomLeftCorner(n - q, q).norm();
        double zb = d.B_hat.bottomRows(n - q).norm();
        d.zero_block_norm = std::max(za, zb);
        RankVerdict red = kalman_controllability(Ah.topLeftCorner(q, q),
                                                 d.B_hat.topRows(q));
        d.certified = d.zero_block_norm <= d.tol && red.rank == q;
    } else {
        d.C_hat = InOut * Q;
        double za = Ah.topRightCorner(q, n - q).norm();
        double zc = d.C_hat.rightCols(n - q).norm();
        d.zero_block_norm = std::max(za, zc);
        RankVerdict red = kalman_observability(Ah.topLeftCorner(q, q),
                                               d.C_hat.leftCols(q));
        d.certified = d.zero_block_norm <= d.tol && red.rank == q;
    }
    return d;
}

} // namespace

Decomposition controllable_decomposition(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    return decomposition_impl(A, B, true);
}

Decomposition observable_decomposition(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C) {
    return decomposition_impl(A, C, false);
}

} // namespace tsc
