#pragma once

#include "tscontrol/rational.hpp"
#include "tscontrol/system.hpp"
#include "tscontrol/timescale.hpp"

#include <complex>
#include <string>
#include <vector>

namespace tsc {

struct RankVerdict {
    Eigen::MatrixXd matrix; // the stacked test matrix
    int rank = 0;
    Eigen::VectorXd singular_values;
    double tol = 0.0;
    bool pass = false; // rank == state dimension
};

struct ExactRankVerdict {
    RatMat matrix;
    int rank = 0;
    bool pass = false;
};

// [B AB ... A^{n-1}B]; rank by SVD with tol = max(dims)*eps*sigma_max unless
// a nonnegative tol is supplied.
RankVerdict kalman_controllability(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                   double tol = -1.0);
// [C; CA; ...; CA^{n-1}]
RankVerdict kalman_observability(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                                 double tol = -1.0);

ExactRankVerdict kalman_controllability_exact(const RatMat& A, const RatMat& B);
ExactRankVerdict kalman_observability_exact(const RatMat& A, const RatMat& C);

// K_0 = B, then each step applies the graininess-aware recurrence; delta
// derivatives come from analytic hooks when the system carries them and from
// grid finite differences otherwise.
std::vector<Eigen::MatrixXd> k_sequence(const LinearSystem& sys, const TimeScaleGrid& grid,
                                        double t, int q);
// L_0 = C, L_{j+1} = L_j A + L_j^delta (I + mu A)
std::vector<Eigen::MatrixXd> l_sequence(const LinearSystem& sys, const TimeScaleGrid& grid,
                                        double t, int q);

// Sufficient tests only: a full-rank stack at some candidate time proves the
// property, anything else is inconclusive.
struct TvRankVerdict {
    bool sufficient_pass = false;
    double witness_t = 0.0; // meaningful only when sufficient_pass
    int best_rank = 0;
    double tol = 0.0;
    bool used_hooks = false;
    std::string note;
};

TvRankVerdict tv_controllability_rank(const LinearSystem& sys, const TimeScaleGrid& grid,
                                      const std::vector<double>& t_candidates, int q);
TvRankVerdict tv_observability_rank(const LinearSystem& sys, const TimeScaleGrid& grid,
                                    const std::vector<double>& t_candidates, int q);

struct PbhTest {
    std::complex<double> lambda;
    int rank = 0;
    bool pass = false;
    Eigen::VectorXcd witness; // eigenvector certifying the failure, else empty
};

struct PbhVerdict {
    bool pass = false;
    std::vector<PbhTest> tests; // one per distinct eigenvalue
    double rank_tol = 0.0;
    double witness_tol = 0.0;
};

// rank [lambda I - A, B] at each eigenvalue of A; failures come with a left
// eigenvector p of A satisfying p^T B ~ 0.
PbhVerdict pbh_controllability(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                               double witness_tol = 1e-8);
// rank [C; lambda I - A]; failures certified by a right eigenvector in ker C.
PbhVerdict pbh_observability(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                             double witness_tol = 1e-8);

// Orthogonal change of basis splitting the state space along the reachable
// (resp. unobservable-complement) subspace. For the controllable form the
// lower-left block of P^T A P and the lower block of P^T B vanish; for the
// observable form the upper-right block of P^T A P and the right block of
// C P vanish.
struct Decomposition {
    Eigen::MatrixXd P; // orthogonal
    Eigen::MatrixXd A_hat;
    Eigen::MatrixXd B_hat; // controllable form
    Eigen::MatrixXd C_hat; // observable form
    int q = 0;             // dimension of the distinguished subspace
    bool trivial = false;  // q == n
    double zero_block_norm = 0.0;
    double tol = 0.0;
    bool certified = false; // zero blocks within tol and reduced pair full rank
};

Decomposition controllable_decomposition(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);
Decomposition observable_decomposition(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C);

} // namespace tsc
