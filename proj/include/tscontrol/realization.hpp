#pragma once

#include "tscontrol/gramian.hpp"
#include "tscontrol/poly.hpp"
#include "tscontrol/ranktests.hpp"
#include "tscontrol/rational.hpp"
#include "tscontrol/system.hpp"
#include "tscontrol/timescale.hpp"

#include <complex>
#include <vector>

namespace tsc {

struct Realization {
    enum class Source { Companion, User, Transformed };
    RatMat A, B, C;
    Source source = Source::User;
    bool certified = false; // exact transfer-function round-trip verified
};

// C adj(zI - A) B / det(zI - A), entries reduced; exact throughout.
RationalMatrix transfer_function(const RatMat& A, const RatMat& B, const RatMat& C);
RationalMatrix transfer_function(const Realization& r);

// exact characteristic polynomial (monic, ascending coefficients)
Poly characteristic_polynomial(const RatMat& A);

// Block-companion realization of a strictly-proper p x q rational matrix:
// state dimension q*r where r = deg of the monic lcm of the denominators.
Realization companion_realization(const RationalMatrix& G);

struct MinimalityVerdict {
    bool minimal = false;
    ExactRankVerdict controllability;
    ExactRankVerdict observability;
};
MinimalityVerdict is_minimal(const Realization& r);

struct TvMinimalityVerdict {
    bool minimal = false;
    GramianResult controllability;
    GramianResult observability;
};
TvMinimalityVerdict is_minimal_tv(const LinearSystem& sys, const TimeScaleGrid& grid,
                                  double t0, double tf);

// The zero-dynamics realization of a factored kernel H(t) F(s): state follows
// x^delta = F(t) u, output y = H(t) x, so the weighting pattern is H(t) F(s).
LinearSystem realize_from_factors(int nhat, int m, int p, const MatrixFn& H, const MatrixFn& F);

struct PartialFractionTerm {
    std::complex<double> lambda;
    Rational lambda_exact;  // meaningful only when exact_eigenvalues
    int psi = 1;
    std::vector<Eigen::MatrixXcd> W; // W[j-1] multiplies (z - lambda)^{-j}
};

struct PartialFractions {
    std::vector<PartialFractionTerm> terms;
    Poly char_poly;               // exact when built from a rational matrix
    bool exact_eigenvalues = false;
    bool clustering_ambiguous = false;
};

// Residue data of (zI - A)^{-1}. Rational spectra are extracted exactly from
// the characteristic polynomial; everything else falls back to the clustered
// numeric eigensolve.
PartialFractions partial_fractions(const RatMat& A);
PartialFractions partial_fractions(const Eigen::MatrixXd& A);

} // namespace tsc
