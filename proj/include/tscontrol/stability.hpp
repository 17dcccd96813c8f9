#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tscontrol/rational.hpp"
#include "tscontrol/realization.hpp"
#include "tscontrol/system.hpp"
#include "tscontrol/timescale.hpp"

namespace tsc {

enum class RegionVerdict { Inside, Outside, Marginal };
enum class StabilityVerdict { Stable, Unstable, Undetermined };

std::string to_string(RegionVerdict v);
std::string to_string(StabilityVerdict v);

// Pointwise growth-rate density of the scalar exponential: log|1 + mu*lambda| / mu
// at right-scattered points, Re(lambda) in the dense limit mu = 0. Throws
// PreconditionError on the regressivity boundary 1 + mu*lambda = 0.
double region_integrand(double mu, std::complex<double> lambda);

// One lambda tested against the exponential-stability region of the grid.
// averages[i] is the time-average of region_integrand over [t0, T_i]; the
// asymptotic limsup is approximated by the max over the latter half of the
// horizon schedule, and a verdict within +-margin of zero stays Marginal.
struct StabilityRegionQuery {
    std::complex<double> lambda;
    std::vector<double> horizons;
    std::vector<double> averages;
    double margin = 1e-3;
    double decisive = 0;  // max average over the latter half of the schedule
    RegionVerdict verdict = RegionVerdict::Marginal;
    bool regressivity_boundary = false;  // 1 + mu*lambda vanished at some node
};

StabilityRegionQuery in_stability_region(const TimeScaleGrid& grid, std::complex<double> lambda,
                                         const std::vector<double>& horizons,
                                         double margin = 1e-3);

// Eigenvalue placement test: Inside only when every eigenvalue of A sits inside
// the stability region; any Outside eigenvalue wins over Marginal ones, and a
// Marginal eigenvalue is never coerced to a boolean answer. Certifies uniform
// exponential stability in the Phi-bound (K e^{-alpha t}) sense.
struct SpectrumStabilityVerdict {
    RegionVerdict verdict = RegionVerdict::Marginal;
    std::vector<StabilityRegionQuery> eigenvalues;  // one query per distinct eigenvalue
};

SpectrumStabilityVerdict exp_stable_spectrum(const Eigen::MatrixXd& A, const TimeScaleGrid& grid,
                                             const std::vector<double>& horizons,
                                             double margin = 1e-3);

// Partial values of a nonnegative delta integral over a horizon schedule.
// converged: the last relative increment fell below 1e-6 (bound = last partial).
// diverging: the last per-time growth rate is still at least half the first,
// the signature of an integrand that is not dying off.
struct BoundEstimate {
    std::vector<double> horizons;
    std::vector<double> partials;
    bool converged = false;
    bool diverging = false;
    double bound = 0;  // last partial; the estimate of the limit when converged
    double tail = 0;   // last relative increment

    StabilityVerdict verdict() const {
        if (converged)
            return StabilityVerdict::Stable;
        if (diverging)
            return StabilityVerdict::Unstable;
        return StabilityVerdict::Undetermined;
    }
};

// Partials of the transition-norm integral over [t0, T_i). A finite limit
// certifies uniform exponential stability in the gamma*e_{-lambda} bound sense;
// time-varying systems are accepted. Horizons must be grid nodes.
BoundEstimate exp_stable_integral(const LinearSystem& sys, const TimeScaleGrid& grid,
                                  const std::vector<double>& horizons);

// Residue functionals f_0..f_jmax at time t (integrals start at the grid
// origin): f_0 = 1, f_1 = int 1/(1+mu*lambda), f_2 = f_1^2 - int mu/(1+mu*lambda)^2,
// f_3 = f_1^3 - 3 f_1 int mu/(1+mu*lambda)^2 + 2 int mu^2/(1+mu*lambda)^3.
// No closed form is available past jmax = 3; larger orders are rejected.
std::vector<std::complex<double>> f_sequence(const TimeScaleGrid& grid,
                                             std::complex<double> lambda, double t, int jmax);

// Matrix exponential assembled from residues: e_A(t, t0) = sum over eigenvalues
// lambda_k and orders j of W_kj * f_{j-1}(mu, lambda_k) / (j-1)! * e_{lambda_k}(t, t0).
// Requires every multiplicity <= 4 (f_j stops at j = 3).
Eigen::MatrixXd spectral_exponential(const PartialFractions& pf, const TimeScaleGrid& grid,
                                     double t);
Eigen::MatrixXd spectral_exponential(const Eigen::MatrixXd& A, const TimeScaleGrid& grid,
                                     double t);

// Running sup over (tau, t) of int_tau^t ||C(t) Phi(t, sigma(s)) B(s)|| ds,
// reported per horizon. The integrand is nonnegative, so tau = t0 dominates and
// the sup is taken over the endpoint t alone. The t-sweep covers every node up
// to the last horizon when the window has at most 2000 nodes; beyond that it is
// sampled on a stride with the running worst case refined locally.
BoundEstimate bibo_tv_integral(const LinearSystem& sys, const TimeScaleGrid& grid,
                               const std::vector<double>& horizons);

// Two-route BIBO test for constant (A, B, C): the impulse-response integral
// int ||C e_A(t,t0) B|| dt and the poles of the exactly reduced transfer
// function tested against the stability region. The routes agree for minimal
// realizations; when the realization is not minimal the pole route may lose
// cancelled unstable modes, so the integral route is authoritative and `note`
// carries the warning.
struct BiboVerdict {
    BoundEstimate integral;
    StabilityVerdict verdict = StabilityVerdict::Undetermined;  // integral route
    std::vector<std::complex<double>> poles;                    // after exact reduction
    std::vector<StabilityRegionQuery> pole_queries;
    RegionVerdict pole_verdict = RegionVerdict::Marginal;
    bool minimal = false;
    std::string note;
};

BiboVerdict bibo_ti(const RatMat& A, const RatMat& B, const RatMat& C, const TimeScaleGrid& grid,
                    const std::vector<double>& horizons, double margin = 1e-3);
BiboVerdict bibo_ti(const LinearSystem& sys, const TimeScaleGrid& grid,
                    const std::vector<double>& horizons, double margin = 1e-3);
BiboVerdict bibo_ti(const RationalMatrix& G, const TimeScaleGrid& grid,
                    const std::vector<double>& horizons, double margin = 1e-3);

} // namespace tsc
