#include "tscontrol/stability.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>

#include "tscontrol/dynamics.hpp"
#include "tscontrol/errors.hpp"
#include "tscontrol/poly.hpp"

namespace tsc {

namespace {

std::vector<std::size_t> horizon_indices(const TimeScaleGrid& grid,
                                         const std::vector<double>& horizons) {
    if (horizons.empty())
        throw InputError("at least one horizon is required");
    std::vector<std::size_t> idx;
    idx.reserve(horizons.size());
    double prev = grid.t_min();
    for (double T : horizons) {
        if (!(T > prev))
            throw InputError("horizons must be strictly increasing and exceed the grid origin");
        idx.push_back(grid.index_of(T));
        prev = T;
    }
    return idx;
}

// Accumulates edge contributions of a node-sampled integrand from the grid
// origin, recording the partial integral at each horizon node. g(i) is called
// once per node index in ascending order, so it may carry propagation state.
template <class G>
std::vector<double> walk_partials(const TimeScaleGrid& grid, const std::vector<std::size_t>& hidx,
                                  G&& g) {
    std::vector<double> partials;
    partials.reserve(hidx.size());
    const std::size_t imax = hidx.back();
    double acc = 0;
    std::size_t next = 0;
    double gi = g(std::size_t{0});
    for (std::size_t i = 0; i < imax; ++i) {
        const auto& p = grid.point(i);
        double gn = g(i + 1);
        if (p.step == StepKind::Scattered)
            acc += p.gap * gi;
        else if (p.step == StepKind::Dense)
            acc += p.gap / 2 * (gi + gn);
        gi = gn;
        while (next < hidx.size() && hidx[next] == i + 1) {
            partials.push_back(acc);
            ++next;
        }
    }
    return partials;
}

// converged: last relative increment < 1e-6. diverging: the per-time growth
// rate never dropped to half its initial value (or a partial overflowed).
void classify(BoundEstimate& est) {
    const auto& P = est.partials;
    const auto& T = est.horizons;
    est.bound = P.back();
    for (double v : P) {
        if (!std::isfinite(v)) {
            est.diverging = true;
            est.tail = std::numeric_limits<double>::infinity();
            return;
        }
    }
    if (P.size() < 2)
        return;
    double inc = P.back() - P[P.size() - 2];
    est.tail = inc / std::max(P.back(), 1e-300);
    est.converged = est.tail < 1e-6;
    if (!est.converged && P.size() >= 3) {
        // Divergence needs the marginal rate to have stopped decaying: a slowly
        // convergent integral still shows strictly shrinking rates, while any
        // divergent one (linear or worse) holds or grows them.
        double r0 = (P[1] - P[0]) / (T[1] - T[0]);
        double rprev = (P[P.size() - 2] - P[P.size() - 3]) / (T[T.size() - 2] - T[T.size() - 3]);
        double rlast = inc / (T.back() - T[T.size() - 2]);
        est.diverging = r0 > 0 && rlast >= 0.5 * r0 && rlast >= 0.999 * rprev;
    }
}

// Shared core of the norm-integral routes: partials of int w(Phi(t, t0)) dt.
template <class W>
BoundEstimate norm_integral(const LinearSystem& sys, const TimeScaleGrid& grid,
                            const std::vector<double>& horizons, W&& weight) {
    auto hidx = horizon_indices(grid, horizons);
    const auto n = sys.n();
    auto ode = [&](double tau, const Eigen::MatrixXd& Y) -> Eigen::MatrixXd {
        return sys.A(tau) * Y;
    };
    Eigen::MatrixXd X = Eigen::MatrixXd::Identity(n, n);
    std::size_t cur = 0;
    auto g = [&](std::size_t i) -> double {
        for (; cur < i; ++cur) {
            const auto& p = grid.point(cur);
            if (p.step == StepKind::Scattered)
                X = (Eigen::MatrixXd::Identity(n, n) + p.gap * sys.A(p.t)) * X;
            else
                X = detail::rk4_step(ode, p.t, p.gap, X);
        }
        return weight(X);
    };
    BoundEstimate est;
    est.horizons = horizons;
    est.partials = walk_partials(grid, hidx, g);
    classify(est);
    return est;
}

RegionVerdict combine(const std::vector<StabilityRegionQuery>& queries) {
    RegionVerdict out = RegionVerdict::Inside;
    for (const auto& q : queries) {
        if (q.verdict == RegionVerdict::Outside)
            return RegionVerdict::Outside;
        if (q.verdict != RegionVerdict::Inside)
            out = RegionVerdict::Marginal;
    }
    return out;
}

std::vector<std::complex<double>> dedupe(const std::vector<std::complex<double>>& vals,
                                         double tol) {
    std::vector<std::complex<double>> reps;
    for (const auto& v : vals) {
        bool seen = false;
        for (const auto& r : reps)
            if (std::abs(v - r) <= tol) {
                seen = true;
                break;
            }
        if (!seen)
            reps.push_back(v);
    }
    return reps;
}

} // namespace

std::string to_string(RegionVerdict v) {
    switch (v) {
    case RegionVerdict::Inside:
        return "inside";
    case RegionVerdict::Outside:
        return "outside";
    default:
        return "marginal";
    }
}

std::string to_string(StabilityVerdict v) {
    switch (v) {
    case StabilityVerdict::Stable:
        return "stable";
    case StabilityVerdict::Unstable:
        return "unstable";
    default:
        return "undetermined";
    }
}

double region_integrand(double mu, std::complex<double> lambda) {
    if (mu == 0)
        return lambda.real();
    double a = std::abs(1.0 + mu * lambda);
    if (a < 1e-300)
        throw PreconditionError("region integrand hit the regressivity boundary 1 + mu*lambda = 0");
    return std::log(a) / mu;
}

StabilityRegionQuery in_stability_region(const TimeScaleGrid& grid, std::complex<double> lambda,
                                         const std::vector<double>& horizons, double margin) {
    if (!(margin > 0))
        throw InputError("the decision margin must be positive");
    StabilityRegionQuery q;
    q.lambda = lambda;
    q.horizons = horizons;
    q.margin = margin;
    auto hidx = horizon_indices(grid, horizons);
    const double t0 = grid.t_min();

    // The integrand depends on the node only through its graininess, and dense
    // runs carry the mu = 0 limit value even when the run ends in a jump.
    double acc = 0;
    std::size_t next = 0;
    try {
        const double dense_value = region_integrand(0, lambda);
        for (std::size_t i = 0; i < hidx.back(); ++i) {
            const auto& p = grid.point(i);
            if (p.step == StepKind::Scattered)
                acc += p.gap * region_integrand(p.gap, lambda);
            else if (p.step == StepKind::Dense)
                acc += p.gap * dense_value;
            while (next < hidx.size() && hidx[next] == i + 1) {
                q.averages.push_back(acc / (grid.point(i + 1).t - t0));
                ++next;
            }
        }
    } catch (const PreconditionError&) {
        q.regressivity_boundary = true;
        q.averages.clear();
        q.verdict = RegionVerdict::Marginal;
        return q;
    }

    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = q.averages.size() / 2; i < q.averages.size(); ++i)
        m = std::max(m, q.averages[i]);
    q.decisive = m;
    if (m < -margin)
        q.verdict = RegionVerdict::Inside;
    else if (m > margin)
        q.verdict = RegionVerdict::Outside;
    else
        q.verdict = RegionVerdict::Marginal;
    return q;
}

SpectrumStabilityVerdict exp_stable_spectrum(const Eigen::MatrixXd& A, const TimeScaleGrid& grid,
                                             const std::vector<double>& horizons, double margin) {
    if (A.rows() != A.cols())
        throw InputError("exp_stable_spectrum: A must be square");
    SpectrumStabilityVerdict out;
    if (A.rows() == 0) {
        out.verdict = RegionVerdict::Inside;
        return out;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(A);
    if (es.info() != Eigen::Success)
        throw PreconditionError("eigenvalue computation failed");
    std::vector<std::complex<double>> eigs(es.eigenvalues().data(),
                                           es.eigenvalues().data() + A.rows());
    double tol = 1e-8 * std::max(1.0, A.norm());
    for (const auto& lambda : dedupe(eigs, tol))
        out.eigenvalues.push_back(in_stability_region(grid, lambda, horizons, margin));
    out.verdict = combine(out.eigenvalues);
    return out;
}

BoundEstimate exp_stable_integral(const LinearSystem& sys, const TimeScaleGrid& grid,
                                  const std::vector<double>& horizons) {
    return norm_integral(sys, grid, horizons,
                         [](const Eigen::MatrixXd& X) { return detail::spectral_norm(X); });
}

std::vector<std::complex<double>> f_sequence(const TimeScaleGrid& grid,
                                             std::complex<double> lambda, double t, int jmax) {
    if (jmax < 0 || jmax > 3)
        throw InputError("f_sequence: no closed form is available past f_3");
    const std::size_t it = grid.index_of(t);
    std::complex<double> I1 = 0, I2 = 0, I3 = 0;
    for (std::size_t i = 0; i < it; ++i) {
        const auto& p = grid.point(i);
        if (p.step == StepKind::Scattered) {
            std::complex<double> w = 1.0 + p.gap * lambda;
            if (std::abs(w) < 1e-300)
                throw PreconditionError("f_sequence: 1 + mu*lambda vanishes on the grid");
            I1 += p.gap / w;
            I2 += p.gap * p.gap / (w * w);
            I3 += p.gap * p.gap * p.gap / (w * w * w);
        } else if (p.step == StepKind::Dense) {
            I1 += p.gap; // dense-limit integrands: 1, 0, 0
        }
    }
    std::vector<std::complex<double>> f = {1.0, I1, I1 * I1 - I2,
                                           I1 * I1 * I1 - 3.0 * I2 * I1 + 2.0 * I3};
    f.resize(static_cast<std::size_t>(jmax) + 1);
    return f;
}

Eigen::MatrixXd spectral_exponential(const PartialFractions& pf, const TimeScaleGrid& grid,
                                     double t) {
    if (pf.terms.empty())
        return Eigen::MatrixXd::Zero(0, 0);
    const auto n = pf.terms.front().W.front().rows();
    const double t0 = grid.t_min();
    static const double factorial[4] = {1, 1, 2, 6};
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& term : pf.terms) {
        if (term.psi > 4)
            throw PreconditionError("spectral exponential needs eigenvalue multiplicities <= 4 "
                                    "(the residue sequence stops at f_3)");
        std::complex<double> e = scalar_exp(grid, term.lambda, t, t0);
        auto f = f_sequence(grid, term.lambda, t, term.psi - 1);
        for (int j = 1; j <= term.psi; ++j)
            acc += term.W[static_cast<std::size_t>(j - 1)] * ((f[static_cast<std::size_t>(j - 1)] / factorial[j - 1]) * e);
    }
    return acc.real();
}

Eigen::MatrixXd spectral_exponential(const Eigen::MatrixXd& A, const TimeScaleGrid& grid,
                                     double t) {
    return spectral_exponential(partial_fractions(A), grid, t);
}

BoundEstimate bibo_tv_integral(const LinearSystem& sys, const TimeScaleGrid& grid,
                               const std::vector<double>& horizons) {
    auto hidx = horizon_indices(grid, horizons);
    const std::size_t imax = hidx.back();
    const std::size_t N = imax + 1;
    const auto n = sys.n();

    // rho(t) = int_{t0}^{t} ||C(t) Phi(t, sigma(s)) B(s)|| ds for one endpoint,
    // with Phi(t, s) propagated backward in s. Multiplications only: factoring
    // Phi through the origin would invert transition matrices whose condition
    // number grows exponentially with the window.
    auto back = [&](double tau, const Eigen::MatrixXd& Y) -> Eigen::MatrixXd {
        return -Y * sys.A(tau);
    };
    auto rho_at = [&](std::size_t it) -> double {
        Eigen::MatrixXd Ct = sys.C(grid.point(it).t);
        Eigen::MatrixXd R = Eigen::MatrixXd::Identity(n, n); // Phi(t, s) at s = t
        double acc = 0;
        double gprev = 0; // kernel at the dense right endpoint of the edge below
        for (std::size_t i = it; i-- > 0;) {
            const auto& p = grid.point(i);
            if (p.step == StepKind::Scattered) {
                // the atom sees the post-jump kernel Phi(t, sigma(s)) = Phi(t, t_{i+1})
                acc += p.gap * detail::spectral_norm(Ct * R * sys.B(p.t));
                R = R * (Eigen::MatrixXd::Identity(n, n) + p.gap * sys.A(p.t));
            } else {
                double gright = (i + 1 == it)
                                    ? detail::spectral_norm(Ct * R * sys.B(grid.point(it).t))
                                    : gprev;
                R = detail::rk4_step(back, p.t + p.gap, -p.gap, R);
                double gleft = detail::spectral_norm(Ct * R * sys.B(p.t));
                acc += p.gap / 2 * (gleft + gright);
                gprev = gleft;
                continue;
            }
            gprev = detail::spectral_norm(Ct * R * sys.B(p.t));
        }
        return acc;
    };

    // Endpoint sweep: every node when the window is small, else a stride
    // sample (horizon nodes always included) refined around the worst case.
    std::map<std::size_t, double> value;
    if (N <= 2000) {
        for (std::size_t it = 1; it <= imax; ++it)
            value[it] = rho_at(it);
    } else {
        const std::size_t stride = (N + 999) / 1000;
        for (std::size_t it = 1; it <= imax; it += stride)
            value[it] = rho_at(it);
        value[imax] = rho_at(imax);
        for (std::size_t h : hidx)
            if (!value.count(h))
                value[h] = rho_at(h);
        auto worst = std::max_element(value.begin(), value.end(),
                                      [](const auto& a, const auto& b) { return a.second < b.second; });
        std::size_t lo = worst->first > stride ? worst->first - stride : 1;
        std::size_t hi = std::min(imax, worst->first + stride);
        for (std::size_t it = lo; it <= hi; ++it)
            if (!value.count(it))
                value[it] = rho_at(it);
    }

    BoundEstimate est;
    est.horizons = horizons;
    double sup = 0;
    auto entry = value.begin();
    for (std::size_t h : hidx) {
        for (; entry != value.end() && entry->first <= h; ++entry)
            sup = std::max(sup, entry->second);
        est.partials.push_back(sup);
    }
    classify(est);
    return est;
}

BiboVerdict bibo_ti(const RatMat& A, const RatMat& B, const RatMat& C, const TimeScaleGrid& grid,
                    const std::vector<double>& horizons, double margin) {
    if (A.rows() != A.cols() || B.rows() != A.rows() || C.cols() != A.rows())
        throw InputError("bibo_ti: dimension mismatch between A, B, C");
    BiboVerdict out;

    Eigen::MatrixXd Ad = A.to_double(), Bd = B.to_double(), Cd = C.to_double();
    auto sys = LinearSystem::constant(Ad, Bd, Cd);
    out.integral = norm_integral(sys, grid, horizons, [&](const Eigen::MatrixXd& X) {
        return detail::spectral_norm(Cd * X * Bd);
    });
    out.verdict = out.integral.verdict();

    RationalMatrix G = transfer_function(A, B, C);
    std::vector<std::complex<double>> roots;
    for (int i = 0; i < G.rows(); ++i)
        for (int j = 0; j < G.cols(); ++j) {
            const RationalFn& g = G(i, j);
            if (g.num().degree() < 0)
                continue;
            auto r = numeric_roots(g.den());
            roots.insert(roots.end(), r.begin(), r.end());
        }
    double scale = 1.0;
    for (const auto& r : roots)
        scale = std::max(scale, std::abs(r));
    out.poles = dedupe(roots, 1e-8 * scale);
    for (const auto& pole : out.poles)
        out.pole_queries.push_back(in_stability_region(grid, pole, horizons, margin));
    out.pole_verdict = combine(out.pole_queries);

    Realization r;
    r.A = A;
    r.B = B;
    r.C = C;
    out.minimal = is_minimal(r).minimal;
    if (!out.minimal)
        out.note = "realization is not minimal: cancelled modes are invisible to the pole "
                   "locations, so the impulse-response integral is the authoritative route";
    return out;
}

BiboVerdict bibo_ti(const LinearSystem& sys, const TimeScaleGrid& grid,
                    const std::vector<double>& horizons, double margin) {
    if (!sys.time_invariant())
        throw InputError("bibo_ti needs a time-invariant system; use bibo_tv_integral instead");
    return bibo_ti(RatMat::from_double(sys.A0()), RatMat::from_double(sys.B0()),
                   RatMat::from_double(sys.C0()), grid, horizons, margin);
}

BiboVerdict bibo_ti(const RationalMatrix& G, const TimeScaleGrid& grid,
                    const std::vector<double>& horizons, double margin) {
    Realization r = companion_realization(G);
    return bibo_ti(r.A, r.B, r.C, grid, horizons, margin);
}

} // namespace tsc
