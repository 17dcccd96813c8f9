#include "tscontrol/realization.hpp"
#include "tscontrol/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>

namespace tsc {

namespace {

// Faddeev-LeVerrier: char poly coefficients (ascending) and the adjugate
// series adj(zI - A) = sum_k Bk z^{n-1-k}.
void faddeev_leverrier(const RatMat& A, std::vector<Rational>& coeffs,
                       std::vector<RatMat>& adj) {
    const int n = A.rows();
    coeffs.assign(static_cast<std::size_t>(n) + 1, Rational(0));
    coeffs[static_cast<std::size_t>(n)] = 1;
    adj.clear();
    RatMat Bk = RatMat::identity(n);
    for (int k = 1; k <= n; ++k) {
        adj.push_back(Bk);
        RatMat M = A * Bk;
        Rational tr = 0;
        for (int i = 0; i < n; ++i)
            tr += M(i, i);
        Rational c = -tr / k;
        coeffs[static_cast<std::size_t>(n - k)] = c;
        Bk = M + RatMat::identity(n) * c;
    }
    // Cayley-Hamilton: the recursion must close
    if (n > 0 && !Bk.is_zero())
        throw PreconditionError("characteristic polynomial recursion failed to close");
}

} // namespace

Poly characteristic_polynomial(const RatMat& A) {
    if (A.rows() != A.cols())
        throw InputError("characteristic polynomial of a non-square matrix");
    std::vector<Rational> coeffs;
    std::vector<RatMat> adj;
    faddeev_leverrier(A, coeffs, adj);
    return Poly(std::move(coeffs));
}

RationalMatrix transfer_function(const RatMat& A, const RatMat& B, const RatMat& C) {
    const int n = A.rows();
    if (A.cols() != n || B.rows() != n || C.cols() != n)
        throw InputError("transfer function: dimension mismatch");
    const int m = B.cols(), p = C.rows();
    RationalMatrix G(p, m);
    if (n == 0)
        return G;

    std::vector<Rational> coeffs;
    std::vector<RatMat> adj;
    faddeev_leverrier(A, coeffs, adj);
    Poly den{coeffs};

    // numerators: coefficient of z^e in C adj(zI-A) B is C adj[n-1-e] B
    std::vector<RatMat> num(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        num[static_cast<std::size_t>(k)] = (C * adj[static_cast<std::size_t>(k)]) * B;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < m; ++j) {
            std::vector<Rational> nc(static_cast<std::size_t>(n));
            for (int e = 0; e < n; ++e)
                nc[static_cast<std::size_t>(e)] = num[static_cast<std::size_t>(n - 1 - e)](i, j);
            G(i, j) = RationalFn(Poly(std::move(nc)), den);
        }
    return G;
}

RationalMatrix transfer_function(const Realization& r) {
    return transfer_function(r.A, r.B, r.C);
}

Realization companion_realization(const RationalMatrix& G) {
    const int p = G.rows(), q = G.cols();
    if (p == 0 || q == 0)
        throw InputError("empty transfer matrix");
    if (!G.is_strictly_proper())
        throw InputError("companion realization requires strictly-proper entries");

    Poly d = Poly::constant(1);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < q; ++j)
            if (!G(i, j).is_zero())
                d = lcm(d, G(i, j).den());
    const int r = d.degree();

    Realization out;
    out.source = Realization::Source::Companion;
    if (r == 0) {
        out.A = RatMat(0, 0);
        out.B = RatMat(0, q);
        out.C = RatMat(p, 0);
        out.certified = transfer_function(out) == G;
        return out;
    }

    // d(z) G(z) is a polynomial matrix of degree < r
    std::vector<RatMat> P(static_cast<std::size_t>(r), RatMat(p, q));
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < q; ++j) {
            const RationalFn& g = G(i, j);
            if (g.is_zero())
                continue;
            auto [quo, rem] = d.divmod(g.den());
            if (!rem.is_zero())
                throw PreconditionError("denominator does not divide the common multiple");
            Poly ncoef = g.num() * quo;
            for (int e = 0; e <= ncoef.degree(); ++e)
                P[static_cast<std::size_t>(e)](i, j) = ncoef.coeff(e);
        }

    const int nq = q * r;
    out.A = RatMat::zero(nq, nq);
    for (int blk = 0; blk + 1 < r; ++blk)
        for (int e = 0; e < q; ++e)
            out.A(blk * q + e, (blk + 1) * q + e) = 1;
    for (int blk = 0; blk < r; ++blk) {
        Rational di = -d.coeff(blk);
        for (int e = 0; e < q; ++e)
            out.A((r - 1) * q + e, blk * q + e) = di;
    }
    out.B = RatMat::zero(nq, q);
    for (int e = 0; e < q; ++e)
        out.B((r - 1) * q + e, e) = 1;
    out.C = RatMat(p, nq);
    for (int blk = 0; blk < r; ++blk)
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < q; ++j)
                out.C(i, blk * q + j) = P[static_cast<std::size_t>(blk)](i, j);

    out.certified = transfer_function(out) == G;
    return out;
}

MinimalityVerdict is_minimal(const Realization& r) {
    MinimalityVerdict v;
    v.controllability = kalman_controllability_exact(r.A, r.B);
    v.observability = kalman_observability_exact(r.A, r.C);
    v.minimal = v.controllability.pass && v.observability.pass;
    return v;
}

TvMinimalityVerdict is_minimal_tv(const LinearSystem& sys, const TimeScaleGrid& grid,
                                  double t0, double tf) {
    TvMinimalityVerdict v;
    v.controllability = controllability_gramian(sys, grid, t0, tf);
    v.observability = observability_gramian(sys, grid, t0, tf);
    v.minimal = v.controllability.invertible && v.observability.invertible;
    return v;
}

LinearSystem realize_from_factors(int nhat, int m, int p, const MatrixFn& H, const MatrixFn& F) {
    if (nhat < 1 || m < 1 || p < 1)
        throw InputError("factored realization needs positive dimensions");
    auto A = [nhat](double) { return Eigen::MatrixXd::Zero(nhat, nhat); };
    auto B = [F, nhat, m](double t) {
        Eigen::MatrixXd f = F(t);
        if (f.rows() != nhat || f.cols() != m)
            throw InputError("factor F has wrong dimensions");
        return f;
    };
    auto C = [H, nhat, p](double t) {
        Eigen::MatrixXd h = H(t);
        if (h.rows() != p || h.cols() != nhat)
            throw InputError("factor H has wrong dimensions");
        return h;
    };
    return LinearSystem::varying(nhat, m, p, A, B, C);
}

namespace {

using Cx = std::complex<double>;
using PolyC = std::vector<Cx>; // ascending coefficients

// divide ascending-coefficient poly by (z - lambda); remainder dropped
PolyC deflate(const PolyC& poly, Cx lambda) {
    const std::size_t n = poly.size();
    if (n < 2)
        throw PreconditionError("deflating a constant polynomial");
    PolyC q(n - 1);
    Cx carry = poly[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        q[i] = carry;
        carry = poly[i] + lambda * carry;
    }
    return q;
}

// coefficients of poly(lambda + w) up to w^{order-1}
PolyC taylor_shift(const PolyC& poly, Cx lambda, int order) {
    PolyC out(static_cast<std::size_t>(order), Cx(0));
    std::vector<Cx> powers(poly.size(), Cx(1));
    for (std::size_t r = 1; r < powers.size(); ++r)
        powers[r] = powers[r - 1] * lambda;
    for (std::size_t e = 0; e < poly.size(); ++e) {
        if (poly[e] == Cx(0))
            continue;
        // binomial expansion of (lambda + w)^e truncated at w^{order-1}
        double binom = 1.0;
        for (std::size_t i = 0; i < static_cast<std::size_t>(order) && i <= e; ++i) {
            out[i] += poly[e] * powers[e - i] * binom;
            binom = binom * static_cast<double>(e - i) / static_cast<double>(i + 1);
        }
    }
    return out;
}

// residue matrices of adj(z)/q(z) at lambda with multiplicity psi
std::vector<Eigen::MatrixXcd> residue_series(const std::vector<Eigen::MatrixXcd>& adj,
                                             const PolyC& charpoly, Cx lambda, int psi) {
    const int n = static_cast<int>(adj.empty() ? 0 : adj[0].rows());
    PolyC q = charpoly;
    for (int i = 0; i < psi; ++i)
        q = deflate(q, lambda);

    PolyC qs = taylor_shift(q, lambda, psi);
    if (qs[0] == Cx(0))
        throw PreconditionError("eigenvalue multiplicity is inconsistent");
    // series inverse of qs
    PolyC inv(static_cast<std::size_t>(psi));
    inv[0] = Cx(1) / qs[0];
    for (int k = 1; k < psi; ++k) {
        Cx acc(0);
        for (int i = 1; i <= k; ++i)
            acc += (static_cast<std::size_t>(i) < qs.size() ? qs[static_cast<std::size_t>(i)]
                                                            : Cx(0)) *
                   inv[static_cast<std::size_t>(k - i)];
        inv[static_cast<std::size_t>(k)] = -acc / qs[0];
    }

    // shift the adjugate entrywise: adj(z) = sum_k adj[k] z^{n-1-k}
    std::vector<Eigen::MatrixXcd> ashift(static_cast<std::size_t>(psi),
                                         Eigen::MatrixXcd::Zero(n, n));
    const int deg = static_cast<int>(adj.size()) - 1; // n-1
    for (int e = 0; e <= deg; ++e) {
        const Eigen::MatrixXcd& coef = adj[static_cast<std::size_t>(deg - e)];
        PolyC mono(static_cast<std::size_t>(e) + 1, Cx(0));
        mono[static_cast<std::size_t>(e)] = Cx(1);
        PolyC sh = taylor_shift(mono, lambda, psi);
        for (int i = 0; i < psi; ++i)
            ashift[static_cast<std::size_t>(i)] += coef * sh[static_cast<std::size_t>(i)];
    }

    // g = ashift * inv, truncated; W_j = g_{psi-j}
    std::vector<Eigen::MatrixXcd> W(static_cast<std::size_t>(psi));
    for (int j = 1; j <= psi; ++j) {
        Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
        int order = psi - j;
        for (int a = 0; a <= order; ++a)
            g += ashift[static_cast<std::size_t>(a)] * inv[static_cast<std::size_t>(order - a)];
        W[static_cast<std::size_t>(j - 1)] = g;
    }
    return W;
}

struct Cluster {
    Cx lambda;
    int count;
};

std::vector<Cluster> cluster_eigenvalues(const Eigen::VectorXcd& eigs, double tol,
                                         bool& ambiguous) {
    std::vector<Cluster> cl;
    for (int i = 0; i < eigs.size(); ++i) {
        Cx lam = eigs(i);
        bool placed = false;
        for (auto& c : cl)
            if (std::abs(c.lambda - lam) <= tol) {
                c.lambda = (c.lambda * static_cast<double>(c.count) + lam) /
                           static_cast<double>(c.count + 1);
                ++c.count;
                placed = true;
                break;
            }
        if (!placed)
            cl.push_back({lam, 1});
    }
    ambiguous = false;
    for (std::size_t a = 0; a < cl.size(); ++a)
        for (std::size_t b = a + 1; b < cl.size(); ++b)
            if (std::abs(cl[a].lambda - cl[b].lambda) < 10 * tol)
                ambiguous = true;
    return cl;
}

} // namespace

PartialFractions partial_fractions(const RatMat& A) {
    const int n = A.rows();
    if (A.cols() != n)
        throw InputError("partial fractions of a non-square matrix");
    std::vector<Rational> coeffs;
    std::vector<RatMat> adjExact;
    faddeev_leverrier(A, coeffs, adjExact);

    PartialFractions pf;
    pf.char_poly = Poly(coeffs);

    std::vector<Eigen::MatrixXcd> adj;
    for (const auto& m : adjExact)
        adj.push_back(m.to_double().cast<Cx>());
    PolyC cp;
    for (const Rational& c : pf.char_poly.coeffs())
        cp.push_back(Cx(static_cast<double>(c), 0.0));

    auto rr = rational_roots(pf.char_poly);
    int found = 0;
    for (auto& [root, mult] : rr.roots)
        found += mult;
    if (rr.complete && found == n) {
        pf.exact_eigenvalues = true;
        for (auto& [root, mult] : rr.roots) {
            PartialFractionTerm term;
            term.lambda_exact = root;
            term.lambda = Cx(static_cast<double>(root), 0.0);
            term.psi = mult;
            term.W = residue_series(adj, cp, term.lambda, term.psi);
            pf.terms.push_back(std::move(term));
        }
        return pf;
    }

    Eigen::EigenSolver<Eigen::MatrixXd> es(A.to_double());
    if (es.info() != Eigen::Success)
        throw PreconditionError("eigensolver failed");
    double tol = 1e-8 * std::max(1.0, A.to_double().norm());
    auto clusters = cluster_eigenvalues(es.eigenvalues(), tol, pf.clustering_ambiguous);
    for (const auto& c : clusters) {
        PartialFractionTerm term;
        term.lambda = c.lambda;
        term.psi = c.count;
        term.W = residue_series(adj, cp, term.lambda, term.psi);
        pf.terms.push_back(std::move(term));
    }
    return pf;
}

PartialFractions partial_fractions(const Eigen::MatrixXd& A) {
    const int n = static_cast<int>(A.rows());
    if (A.cols() != n)
        throw InputError("partial fractions of a non-square matrix");

    PartialFractions pf;
    // double-precision Faddeev-LeVerrier; exact factorization is not useful
    // for float inputs, whose dyadic coefficients never have rational roots
    std::vector<Eigen::MatrixXcd> adj;
    PolyC cp(static_cast<std::size_t>(n) + 1, Cx(0));
    cp[static_cast<std::size_t>(n)] = Cx(1);
    std::vector<Rational> rc(static_cast<std::size_t>(n) + 1);
    rc[static_cast<std::size_t>(n)] = 1;
    Eigen::MatrixXd Bk = Eigen::MatrixXd::Identity(n, n);
    for (int k = 1; k <= n; ++k) {
        adj.push_back(Bk.cast<Cx>());
        Eigen::MatrixXd M = A * Bk;
        double c = -M.trace() / k;
        cp[static_cast<std::size_t>(n - k)] = Cx(c);
        rc[static_cast<std::size_t>(n - k)] = rational_from_double(c);
        Bk = M + c * Eigen::MatrixXd::Identity(n, n);
    }
    pf.char_poly = Poly(std::move(rc));

    Eigen::EigenSolver<Eigen::MatrixXd> es(A);
    if (es.info() != Eigen::Success)
        throw PreconditionError("eigensolver failed");
    double tol = 1e-8 * std::max(1.0, A.norm());
    auto clusters = cluster_eigenvalues(es.eigenvalues(), tol, pf.clustering_ambiguous);
    for (const auto& c : clusters) {
        PartialFractionTerm term;
        term.lambda = c.lambda;
        term.psi = c.count;
        term.W = residue_series(adj, cp, term.lambda, term.psi);
        pf.terms.push_back(std::move(term));
    }
    return pf;
}

} // namespace tsc
