#include "tscontrol/report.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "tscontrol/dynamics.hpp"
#include "tscontrol/errors.hpp"
#include "tscontrol/gramian.hpp"
#include "tscontrol/ranktests.hpp"
#include "tscontrol/realization.hpp"
#include "tscontrol/stability.hpp"

namespace tsc {

namespace {

Json jnum(double v) {
    if (std::isfinite(v))
        return v;
    if (std::isnan(v))
        return "nan";
    return v > 0 ? "inf" : "-inf";
}

Json jcomplex(std::complex<double> z) { return Json::array({jnum(z.real()), jnum(z.imag())}); }

Json jlist(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v)
        a.push_back(jnum(x));
    return a;
}

Json jvec(const Eigen::VectorXd& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        a.push_back(jnum(v[i]));
    return a;
}

Json jmat(const Eigen::MatrixXd& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(jnum(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json jratmat(const RatMat& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j)
            row.push_back(to_string(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json jregion(const StabilityRegionQuery& q) {
    Json j;
    j["eigenvalue"] = jcomplex(q.lambda);
    j["verdict"] = to_string(q.verdict);
    j["decisive_average"] = jnum(q.decisive);
    j["margin"] = jnum(q.margin);
    j["regressivity_boundary"] = q.regressivity_boundary;
    j["averages"] = jlist(q.averages);
    return j;
}

Json jbound(const BoundEstimate& b) {
    Json j;
    j["verdict"] = to_string(b.verdict());
    j["horizons"] = jlist(b.horizons);
    j["partials"] = jlist(b.partials);
    j["converged"] = b.converged;
    j["diverging"] = b.diverging;
    j["relative_tail"] = jnum(b.tail);
    if (b.converged)
        j["bound"] = jnum(b.bound);
    return j;
}

Json jrank(const RankVerdict& v) {
    Json j;
    j["rank"] = v.rank;
    j["full_rank"] = v.pass;
    j["tolerance"] = jnum(v.tol);
    j["singular_values"] = jvec(v.singular_values);
    return j;
}

Json jrank_exact(const ExactRankVerdict& v) {
    Json j;
    j["arithmetic"] = "exact-rational";
    j["rank"] = v.rank;
    j["full_rank"] = v.pass;
    j["matrix"] = jratmat(v.matrix);
    return j;
}

Json jgramian(const GramianResult& g) {
    Json j;
    j["window"] = Json::array({jnum(g.t0), jnum(g.tf)});
    j["invertible"] = g.invertible;
    j["eig_min"] = jnum(g.eig_min);
    j["eig_max"] = jnum(g.eig_max);
    j["threshold"] = jnum(g.tau_pd);
    j["matrix"] = jmat(g.matrix);
    return j;
}

Json jpbh(const PbhVerdict& v) {
    Json j;
    j["pass"] = v.pass;
    j["rank_tolerance"] = jnum(v.rank_tol);
    Json tests = Json::array();
    for (const auto& t : v.tests) {
        Json tj;
        tj["eigenvalue"] = jcomplex(t.lambda);
        tj["rank"] = t.rank;
        tj["pass"] = t.pass;
        tests.push_back(std::move(tj));
    }
    j["tests"] = std::move(tests);
    return j;
}

Json jtvrank(const TvRankVerdict& v, int q) {
    Json j;
    j["sufficient_pass"] = v.sufficient_pass;
    if (v.sufficient_pass)
        j["witness_t"] = jnum(v.witness_t);
    j["best_rank"] = v.best_rank;
    j["depth"] = q;
    j["tolerance"] = jnum(v.tol);
    j["analytic_derivatives"] = v.used_hooks;
    if (!v.note.empty())
        j["note"] = v.note;
    return j;
}

Json jdecomposition(const Decomposition& d) {
    Json j;
    j["subspace_dimension"] = d.q;
    j["certified"] = d.certified;
    j["zero_block_norm"] = jnum(d.zero_block_norm);
    j["tolerance"] = jnum(d.tol);
    return j;
}

std::string poly_csv(const Poly& p) {
    if (p.is_zero())
        return "0";
    std::string out;
    for (std::size_t k = 0; k < p.coeffs().size(); ++k)
        out += (k ? "," : "") + to_string(p.coeffs()[k]);
    return out;
}

std::string entry_text(const RationalFn& f) { return poly_csv(f.num()) + " / " + poly_csv(f.den()); }

Json jtransfer(const RationalMatrix& G) {
    Json rows = Json::array();
    for (int i = 0; i < G.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < G.cols(); ++j)
            row.push_back(entry_text(G(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

// Runs one report section, converting a precondition failure into a note so
// the remaining (typically algebraic) sections still land in the report.
struct SectionGuard {
    std::vector<std::string>& notes;

    template <class F>
    void run(Json& parent, const std::string& key, const std::string& label, F&& f) {
        try {
            parent[key] = f();
        } catch (const PreconditionError& e) {
            notes.push_back(label + " skipped: " + e.what());
        }
    }
};

// Everything the sections need, resolved once from the document + defaults.
struct Workspace {
    TimeScaleGrid grid;
    LinearSystem sys;
    double t0 = 0, tf = 0;
    std::vector<double> horizons;
    double margin = 1e-3;
    double tol = -1; // negative: let each test pick its own
    int q = 1;
    bool exact = false;
    RegressivityReport reg;
};

std::vector<double> quartile_times(const TimeScaleGrid& grid, bool skip_terminal) {
    std::size_t n = grid.size();
    std::vector<std::size_t> idx = {n / 4, n / 2, (3 * n) / 4, n - 1};
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    std::vector<double> out;
    for (std::size_t i : idx) {
        if (skip_terminal && i + 1 == n)
            continue;
        double t = grid.point(i).t;
        if (!skip_terminal && t <= grid.t_min())
            continue; // horizons must lie past the origin
        out.push_back(t);
    }
    return out;
}

Workspace make_workspace(const SystemDocument& doc) {
    TimeScaleGrid grid = TimeScaleGrid::build(doc.timescale);
    LinearSystem sys = doc.to_system(grid);
    Workspace w{std::move(grid), std::move(sys)};
    w.t0 = doc.options.t0 ? *doc.options.t0 : w.grid.t_min();
    w.tf = doc.options.tf ? *doc.options.tf : w.grid.t_max();
    w.grid.index_of(w.t0);
    w.grid.index_of(w.tf);
    if (!(w.tf > w.t0))
        throw InputError("analysis window must satisfy t0 < tf");
    if (doc.options.horizons) {
        w.horizons = *doc.options.horizons;
        for (double h : w.horizons)
            w.grid.index_of(h);
    } else {
        w.horizons = quartile_times(w.grid, false);
    }
    w.margin = doc.options.delta_margin ? *doc.options.delta_margin : 1e-3;
    w.tol = doc.options.tol ? *doc.options.tol : -1.0;
    w.q = doc.options.q ? *doc.options.q : std::max(1, doc.n() - 1);
    w.exact = doc.exact();
    w.reg = check_regressive(w.sys, w.grid);
    return w;
}

void put_header(Json& J, const std::string& command, const std::string& input,
                const SystemDocument& doc, const Workspace& w) {
    J["schema"] = "tscontrol-report/1";
    J["command"] = command;
    J["input"] = input;
    J["arithmetic"] = w.exact ? "exact" : "float";
    Json sys;
    sys["n"] = doc.n();
    sys["m"] = doc.m();
    sys["p"] = doc.p();
    sys["constant_coefficients"] = doc.constant_coefficients();
    J["system"] = std::move(sys);
    Json ts;
    ts["t_min"] = jnum(w.grid.t_min());
    ts["t_max"] = jnum(w.grid.t_max());
    ts["nodes"] = w.grid.size();
    ts["mu_max"] = jnum(w.grid.mu_max());
    J["timescale"] = std::move(ts);
    Json opt;
    opt["t0"] = jnum(w.t0);
    opt["tf"] = jnum(w.tf);
    opt["horizons"] = jlist(w.horizons);
    opt["delta_margin"] = jnum(w.margin);
    opt["tolerance"] = w.tol > 0 ? Json(jnum(w.tol)) : Json("auto");
    opt["q"] = w.q;
    J["options"] = std::move(opt);
}

Json jregressivity(const RegressivityReport& r) {
    Json j;
    j["ok"] = r.ok;
    j["threshold"] = jnum(r.tau);
    j["worst_sigma_min"] = jnum(r.worst_sigma_min);
    j["worst_condition"] = jnum(r.worst_condition);
    if (!r.failing_times.empty())
        j["failing_times"] = jlist(r.failing_times);
    return j;
}

void put_stability(Json& J, const SystemDocument& doc, const Workspace& w, SectionGuard& guard,
                   std::vector<std::string>& notes) {
    Json st;
    bool ti = w.sys.time_invariant();
    if (ti) {
        if (w.exact) {
            guard.run(st, "eigenvalues_exact", "stability.eigenvalues_exact", [&] {
                PartialFractions pf = partial_fractions(doc.exact_A());
                if (!pf.exact_eigenvalues)
                    throw PreconditionError("spectrum does not split over the rationals");
                std::vector<std::pair<double, Json>> items;
                for (const auto& term : pf.terms) {
                    Json e;
                    e["value"] = to_string(term.lambda_exact);
                    e["multiplicity"] = term.psi;
                    items.emplace_back(static_cast<double>(term.lambda_exact), std::move(e));
                }
                std::sort(items.begin(), items.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });
                Json arr = Json::array();
                for (auto& it : items)
                    arr.push_back(std::move(it.second));
                return arr;
            });
        }
        guard.run(st, "spectrum", "stability.spectrum", [&] {
            SpectrumStabilityVerdict spec =
                exp_stable_spectrum(w.sys.A0(), w.grid, w.horizons, w.margin);
            Json sj;
            sj["verdict"] = to_string(spec.verdict);
            sj["meaning"] = "inside: every eigenvalue sits in the stability region of the "
                            "time scale, certifying a uniform exponential decay rate for the "
                            "scalar modes";
            Json evs = Json::array();
            for (const auto& q : spec.eigenvalues)
                evs.push_back(jregion(q));
            sj["eigenvalues"] = std::move(evs);
            return sj;
        });
    } else {
        notes.push_back("stability: spectral tests need constant coefficients; only the "
                        "integral bounds are computed");
    }
    if (w.reg.ok) {
        guard.run(st, "transition_norm_integral", "stability.transition_norm_integral", [&] {
            Json ij = jbound(exp_stable_integral(w.sys, w.grid, w.horizons));
            ij["meaning"] = "partial delta integrals of ||Phi(t, t0)||; a converged bound "
                            "certifies an absolutely integrable transition norm";
            return ij;
        });
        guard.run(st, "bibo", "stability.bibo", [&]() -> Json {
            if (ti) {
                BiboVerdict b = bibo_ti(w.sys, w.grid, w.horizons, w.margin);
                Json bj;
                bj["verdict"] = to_string(b.verdict);
                bj["impulse_response_integral"] = jbound(b.integral);
                Json poles = Json::array();
                for (const auto& p : b.poles)
                    poles.push_back(jcomplex(p));
                bj["poles"] = std::move(poles);
                Json pq = Json::array();
                for (const auto& q : b.pole_queries)
                    pq.push_back(jregion(q));
                bj["pole_regions"] = std::move(pq);
                bj["pole_verdict"] = to_string(b.pole_verdict);
                bj["minimal_realization"] = b.minimal;
                if (!b.note.empty())
                    bj["note"] = b.note;
                return bj;
            }
            Json bj = jbound(bibo_tv_integral(w.sys, w.grid, w.horizons));
            bj["meaning"] = "sup over output times of the integrated input-output kernel "
                            "norm; a converged bound certifies bounded-input bounded-output "
                            "stability";
            return bj;
        });
    } else {
        notes.push_back("stability: transition-norm and impulse-response integrals skipped "
                        "(system is not regressive on this grid)");
    }
    if (!st.is_null())
        J["stability"] = std::move(st);
}

std::string basename_of(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    return slash == std::string::npos ? path : path.substr(slash + 1);
}

} // namespace

ReportBundle analyze_report(const SystemDocument& doc, const std::string& input_name) {
    ReportBundle rb;
    Workspace w = make_workspace(doc);
    std::vector<std::string> notes;
    SectionGuard guard{notes};
    Json& J = rb.data;
    put_header(J, "analyze", basename_of(input_name), doc, w);
    J["regressivity"] = jregressivity(w.reg);
    bool ti = w.sys.time_invariant();

    Json ctrb, obsv;
    if (w.exact) {
        ctrb["kalman"] = jrank_exact(kalman_controllability_exact(doc.exact_A(), doc.exact_B()));
        obsv["kalman"] = jrank_exact(kalman_observability_exact(doc.exact_A(), doc.exact_C()));
    } else if (ti) {
        ctrb["kalman"] = jrank(kalman_controllability(w.sys.A0(), w.sys.B0(), w.tol));
        obsv["kalman"] = jrank(kalman_observability(w.sys.A0(), w.sys.C0(), w.tol));
    } else {
        notes.push_back("controllability/observability: Kalman, PBH and decomposition need "
                        "constant coefficients; skipped");
    }
    if (ti) {
        guard.run(ctrb, "pbh", "controllability.pbh",
                  [&] { return jpbh(pbh_controllability(w.sys.A0(), w.sys.B0())); });
        guard.run(obsv, "pbh", "observability.pbh",
                  [&] { return jpbh(pbh_observability(w.sys.A0(), w.sys.C0())); });
        if (ctrb.contains("kalman") && !ctrb["kalman"]["full_rank"].get<bool>())
            guard.run(ctrb, "decomposition", "controllability.decomposition", [&] {
                return jdecomposition(controllable_decomposition(w.sys.A0(), w.sys.B0()));
            });
        if (obsv.contains("kalman") && !obsv["kalman"]["full_rank"].get<bool>())
            guard.run(obsv, "decomposition", "observability.decomposition", [&] {
                return jdecomposition(observable_decomposition(w.sys.A0(), w.sys.C0()));
            });
    }
    std::vector<double> candidates = quartile_times(w.grid, true);
    if (candidates.empty())
        candidates.push_back(w.grid.t_min());
    guard.run(ctrb, "sufficient_rank_test", "controllability.sufficient_rank_test", [&] {
        return jtvrank(tv_controllability_rank(w.sys, w.grid, candidates, w.q), w.q);
    });
    guard.run(obsv, "sufficient_rank_test", "observability.sufficient_rank_test", [&] {
        return jtvrank(tv_observability_rank(w.sys, w.grid, candidates, w.q), w.q);
    });
    if (w.reg.ok) {
        guard.run(ctrb, "gramian", "controllability.gramian",
                  [&] { return jgramian(controllability_gramian(w.sys, w.grid, w.t0, w.tf)); });
        guard.run(obsv, "gramian", "observability.gramian",
                  [&] { return jgramian(observability_gramian(w.sys, w.grid, w.t0, w.tf)); });
    } else {
        notes.push_back("gramians skipped: system is not regressive on this grid");
    }
    J["controllability"] = std::move(ctrb);
    J["observability"] = std::move(obsv);

    if (w.exact) {
        guard.run(J, "realization", "realization", [&] {
            Json rj;
            RatMat A = doc.exact_A(), B = doc.exact_B(), C = doc.exact_C();
            rj["transfer_function"] = jtransfer(transfer_function(A, B, C));
            Realization r{A, B, C, Realization::Source::User, false};
            MinimalityVerdict mv = is_minimal(r);
            rj["minimal"] = mv.minimal;
            rj["controllability_rank"] = mv.controllability.rank;
            rj["observability_rank"] = mv.observability.rank;
            return rj;
        });
    } else if (ti) {
        notes.push_back("realization: exact transfer function needs rational entries; skipped");
    }

    put_stability(J, doc, w, guard, notes);
    if (!w.reg.ok)
        rb.exit_code = 3;
    if (!notes.empty())
        J["notes"] = notes;
    return rb;
}

ReportBundle stability_report(const SystemDocument& doc, const std::string& input_name) {
    ReportBundle rb;
    Workspace w = make_workspace(doc);
    std::vector<std::string> notes;
    SectionGuard guard{notes};
    Json& J = rb.data;
    put_header(J, "stability", basename_of(input_name), doc, w);
    J["regressivity"] = jregressivity(w.reg);
    put_stability(J, doc, w, guard, notes);
    if (!w.reg.ok)
        rb.exit_code = 3;
    if (!notes.empty())
        J["notes"] = notes;
    return rb;
}

ReportBundle realize_report(const TransferDocument& doc, const std::string& input_name) {
    for (int i = 0; i < doc.G.rows(); ++i)
        for (int j = 0; j < doc.G.cols(); ++j)
            if (!doc.G(i, j).is_zero() && !doc.G(i, j).is_strictly_proper())
                throw InputError("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                 ") is not a strictly-proper rational function of z "
                                 "(numerator degree must be below denominator degree)");
    ReportBundle rb;
    Json& J = rb.data;
    J["schema"] = "tscontrol-report/1";
    J["command"] = "realize";
    J["input"] = basename_of(input_name);
    Json tf;
    tf["rows"] = doc.G.rows();
    tf["cols"] = doc.G.cols();
    tf["entries"] = jtransfer(doc.G);
    J["transfer_function"] = std::move(tf);

    Realization r = companion_realization(doc.G);
    MinimalityVerdict mv = is_minimal(r);
    RationalMatrix back = transfer_function(r);
    Json rj;
    rj["dimension"] = r.A.rows();
    rj["A"] = jratmat(r.A);
    rj["B"] = jratmat(r.B);
    rj["C"] = jratmat(r.C);
    rj["round_trip_exact"] = back == doc.G;
    rj["minimal"] = mv.minimal;
    rj["controllability_rank"] = mv.controllability.rank;
    rj["observability_rank"] = mv.observability.rank;
    J["realization"] = std::move(rj);

    Poly chi = characteristic_polynomial(r.A);
    RationalRoots rr = rational_roots(chi);
    int total_mult = 0;
    for (const auto& root : rr.roots)
        total_mult += root.second;
    Json ej;
    if (rr.complete && total_mult == chi.degree()) {
        ej["exact"] = true;
        std::vector<std::pair<Rational, int>> roots = rr.roots;
        std::sort(roots.begin(), roots.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        Json arr = Json::array();
        for (const auto& root : roots) {
            Json e;
            e["value"] = to_string(root.first);
            e["multiplicity"] = root.second;
            arr.push_back(std::move(e));
        }
        ej["values"] = std::move(arr);
    } else {
        ej["exact"] = false;
        auto roots = numeric_roots(chi);
        std::sort(roots.begin(), roots.end(), [](auto a, auto b) {
            return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
        });
        Json arr = Json::array();
        for (const auto& root : roots)
            arr.push_back(jcomplex(root));
        ej["values"] = std::move(arr);
    }
    J["eigenvalues"] = std::move(ej);
    return rb;
}

SimulateRun simulate_run(const SystemDocument& doc, const std::string& input_name,
                         const SimulateOptions& opts) {
    if (opts.reconstruct && (opts.steer || doc.u))
        throw InputError("reconstruction runs a zero-input experiment; drop the steering "
                         "target and the document's input signal");
    SimulateRun out;
    Workspace w = make_workspace(doc);
    Json& J = out.report.data;
    put_header(J, "simulate", basename_of(input_name), doc, w);
    J["regressivity"] = jregressivity(w.reg);

    Eigen::VectorXd x0 = opts.x0 ? *opts.x0 : doc.x0_or_zero();
    if (x0.size() != doc.n())
        throw InputError("x0 must have " + std::to_string(doc.n()) + " entries");

    Trajectory u;
    const Trajectory* up = nullptr;
    std::string input_kind = "none";
    if (opts.steer) {
        if (opts.steer->size() != doc.n())
            throw InputError("steering target must have " + std::to_string(doc.n()) + " entries");
        u = min_energy_input(w.sys, w.grid, w.t0, w.tf, x0, *opts.steer);
        up = &u;
        input_kind = "minimum-energy";
    } else if (doc.u) {
        u = doc.input_trajectory(w.grid);
        up = &u;
        input_kind = "document";
    }
    J["input"] = input_kind;

    SimulationResult res = simulate(w.sys, w.grid, x0, up, w.t0, w.tf);

    auto u_at = [&](double t) -> Eigen::VectorXd {
        if (!up)
            return Eigen::VectorXd();
        for (std::size_t i = 0; i < u.times.size(); ++i)
            if (u.times[i] == t)
                return u.values[i];
        if (u.evaluator)
            return u.evaluator(t);
        return Eigen::VectorXd::Zero(doc.m());
    };

    std::string csv = "t";
    for (int i = 1; i <= doc.n(); ++i)
        csv += ",x" + std::to_string(i);
    for (int i = 1; i <= doc.p(); ++i)
        csv += ",y" + std::to_string(i);
    if (up)
        for (int i = 1; i <= doc.m(); ++i)
            csv += ",u" + std::to_string(i);
    csv += "\n";
    for (std::size_t k = 0; k < res.state.times.size(); ++k) {
        double t = res.state.times[k];
        csv += format_double(t);
        for (Eigen::Index i = 0; i < res.state.values[k].size(); ++i)
            csv += "," + format_double(res.state.values[k][i]);
        for (Eigen::Index i = 0; i < res.output.values[k].size(); ++i)
            csv += "," + format_double(res.output.values[k][i]);
        if (up) {
            Eigen::VectorXd uk = u_at(t);
            for (int i = 0; i < doc.m(); ++i)
                csv += "," + format_double(i < uk.size() ? uk[i] : 0.0);
        }
        csv += "\n";
    }
    out.csv = std::move(csv);

    Json sj;
    sj["rows"] = res.state.times.size();
    sj["x0"] = jvec(x0);
    sj["terminal_state"] = jvec(res.state.values.back());
    sj["terminal_output"] = jvec(res.output.values.back());
    if (opts.steer) {
        sj["steer_target"] = jvec(*opts.steer);
        sj["terminal_error"] = jnum((res.state.values.back() - *opts.steer).norm());
    }
    J["simulation"] = std::move(sj);

    if (opts.reconstruct) {
        Eigen::VectorXd xhat = reconstruct_initial_state(w.sys, w.grid, w.t0, w.tf, res.output);
        Json rj;
        rj["x0_estimate"] = jvec(xhat);
        rj["error"] = jnum((xhat - x0).norm());
        J["reconstruction"] = std::move(rj);
    }
    return out;
}

std::string ReportBundle::json_text() const { return data.dump(2) + "\n"; }

namespace {

bool scalar_like(const Json& j) {
    return j.is_primitive();
}

bool inline_array(const Json& j) {
    if (!j.is_array())
        return false;
    for (const auto& e : j)
        if (!scalar_like(e))
            return false;
    return true;
}

std::string scalar_text(const Json& j) {
    if (j.is_string())
        return j.get<std::string>();
    return j.dump();
}

std::string inline_text(const Json& j) {
    std::string out = "[";
    bool first = true;
    for (const auto& e : j) {
        if (!first)
            out += ", ";
        first = false;
        out += scalar_text(e);
    }
    return out + "]";
}

void render(const Json& j, const std::string& indent, std::string& out) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            if (scalar_like(value)) {
                out += indent + key + ": " + scalar_text(value) + "\n";
            } else if (inline_array(value)) {
                out += indent + key + ": " + inline_text(value) + "\n";
            } else {
                out += indent + key + ":\n";
                render(value, indent + "  ", out);
            }
        }
        return;
    }
    if (j.is_array()) {
        for (const auto& e : j) {
            if (scalar_like(e)) {
                out += indent + "- " + scalar_text(e) + "\n";
            } else if (inline_array(e)) {
                out += indent + "- " + inline_text(e) + "\n";
            } else {
                out += indent + "-\n";
                render(e, indent + "  ", out);
            }
        }
        return;
    }
    out += indent + scalar_text(j) + "\n";
}

} // namespace

std::string ReportBundle::text() const {
    std::string out;
    render(data, "", out);
    return out;
}

} // namespace tsc
