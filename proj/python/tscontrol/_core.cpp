#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tscontrol/document.hpp"
#include "tscontrol/dynamics.hpp"
#include "tscontrol/errors.hpp"
#include "tscontrol/gramian.hpp"
#include "tscontrol/ranktests.hpp"
#include "tscontrol/report.hpp"
#include "tscontrol/stability.hpp"
#include "tscontrol/system.hpp"
#include "tscontrol/timescale.hpp"

namespace py = pybind11;
using namespace tsc;

namespace {

py::object json_to_py(const Json& j) {
    switch (j.type()) {
    case nlohmann::detail::value_t::object: {
        py::dict d;
        for (const auto& [key, value] : j.items())
            d[py::str(key)] = json_to_py(value);
        return d;
    }
    case nlohmann::detail::value_t::array: {
        py::list l;
        for (const auto& value : j)
            l.append(json_to_py(value));
        return l;
    }
    case nlohmann::detail::value_t::string:
        return py::str(j.get<std::string>());
    case nlohmann::detail::value_t::boolean:
        return py::bool_(j.get<bool>());
    case nlohmann::detail::value_t::number_integer:
        return py::int_(j.get<long long>());
    case nlohmann::detail::value_t::number_unsigned:
        return py::int_(j.get<unsigned long long>());
    case nlohmann::detail::value_t::number_float:
        return py::float_(j.get<double>());
    default:
        return py::none();
    }
}

LinearSystem lti(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& C) {
    return LinearSystem::constant(A, B, C);
}

// A-only wrapper for operations that ignore the input/output maps
LinearSystem bare(const Eigen::MatrixXd& A) {
    auto n = A.rows();
    return LinearSystem::constant(A, Eigen::MatrixXd::Zero(n, 1), Eigen::MatrixXd::Zero(1, n));
}

std::vector<double> window_times(const TimeScaleGrid& grid, double t0, double tf) {
    std::vector<double> out;
    for (const auto& p : grid.points())
        if (p.t >= t0 - 1e-12 && p.t <= tf + 1e-12)
            out.push_back(p.t);
    return out;
}

py::dict rank_dict(const RankVerdict& v) {
    py::dict d;
    d["matrix"] = v.matrix;
    d["rank"] = v.rank;
    d["singular_values"] = v.singular_values;
    d["tol"] = v.tol;
    d["pass"] = v.pass;
    return d;
}

py::dict gramian_dict(const GramianResult& g) {
    py::dict d;
    d["matrix"] = g.matrix;
    d["invertible"] = g.invertible;
    d["eig_min"] = g.eig_min;
    d["eig_max"] = g.eig_max;
    d["window"] = py::make_tuple(g.t0, g.tf);
    return d;
}

py::dict region_dict(const StabilityRegionQuery& q) {
    py::dict d;
    d["eigenvalue"] = q.lambda;
    d["verdict"] = to_string(q.verdict);
    d["decisive_average"] = q.decisive;
    d["horizons"] = q.horizons;
    d["averages"] = q.averages;
    d["margin"] = q.margin;
    d["regressivity_boundary"] = q.regressivity_boundary;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Linear dynamic systems on arbitrary time scales";
    m.attr("__version__") = "0.1.0";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_RuntimeError);

    py::class_<TimeScaleGrid>(m, "Grid", "Finite node set of a time scale with step classification")
        .def_static("from_text", &TimeScaleGrid::from_text, py::arg("text"),
                    "Build from 'interval a b h' / 'points t1 ... tk' lines")
        .def_static("integers", &TimeScaleGrid::integers, py::arg("t0"), py::arg("t1"))
        .def_static("continuous", &TimeScaleGrid::continuous, py::arg("a"), py::arg("b"),
                    py::arg("step"))
        .def_property_readonly("size", &TimeScaleGrid::size)
        .def_property_readonly("t_min", &TimeScaleGrid::t_min)
        .def_property_readonly("t_max", &TimeScaleGrid::t_max)
        .def_property_readonly("mu_max", &TimeScaleGrid::mu_max)
        .def("sigma", &TimeScaleGrid::sigma, py::arg("t"))
        .def("mu", &TimeScaleGrid::mu, py::arg("t"))
        .def("contains", &TimeScaleGrid::contains, py::arg("t"))
        .def("times",
             [](const TimeScaleGrid& g) {
                 std::vector<double> out;
                 out.reserve(g.size());
                 for (const auto& p : g.points())
                     out.push_back(p.t);
                 return out;
             })
        .def("__len__", &TimeScaleGrid::size)
        .def("__repr__", [](const TimeScaleGrid& g) {
            return "Grid(" + std::to_string(g.size()) + " nodes on [" +
                   std::to_string(g.t_min()) + ", " + std::to_string(g.t_max()) + "])";
        });

    m.def(
        "transition_matrix",
        [](const Eigen::MatrixXd& A, const TimeScaleGrid& grid, double t, double s) {
            return transition_matrix(bare(A), grid, t, s);
        },
        py::arg("A"), py::arg("grid"), py::arg("t"), py::arg("s"));

    m.def(
        "scalar_exp",
        [](const TimeScaleGrid& grid, std::complex<double> lam, double t, double s) {
            return scalar_exp(grid, lam, t, s);
        },
        py::arg("grid"), py::arg("lam"), py::arg("t"), py::arg("s"));

    m.def(
        "kalman_controllability",
        [](const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double tol) {
            return rank_dict(kalman_controllability(A, B, tol));
        },
        py::arg("A"), py::arg("B"), py::arg("tol") = -1.0);

    m.def(
        "kalman_observability",
        [](const Eigen::MatrixXd& A, const Eigen::MatrixXd& C, double tol) {
            return rank_dict(kalman_observability(A, C, tol));
        },
        py::arg("A"), py::arg("C"), py::arg("tol") = -1.0);

    m.def(
        "pbh_controllability",
        [](const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
            return pbh_controllability(A, B).pass;
        },
        py::arg("A"), py::arg("B"));

    m.def(
        "pbh_observability",
        [](const Eigen::MatrixXd& A, const Eigen::MatrixXd& C) {
            return pbh_observability(A, C).pass;
        },
        py::arg("A"), py::arg("C"));

    m.def(
        "controllability_gramian",
        [](const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const TimeScaleGrid& grid,
           double t0, double tf) {
            auto n = A.rows();
            auto sys = LinearSystem::constant(A, B, Eigen::MatrixXd::Zero(1, n));
            return gramian_dict(controllability_gramian(sys, grid, t0, tf));
        },
        py::arg("A"), py::arg("B"), py::arg("grid"), py::arg("t0"), py::arg("tf"));

    m.def(
        "observability_gramian",
        [](const Eigen::MatrixXd& A, const Eigen::MatrixXd& C, const TimeScaleGrid& grid,
           double t0, double tf) {
            auto n = A.rows();
            auto sys = LinearSystem::constant(A, Eigen::MatrixXd::Zero(n, 1), C);
            return gramian_dict(observability_gramian(sys, grid, t0, tf));
        },
        py::arg("A"), py::arg("C"), py::arg("grid"), py::arg("t0"), py::arg("tf"));

    m.def(
        "min_energy_input",
        [](const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const TimeScaleGrid& grid,
           double t0, double tf, const Eigen::VectorXd& x0, const Eigen::VectorXd& xf) {
            auto n = A.rows();
            auto sys = LinearSystem::constant(A, B, Eigen::MatrixXd::Zero(1, n));
            auto u = min_energy_input(sys, grid, t0, tf, x0, xf);
            Eigen::MatrixXd vals(static_cast<Eigen::Index>(u.values.size()), B.cols());
            for (std::size_t i = 0; i < u.values.size(); ++i)
                vals.row(static_cast<Eigen::Index>(i)) = u.values[i].transpose();
            py::dict d;
            d["times"] = u.times;
            d["values"] = vals;
            return d;
        },
        py::arg("A"), py::arg("B"), py::arg("grid"), py::arg("t0"), py::arg("tf"), py::arg("x0"),
        py::arg("xf"));

    m.def(
        "simulate",
        [](const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& C,
           const TimeScaleGrid& grid, const Eigen::VectorXd& x0, double t0, double tf,
           py::object u) {
            auto sys = lti(A, B, C);
            SimulationResult sim;
            if (u.is_none()) {
                sim = simulate(sys, grid, x0, nullptr, t0, tf);
            } else {
                Eigen::MatrixXd uv = u.cast<Eigen::MatrixXd>();
                auto times = window_times(grid, t0, tf);
                auto nodes = static_cast<Eigen::Index>(times.size());
                // the terminal sample only feeds the output there and may be omitted
                if ((uv.rows() != nodes && uv.rows() != nodes - 1) || uv.cols() != B.cols())
                    throw InputError("simulate: u must have one row per grid node in the window "
                                     "(the terminal row is optional)");
                Trajectory traj;
                traj.role = Trajectory::Role::Input;
                traj.times.assign(times.begin(), times.begin() + uv.rows());
                for (Eigen::Index i = 0; i < uv.rows(); ++i)
                    traj.values.push_back(uv.row(i).transpose());
                sim = simulate(sys, grid, x0, &traj, t0, tf);
            }
            Eigen::MatrixXd xs(static_cast<Eigen::Index>(sim.state.values.size()), A.rows());
            Eigen::MatrixXd ys(static_cast<Eigen::Index>(sim.output.values.size()), C.rows());
            for (std::size_t i = 0; i < sim.state.values.size(); ++i) {
                xs.row(static_cast<Eigen::Index>(i)) = sim.state.values[i].transpose();
                ys.row(static_cast<Eigen::Index>(i)) = sim.output.values[i].transpose();
            }
            py::dict d;
            d["times"] = sim.state.times;
            d["state"] = xs;
            d["output"] = ys;
            return d;
        },
        py::arg("A"), py::arg("B"), py::arg("C"), py::arg("grid"), py::arg("x0"), py::arg("t0"),
        py::arg("tf"), py::arg("u") = py::none());

    m.def(
        "reconstruct_initial_state",
        [](const Eigen::MatrixXd& A, const Eigen::MatrixXd& C, const TimeScaleGrid& grid,
           double t0, double tf, const Eigen::MatrixXd& y) {
            auto n = A.rows();
            auto sys = LinearSystem::constant(A, Eigen::MatrixXd::Zero(n, 1), C);
            auto times = window_times(grid, t0, tf);
            if (y.rows() != static_cast<Eigen::Index>(times.size()) || y.cols() != C.rows())
                throw InputError(
                    "reconstruct_initial_state: y must have one row per grid node in the window");
            Trajectory traj;
            traj.role = Trajectory::Role::Output;
            traj.times = times;
            for (Eigen::Index i = 0; i < y.rows(); ++i)
                traj.values.push_back(y.row(i).transpose());
            return reconstruct_initial_state(sys, grid, t0, tf, traj);
        },
        py::arg("A"), py::arg("C"), py::arg("grid"), py::arg("t0"), py::arg("tf"), py::arg("y"));

    m.def(
        "in_stability_region",
        [](const TimeScaleGrid& grid, std::complex<double> lam, const std::vector<double>& horizons,
           double margin) { return region_dict(in_stability_region(grid, lam, horizons, margin)); },
        py::arg("grid"), py::arg("lam"), py::arg("horizons"), py::arg("margin") = 1e-3);

    m.def(
        "exp_stable_spectrum",
        [](const Eigen::MatrixXd& A, const TimeScaleGrid& grid,
           const std::vector<double>& horizons, double margin) {
            auto v = exp_stable_spectrum(A, grid, horizons, margin);
            py::dict d;
            d["verdict"] = to_string(v.verdict);
            py::list eigs;
            for (const auto& q : v.eigenvalues)
                eigs.append(region_dict(q));
            d["eigenvalues"] = eigs;
            return d;
        },
        py::arg("A"), py::arg("grid"), py::arg("horizons"), py::arg("margin") = 1e-3);

    m.def(
        "exp_stable_integral",
        [](const Eigen::MatrixXd& A, const TimeScaleGrid& grid,
           const std::vector<double>& horizons) {
            auto est = exp_stable_integral(bare(A), grid, horizons);
            py::dict d;
            d["verdict"] = to_string(est.verdict());
            d["horizons"] = est.horizons;
            d["partials"] = est.partials;
            d["converged"] = est.converged;
            d["diverging"] = est.diverging;
            d["bound"] = est.bound;
            return d;
        },
        py::arg("A"), py::arg("grid"), py::arg("horizons"));

    // document-level entry points mirroring the CLI subcommands
    m.def(
        "analyze",
        [](const std::string& text, const std::string& name) {
            auto doc = SystemDocument::parse(text);
            return json_to_py(analyze_report(doc, name).data);
        },
        py::arg("text"), py::arg("name") = "document",
        "Full analysis report for a system document, as nested dicts");

    m.def(
        "stability",
        [](const std::string& text, const std::string& name) {
            auto doc = SystemDocument::parse(text);
            return json_to_py(stability_report(doc, name).data);
        },
        py::arg("text"), py::arg("name") = "document");

    m.def(
        "realize",
        [](const std::string& text, const std::string& name) {
            auto doc = TransferDocument::parse(text);
            return json_to_py(realize_report(doc, name).data);
        },
        py::arg("text"), py::arg("name") = "document",
        "State-space realization report for a transfer-function document");

    m.def(
        "simulate_document",
        [](const std::string& text, const std::string& name, py::object x0, py::object steer,
           bool reconstruct) {
            auto doc = SystemDocument::parse(text);
            SimulateOptions opts;
            if (!x0.is_none())
                opts.x0 = x0.cast<Eigen::VectorXd>();
            if (!steer.is_none())
                opts.steer = steer.cast<Eigen::VectorXd>();
            opts.reconstruct = reconstruct;
            auto run = simulate_run(doc, name, opts);
            py::dict d;
            d["report"] = json_to_py(run.report.data);
            d["csv"] = run.csv;
            return d;
        },
        py::arg("text"), py::arg("name") = "document", py::arg("x0") = py::none(),
        py::arg("steer") = py::none(), py::arg("reconstruct") = false,
        "Trajectory simulation for a system document: report dict plus CSV text");
}
