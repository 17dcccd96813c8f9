#pragma once

#include <string>

#include <json.hpp>

#include "tscontrol/document.hpp"
#include "tscontrol/system.hpp"

namespace tsc {

using Json = nlohmann::ordered_json;

// A finished analysis: machine-readable body plus the exit code the CLI should
// return (0 completed, 3 when a mathematical precondition aborted sections).
// Reports carry no timestamps or absolute paths, so identical inputs produce
// byte-identical output.
struct ReportBundle {
    Json data;
    int exit_code = 0;

    std::string json_text() const; // data serialized with 2-space indent
    std::string text() const;      // human-readable mirror of the same tree
};

// Full report: regressivity, controllability/observability (exact Kalman or
// SVD rank, PBH, Gramian, sufficient time-varying tests, decomposition),
// realization round-trip, stability (region per eigenvalue, transition-norm
// integral, BIBO). Sections that need an unavailable arithmetic mode or a
// failed precondition are skipped with a note.
ReportBundle analyze_report(const SystemDocument& doc, const std::string& input_name);

// The stability sections alone.
ReportBundle stability_report(const SystemDocument& doc, const std::string& input_name);

// Companion realization of a transfer matrix: exact matrices, dimension,
// minimality certificate, round-trip verdict, eigenvalues.
ReportBundle realize_report(const TransferDocument& doc, const std::string& input_name);

struct SimulateRun {
    ReportBundle report;
    std::string csv; // t,x1..xn[,y1..yp,u1..um]
};

struct SimulateOptions {
    std::optional<Eigen::VectorXd> x0;    // overrides the document's x0
    std::optional<Eigen::VectorXd> steer; // target state: synthesize the
                                          // minimum-energy input first
    bool reconstruct = false;             // zero-input run + initial-state recovery
};

SimulateRun simulate_run(const SystemDocument& doc, const std::string& input_name,
                         const SimulateOptions& opts);

} // namespace tsc
