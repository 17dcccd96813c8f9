#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tscontrol/document.hpp"
#include "tscontrol/errors.hpp"
#include "tscontrol/report.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw tsc::InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw tsc::InputError("cannot write '" + path + "'");
    out << content;
}

std::string with_ext(const std::string& base, const std::string& ext) {
    std::size_t slash = base.find_last_of("/\\");
    std::size_t dot = base.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return base + ext;
    return base.substr(0, dot) + ext;
}

std::vector<double> parse_csv_doubles(const std::string& s, const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        char* end = nullptr;
        double v = std::strtod(item.c_str(), &end);
        if (item.empty() || end != item.c_str() + item.size())
            throw tsc::InputError(flag + ": expected comma-separated numbers, got '" + s + "'");
        out.push_back(v);
    }
    if (out.empty())
        throw tsc::InputError(flag + ": empty list");
    return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        x[static_cast<Eigen::Index>(i)] = v[i];
    return x;
}

struct CommonFlags {
    std::string input;
    std::string out;
    std::string horizons;
    double tol = 0, margin = 0, t0 = 0, tf = 0;
    int q = 0;
    CLI::Option *tol_opt = nullptr, *margin_opt = nullptr, *q_opt = nullptr, *t0_opt = nullptr,
                *tf_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("input", f.input, "system document (.tsys)")->required();
    cmd->add_option("-o,--output", f.out, "report path; a .txt mirror is written alongside");
    cmd->add_option("--horizons", f.horizons, "comma-separated horizon times (grid nodes)");
    f.tol_opt = cmd->add_option("--tol", f.tol, "rank tolerance (default: size-scaled)");
    f.margin_opt = cmd->add_option("--delta-margin", f.margin, "stability margin delta");
    f.q_opt = cmd->add_option("--q", f.q, "depth of the sufficient rank test");
    f.t0_opt = cmd->add_option("--t0", f.t0, "analysis window start (default: grid start)");
    f.tf_opt = cmd->add_option("--tf", f.tf, "analysis window end (default: grid end)");
}

tsc::SystemDocument load_system(const CommonFlags& f) {
    tsc::SystemDocument doc = tsc::SystemDocument::parse(slurp(f.input));
    if (!f.horizons.empty())
        doc.options.horizons = parse_csv_doubles(f.horizons, "--horizons");
    if (*f.tol_opt)
        doc.options.tol = f.tol;
    if (*f.margin_opt)
        doc.options.delta_margin = f.margin;
    if (*f.q_opt)
        doc.options.q = f.q;
    if (*f.t0_opt)
        doc.options.t0 = f.t0;
    if (*f.tf_opt)
        doc.options.tf = f.tf;
    doc.validate();
    return doc;
}

int emit_report(const tsc::ReportBundle& rb, const std::string& out) {
    if (out.empty()) {
        std::cout << rb.json_text();
    } else {
        write_file(out, rb.json_text());
        write_file(with_ext(out, ".txt"), rb.text());
    }
    return rb.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"analysis of linear dynamic systems on time scales"};
    app.require_subcommand(1);

    CommonFlags fa, fs;
    CLI::App* analyze = app.add_subcommand("analyze", "full report: regressivity, "
                                                      "controllability, observability, "
                                                      "realization, stability");
    add_common(analyze, fa);
    CLI::App* stability = app.add_subcommand("stability", "stability sections only");
    add_common(stability, fs);

    CommonFlags fm;
    std::string x0_csv, steer_csv, csv_path;
    bool reconstruct = false;
    CLI::App* simulate = app.add_subcommand("simulate", "propagate the state and write the "
                                                        "trajectory as CSV");
    add_common(simulate, fm);
    simulate->add_option("--x0", x0_csv, "initial state (overrides the document)");
    simulate->add_option("--steer", steer_csv,
                         "target state: synthesize the minimum-energy input first");
    simulate->add_flag("--reconstruct", reconstruct,
                       "zero-input run, then recover x0 from the output");
    simulate->add_option("--csv", csv_path, "trajectory path (default: stdout, or the report "
                                            "path with a .csv extension when -o is given)");

    std::string tf_input, tf_out;
    CLI::App* realize = app.add_subcommand("realize", "companion realization of a transfer "
                                                      "matrix with a minimality certificate");
    realize->add_option("input", tf_input, "transfer-function file")->required();
    realize->add_option("-o,--output", tf_out, "report path; a .txt mirror is written alongside");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (analyze->parsed())
            return emit_report(tsc::analyze_report(load_system(fa), fa.input), fa.out);
        if (stability->parsed())
            return emit_report(tsc::stability_report(load_system(fs), fs.input), fs.out);
        if (realize->parsed())
            return emit_report(tsc::realize_report(tsc::TransferDocument::parse(slurp(tf_input)),
                                                   tf_input),
                               tf_out);
        // simulate
        tsc::SystemDocument doc = load_system(fm);
        tsc::SimulateOptions opts;
        if (!x0_csv.empty())
            opts.x0 = to_vector(parse_csv_doubles(x0_csv, "--x0"));
        if (!steer_csv.empty())
            opts.steer = to_vector(parse_csv_doubles(steer_csv, "--steer"));
        opts.reconstruct = reconstruct;
        tsc::SimulateRun run = tsc::simulate_run(doc, fm.input, opts);
        if (!csv_path.empty())
            write_file(csv_path, run.csv);
        else if (!fm.out.empty())
            write_file(with_ext(fm.out, ".csv"), run.csv);
        else
            std::cout << run.csv;
        if (!fm.out.empty()) {
            write_file(fm.out, run.report.json_text());
            write_file(with_ext(fm.out, ".txt"), run.report.text());
        }
        return run.report.exit_code;
    } catch (const tsc::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const tsc::PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
