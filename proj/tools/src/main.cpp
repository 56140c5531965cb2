// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace lame_spectra;
using namespace lame_spectra::cli;

namespace {

void add_common(CLI::App* sub, CommonOptions& o, std::string& output)
{
    sub->add_option("--ell", o.ell, "Lame integer ell")->capture_default_str();
    sub->add_option("--eta", o.eta, "lattice step: complex 'a+bi' or exact rational 'P/Q'")->capture_default_str();
    sub->add_option("--tau", o.tau, "modular parameter 'a+bi' with b > 0")->capture_default_str();
    sub->add_option("--tol", o.tol, "theta series truncation tolerance")->capture_default_str();
    sub->add_option("--seed", o.seed, "seed for randomized checks")->capture_default_str();
    sub->add_option("--format", o.format, "json or csv")->capture_default_str();
    sub->add_option("--output", output, "write the report to this file instead of stdout");
}

void emit(const CommandResult& result, Format format, const std::string& output)
{
    const std::string text = (format == Format::csv && !result.csv.empty()) ? result.csv : result.doc.dump(2) + "\n";
    if (output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(output);
    if (!out)
        throw Error(ErrorKind::invalid_argument, "cannot write '" + output + "'");
    out << text;
}

} // namespace

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    try {
        args = merge_config(args);
    } catch (const Error& e) {
        std::cerr << "lame-spectra: " << e.what() << "\n";
        return exit_code::usage;
    }

    CLI::App app{"Spectral curves, band edges and isospectral flows of the difference Lame operator"};
    app.footer("Options may also be read from a key=value file with --config FILE; command-line flags win.");
    app.require_subcommand(1);
    app.set_version_flag("--version", LAME_SPECTRA_CLI_VERSION);
    std::string output;

    CommonOptions common;

    auto* edges = app.add_subcommand("edges", "band edges from the defining polynomial systems");
    add_common(edges, common, output);

    SpectrumOptions spectrum_opts;
    auto* spectrum = app.add_subcommand("spectrum", "Bloch-matrix band sweep for rational eta = P/Q");
    add_common(spectrum, common, output);
    spectrum->add_option("--kpoints", spectrum_opts.kpoints, "Bloch phases per sweep (rounded up to even)")
        ->capture_default_str();
    spectrum->add_option("--x0", spectrum_opts.x0, "lattice offset")->capture_default_str();

    VerifyOptions verify_opts;
    auto* verify = app.add_subcommand("verify", "identity suites with pass/fail per identity");
    add_common(verify, common, output);
    verify->add_option("--suite", verify_opts.suite,
                       "all | monodromy | cauchy | schur | a-poly | curve-symmetry | cj-symmetry | cj-limit")
        ->capture_default_str();
    verify->add_option("--trials", verify_opts.trials, "random samples per identity")->capture_default_str();

    FlowCommandOptions flow_opts;
    auto* flow = app.add_subcommand("flow", "Volterra pole dynamics with locus monitoring");
    add_common(flow, common, output);
    flow->add_option("--poles", flow_opts.poles, "comma-separated initial poles");
    flow->add_flag("--degenerate", flow_opts.degenerate, "start from the degenerate configuration");
    flow->add_flag("--find-locus", flow_opts.find_locus, "search for an on-locus start");
    flow->add_option("--t-end", flow_opts.t_end, "final time")->capture_default_str();
    flow->add_option("--dt", flow_opts.dt, "RK4 step")->capture_default_str();
    flow->add_option("--tol-locus", flow_opts.tol_locus, "initial locus gap bound")->capture_default_str();
    flow->add_option("--tol-margin", flow_opts.tol_margin, "pole difference margin")->capture_default_str();
    flow->add_flag("--isospectral", flow_opts.isospectral, "compare numeric band edges at both ends (P/Q eta)");

    CurvePointOptions curve_opts;
    auto* curve = app.add_subcommand("curve-point", "solve for points (zeta, K, E) on the spectral curve");
    add_common(curve, common, output);
    curve->add_option("--zeta", curve_opts.zeta, "fix zeta");
    curve->add_option("--energy", curve_opts.energy, "fix E");
    curve->add_option("--seed-zeta", curve_opts.seed_zeta, "Newton seed for zeta (with --energy)");
    curve->add_option("--seed-k", curve_opts.seed_k, "Newton seed for K");
    curve->add_option("--seed-e", curve_opts.seed_e, "Newton seed for E (with --zeta)");
    curve->add_flag("--all", curve_opts.all, "every point found above the fixed zeta");
    curve->add_flag("--with-w", curve_opts.with_w, "also estimate the eigenvalue of W");

    auto* coeffs = app.add_subcommand("coeffs", "Bloch-relation coefficients C_j and A-polynomials");
    add_common(coeffs, common, output);

    std::vector<char*> raw;
    for (auto& a : args)
        raw.push_back(a.data());
    try {
        app.parse(static_cast<int>(raw.size()), raw.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_code::usage;
    }

    std::string command = app.get_subcommands().front()->get_name();
    try {
        const RunConfig cfg = resolve(common);
        CommandResult result;
        if (command == "edges")
            result = cmd_edges(cfg);
        else if (command == "spectrum")
            result = cmd_spectrum(cfg, spectrum_opts);
        else if (command == "verify")
            result = cmd_verify(cfg, verify_opts);
        else if (command == "flow")
            result = cmd_flow(cfg, flow_opts);
        else if (command == "curve-point")
            result = cmd_curve_point(cfg, curve_opts);
        else
            result = cmd_coeffs(cfg);
        emit(result, cfg.format, output);
        if (result.exit != exit_code::ok && result.doc.contains("error"))
            std::cerr << "lame-spectra " << command << ": " << result.doc["error"]["kind"].get<std::string>() << ": "
                      << result.doc["error"]["message"].get<std::string>() << "\n";
        return result.exit;
    } catch (const Error& e) {
        std::cout << error_document(command, e).dump(2) << "\n";
        std::cerr << "lame-spectra " << command << ": " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "lame-spectra " << command << ": " << e.what() << "\n";
        return exit_code::numerical_failure;
    }
}
