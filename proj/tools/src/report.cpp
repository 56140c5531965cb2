// SPDX-License-Identifier: Apache-2.0

#include "report.hpp"

#ifndef LAME_SPECTRA_VERSION
#define LAME_SPECTRA_VERSION "unknown"
#endif

namespace lame_spectra::cli {

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::invalid_argument:
    case ErrorKind::divergence: return exit_code::usage;
    case ErrorKind::torsion_eta:
    case ErrorKind::lattice_collision: return exit_code::torsion_or_collision;
    case ErrorKind::root_cluster: return exit_code::cluster_ambiguity;
    case ErrorKind::margin_violation:
    case ErrorKind::boundary_of_locus: return exit_code::margin_or_boundary;
    case ErrorKind::off_locus:
    case ErrorKind::locus_drift: return exit_code::off_locus_or_drift;
    default: return exit_code::numerical_failure;
    }
}

RunConfig resolve(const CommonOptions& opts)
{
    RunConfig cfg{opts.ell, parse_eta(opts.eta), parse_tau(opts.tau), opts.tol, opts.seed, Format::json};
    if (opts.format == "csv")
        cfg.format = Format::csv;
    else if (opts.format != "json")
        throw Error(ErrorKind::invalid_argument, "format must be json or csv, got '" + opts.format + "'");
    if (opts.ell < 0)
        throw Error(ErrorKind::invalid_argument, "ell must be nonnegative");
    cfg.params().validate();
    return cfg;
}

Json to_json(cplx z)
{
    return Json::array({z.real(), z.imag()});
}

Json to_json(const std::vector<cplx>& zs)
{
    Json out = Json::array();
    for (const cplx& z : zs)
        out.push_back(to_json(z));
    return out;
}

Json report_header(const std::string& command, const RunConfig& cfg, const ThetaEvaluator& ev)
{
    Json doc;
    doc["schema"] = schema_version;
    doc["command"] = command;
    doc["config"] = {{"ell", cfg.ell},
                     {"eta", cfg.eta.canonical()},
                     {"tau", format_complex(cfg.tau)},
                     {"tol", cfg.tol},
                     {"seed", cfg.seed}};
    doc["provenance"] = {{"tol", ev.tol()}, {"series_cutoff", ev.series_cutoff()}, {"version", LAME_SPECTRA_VERSION}};
    return doc;
}

Json error_document(const std::string& command, const Error& e)
{
    Json doc;
    doc["schema"] = schema_version;
    doc["command"] = command;
    doc["error"] = {{"kind", std::string(to_string(e.kind()))},
                    {"message", e.detail()},
                    {"exit_code", exit_code_for(e.kind())}};
    return doc;
}

void attach_error(CommandResult& result, const Error& e)
{
    result.exit = exit_code_for(e.kind());
    result.doc["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.detail()}, {"exit_code", result.exit}};
}

} // namespace lame_spectra::cli
