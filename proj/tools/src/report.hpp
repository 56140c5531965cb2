// SPDX-License-Identifier: Apache-2.0
//
// Shared run configuration, JSON helpers and the error -> exit code map.

#ifndef LAME_SPECTRA_CLI_REPORT_HPP
#define LAME_SPECTRA_CLI_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "lame_spectra/elliptic_core.hpp"
#include "parse.hpp"

namespace lame_spectra::cli {

using Json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

enum class Format { json, csv };

/// Exit codes. Usage errors (bad flags, malformed numbers, Im tau <= 0) exit
/// with 64; numerical failures without a dedicated code exit with 6.
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int verify_failed = 1;
inline constexpr int torsion_or_collision = 2;
inline constexpr int cluster_ambiguity = 3;
inline constexpr int margin_or_boundary = 4;
inline constexpr int off_locus_or_drift = 5;
inline constexpr int numerical_failure = 6;
inline constexpr int usage = 64;
} // namespace exit_code

int exit_code_for(ErrorKind kind);

/// Text options common to every subcommand, as received from the parser.
struct CommonOptions {
    int ell = 1;
    std::string eta = "0.17";
    std::string tau = "1.2i";
    double tol = 1e-14;
    std::uint64_t seed = 1;
    std::string format = "json";
};

struct RunConfig {
    int ell;
    EtaSpec eta;
    cplx tau;
    double tol;
    std::uint64_t seed;
    Format format;

    EllipticParams params() const { return {tau, eta.value, tol}; }
};

/// Parses and validates the common options.
RunConfig resolve(const CommonOptions& opts);

Json to_json(cplx z);
Json to_json(const std::vector<cplx>& zs);

/// {"schema", "command", "config", "provenance"}; provenance carries the
/// truncation tolerance and the theta series cutoff actually used.
Json report_header(const std::string& command, const RunConfig& cfg, const ThetaEvaluator& ev);

/// Header-less error document for failures before an evaluator exists.
Json error_document(const std::string& command, const Error& e);

struct CommandResult {
    Json doc;
    std::string csv{}; // used when the format is csv and the command has tabular output
    int exit = exit_code::ok;
};

/// Attaches {"error": {"kind", "message", "exit_code"}} and sets the exit code.
void attach_error(CommandResult& result, const Error& e);

} // namespace lame_spectra::cli

#endif
