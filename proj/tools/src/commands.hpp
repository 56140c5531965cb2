// SPDX-License-Identifier: Apache-2.0

#ifndef LAME_SPECTRA_CLI_COMMANDS_HPP
#define LAME_SPECTRA_CLI_COMMANDS_HPP

#include <optional>
#include <string>

#include "report.hpp"

namespace lame_spectra::cli {

/// Band edges from the defining polynomial systems. Exit 3 when a root cluster
/// is ambiguous (the report is still complete).
CommandResult cmd_edges(const RunConfig& cfg);

struct SpectrumOptions {
    int kpoints = 64;
    std::string x0 = "0.123456";
};

/// Bloch-matrix band sweep for rational eta = P/Q, numeric edge candidates and
/// the deviation from the analytic edges.
CommandResult cmd_spectrum(const RunConfig& cfg, const SpectrumOptions& opts);

struct VerifyOptions {
    std::string suite = "all";
    int trials = 20;
};

/// Suites: monodromy, cauchy, schur, a-poly, curve-symmetry, cj-symmetry,
/// cj-limit, all. Exit 1 if any identity misses its threshold.
CommandResult cmd_verify(const RunConfig& cfg, const VerifyOptions& opts);

struct FlowCommandOptions {
    std::string poles;        // comma-separated complex list
    bool degenerate = false;  // use the degenerate configuration
    bool find_locus = false;  // search for an on-locus configuration
    double t_end = 0.3;
    double dt = 0.01;
    double tol_locus = 1e-8;
    double tol_margin = 1e-6;
    bool isospectral = false; // compare numeric band edges at both ends (rational eta)
};

CommandResult cmd_flow(const RunConfig& cfg, const FlowCommandOptions& opts);

struct CurvePointOptions {
    std::optional<std::string> zeta; // fix zeta
    std::optional<std::string> energy; // fix E
    std::optional<std::string> seed_zeta;
    std::optional<std::string> seed_k;
    std::optional<std::string> seed_e;
    bool all = false;                // every point above the fixed zeta
    bool with_w = false;             // also estimate the W eigenvalue
};

CommandResult cmd_curve_point(const RunConfig& cfg, const CurvePointOptions& opts);

/// C_j of the Bloch relation and the A-polynomial coefficients.
CommandResult cmd_coeffs(const RunConfig& cfg);

} // namespace lame_spectra::cli

#endif
