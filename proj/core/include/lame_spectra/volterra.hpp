// SPDX-License-Identifier: Apache-2.0

#ifndef LAME_SPECTRA_VOLTERRA_HPP
#define LAME_SPECTRA_VOLTERRA_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lame_spectra/elliptic_core.hpp"

namespace lame_spectra {

/// Zeros x_j of rho(x) = prod_j theta_1(x - x_j) at flow time t.
struct PoleConfig {
    std::vector<cplx> xs;
    double t = 0.0;
};

/// The ell(ell+1)/2 points -(j + k - ell - 1) eta, 1 <= j <= k <= ell.
PoleConfig degenerate_config(int ell, cplx eta);

/// c(x) = rho(x + eta) rho(x - 2 eta) / (rho(x) rho(x - eta)).
cplx c_from_poles(const PoleConfig& cfg, cplx x, const ThetaEvaluator& ev);

/// -c(x) (c(x + eta) - c(x - eta)).
cplx volterra_rhs_c(const PoleConfig& cfg, cplx x, const ThetaEvaluator& ev);

struct MarginOptions {
    double tol_margin = 1e-6; // on |theta_1(x_j - x_k - s)| / |q|^{1/4}
};

struct MarginReport {
    double margin = 0.0; // minimum over pairs j != k and s in {0, +-eta, +-2 eta}
    int j = -1;
    int k = -1;
    int shift = 0; // s = shift * eta at the minimum
};

/// Worst pairwise margin; +infinity for a single pole.
MarginReport pole_margin(const PoleConfig& cfg, const ThetaEvaluator& ev);

/// Throws Error(boundary_of_locus) if cfg is a translate of the degenerate
/// configuration and Error(margin_violation) for any other margin failure.
void require_margin(const PoleConfig& cfg, const ThetaEvaluator& ev, const MarginOptions& opts = {});

/// True if cfg equals degenerate_config(ell, eta) + c for some c, up to order,
/// within rel_tol.
bool is_degenerate_translate(const PoleConfig& cfg, const ThetaEvaluator& ev, double rel_tol = 1e-9);

struct PoleVelocities {
    std::vector<cplx> first;  // drives the flow
    std::vector<cplx> second; // consistency check
    /// max_j |first_j - second_j| / |theta_1(2 eta) / theta_1'(0)|
    double gap = 0.0;
};

/// Both velocity systems, each including the factor theta_1(2 eta)/theta_1'(0).
PoleVelocities pole_rhs(const PoleConfig& cfg, const ThetaEvaluator& ev, const MarginOptions& opts = {});

struct LocusReport {
    std::vector<cplx> residuals; // product over k != j, minus 1
    double max_norm = 0.0;
};

LocusReport locus_residual(const PoleConfig& cfg, const ThetaEvaluator& ev, const MarginOptions& opts = {});

struct FlowOptions {
    double tol_locus = 1e-8; // initial gap bound; the flow halts past 100 tol_locus
    MarginOptions margin;
    bool throw_on_halt = true;
};

struct FlowSample {
    double t;
    std::vector<cplx> xs;
    double gap;
    double margin;
};

struct FlowTrajectory {
    std::vector<FlowSample> samples;
    bool halted = false;
    ErrorKind halt_kind = ErrorKind::invalid_argument;
    std::string halt_message;
};

/// Fixed-step RK4 on the first velocity system from cfg0.t to t_end (which may
/// lie before cfg0.t). Each accepted step records the gap and margin. A margin
/// failure or a gap above 100 tol_locus halts the run; with throw_on_halt the
/// corresponding Error is thrown, otherwise the partial trajectory is returned
/// with halted set.
FlowTrajectory integrate_flow(const PoleConfig& cfg0, double t_end, double dt, const ThetaEvaluator& ev,
                              const FlowOptions& opts = {});

struct LocusSearchOptions {
    int attempts = 40;
    int max_iter = 200;
    double perturbation = 0.15; // amplitude of the random complex offsets
    double tol = 1e-13;         // target for LocusReport::max_norm
    std::uint64_t seed = 1;
    MarginOptions margin;
};

struct LocusSearchResult {
    PoleConfig cfg;
    double residual;
    int attempt;
};

/// Levenberg-Marquardt on the locus residuals with x_0 pinned, started from
/// random perturbations of the degenerate configuration. Returns the first
/// converged configuration that satisfies the margin, or nullopt.
std::optional<LocusSearchResult> find_locus_config(int ell, const ThetaEvaluator& ev,
                                                   const LocusSearchOptions& opts = {});

} // namespace lame_spectra

#endif
