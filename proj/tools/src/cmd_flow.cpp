// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"
#include "lame_spectra/bloch_numerics.hpp"
#include "lame_spectra/volterra.hpp"

namespace lame_spectra::cli {

namespace {

constexpr double isospectral_tol = 1e-6;

Json sample_json(const FlowSample& s)
{
    return {{"t", s.t}, {"xs", to_json(s.xs)}, {"gap", s.gap}, {"margin", s.margin}};
}

std::vector<cplx> edges_for(const PoleConfig& cfg, const RationalEta& re, const ThetaEvaluator& ev)
{
    const LatticeOperator op{[](cplx) { return cplx(1.0); }, [&ev, cfg](cplx x) { return c_from_poles(cfg, x, ev); }};
    return numeric_band_edges(op, re, default_x0).confident_values();
}

} // namespace

CommandResult cmd_flow(const RunConfig& cfg, const FlowCommandOptions& opts)
{
    const int sources = int(!opts.poles.empty()) + int(opts.degenerate) + int(opts.find_locus);
    if (sources != 1)
        throw Error(ErrorKind::invalid_argument, "flow needs exactly one of --poles, --degenerate, --find-locus");
    if (cfg.ell < 1)
        throw Error(ErrorKind::invalid_argument, "flow needs ell >= 1");
    if (opts.isospectral && !cfg.eta.rational)
        throw Error(ErrorKind::invalid_argument, "--isospectral needs a rational eta given as P/Q");

    const ThetaEvaluator ev(cfg.params());
    CommandResult result{report_header("flow", cfg, ev)};
    result.doc["config"]["t_end"] = opts.t_end;
    result.doc["config"]["dt"] = opts.dt;
    result.doc["config"]["tol_locus"] = opts.tol_locus;
    result.doc["config"]["tol_margin"] = opts.tol_margin;

    const std::size_t expected = std::size_t(cfg.ell) * std::size_t(cfg.ell + 1) / 2;
    PoleConfig cfg0;
    if (opts.degenerate) {
        cfg0 = degenerate_config(cfg.ell, cfg.eta.value);
        result.doc["source"] = "degenerate";
    } else if (opts.find_locus) {
        LocusSearchOptions search;
        search.seed = cfg.seed;
        search.margin.tol_margin = opts.tol_margin;
        const auto found = find_locus_config(cfg.ell, ev, search);
        if (!found)
            throw Error(ErrorKind::non_convergence, "no on-locus configuration found from " +
                                                        std::to_string(search.attempts) + " random starts");
        cfg0 = found->cfg;
        result.doc["source"] = "find-locus";
        result.doc["locus_search"] = {{"residual", found->residual}, {"attempt", found->attempt}};
    } else {
        cfg0.xs = parse_complex_list(opts.poles);
        if (cfg0.xs.size() != expected)
            throw Error(ErrorKind::invalid_argument, "ell = " + std::to_string(cfg.ell) + " needs " +
                                                         std::to_string(expected) + " poles, got " +
                                                         std::to_string(cfg0.xs.size()));
        result.doc["source"] = "poles";
    }

    MarginOptions margin{opts.tol_margin};
    Json initial{{"xs", to_json(cfg0.xs)}};
    try {
        initial["gap"] = pole_rhs(cfg0, ev, margin).gap;
    } catch (const Error&) {
        initial["gap"] = nullptr; // undefined on a margin violation; the flow reports the reason
    }
    initial["margin"] = pole_margin(cfg0, ev).margin;
    result.doc["initial"] = initial;

    lame_spectra::FlowOptions flow;
    flow.tol_locus = opts.tol_locus;
    flow.margin = margin;
    flow.throw_on_halt = false;
    const auto traj = integrate_flow(cfg0, opts.t_end, opts.dt, ev, flow);

    Json samples = Json::array();
    double max_gap = 0.0;
    for (const auto& s : traj.samples) {
        samples.push_back(sample_json(s));
        max_gap = std::max(max_gap, s.gap);
    }
    result.doc["samples"] = samples;
    result.doc["max_gap"] = max_gap;
    result.doc["halted"] = traj.halted;

    result.csv = "t";
    for (std::size_t j = 0; j < cfg0.xs.size(); ++j)
        result.csv += ",re_x" + std::to_string(j + 1) + ",im_x" + std::to_string(j + 1);
    result.csv += ",gap,margin\n";
    for (const auto& s : traj.samples) {
        result.csv += format_real(s.t);
        for (const cplx& x : s.xs)
            result.csv += "," + format_real(x.real()) + "," + format_real(x.imag());
        result.csv += "," + format_real(s.gap) + "," + format_real(s.margin) + "\n";
    }

    if (traj.halted) {
        attach_error(result, Error(traj.halt_kind, traj.halt_message));
        return result;
    }

    if (opts.isospectral && traj.samples.size() >= 2) {
        const RationalEta re = *cfg.eta.rational;
        const PoleConfig first{traj.samples.front().xs, traj.samples.front().t};
        const PoleConfig last{traj.samples.back().xs, traj.samples.back().t};
        const auto e0 = edges_for(first, re, ev);
        const auto e1 = edges_for(last, re, ev);
        const double dist = hausdorff_distance(e0, e1);
        const bool pass = e0.size() == e1.size() && dist < isospectral_tol;
        result.doc["isospectrality"] = {{"edges_start", to_json(e0)}, {"edges_end", to_json(e1)},
                                        {"hausdorff_distance", dist}, {"threshold", isospectral_tol},
                                        {"pass", pass}};
        if (!pass)
            result.exit = exit_code::verify_failed;
    }
    return result;
}

} // namespace lame_spectra::cli
