// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include "commands.hpp"
#include "lame_spectra/curve.hpp"

namespace lame_spectra::cli {

namespace {

double nearest_rel(const std::vector<cplx>& set, cplx z)
{
    double best = INFINITY;
    for (const cplx& s : set)
        best = std::min(best, std::abs(s - z));
    return best / std::max(std::abs(z), 1e-300);
}

Json closed_form_section(const LameContext& ctx, const BandEdgeSet& be)
{
    Json out;
    auto values = [&](int a) {
        std::vector<cplx> v;
        for (const auto& r : be.label(a))
            v.push_back(r.value);
        return v;
    };
    if (ctx.ell() == 1) {
        const auto closed = closed_form_edges_ell1(ctx.theta());
        double worst = 0.0;
        for (int a = 2; a <= 4; ++a) {
            const double dev = nearest_rel(values(a), closed[a - 2]);
            out["labels"].push_back({{"label", a}, {"closed_form", to_json(closed[a - 2])}, {"rel_deviation", dev}});
            worst = std::max(worst, dev);
        }
        out["max_rel_deviation"] = worst;
    } else if (ctx.ell() == 2) {
        const auto closed = closed_form_edges_ell2(ctx.theta());
        double worst = 0.0;
        for (int a = 2; a <= 4; ++a) {
            const double dev = nearest_rel(values(a), closed.labels[a - 2]);
            out["labels"].push_back({{"label", a}, {"closed_form", to_json(closed.labels[a - 2])}, {"rel_deviation", dev}});
            worst = std::max(worst, dev);
        }
        const auto e1 = values(1);
        double quad_literal = 0.0, quad_reflected = 0.0, displayed = 0.0;
        for (const cplx& q : closed.printed_quadratic_roots) {
            quad_literal = std::max(quad_literal, nearest_rel(e1, q));
            quad_reflected = std::max(quad_reflected, nearest_rel(e1, -q));
        }
        for (const cplx& d : closed.displayed_formula)
            displayed = std::max(displayed, nearest_rel(e1, d));
        const double quad_in_set = std::min(quad_literal, quad_reflected);
        worst = std::max(worst, quad_in_set);
        out["label1"] = {
            {"quadratic_roots", to_json(std::vector<cplx>(closed.printed_quadratic_roots.begin(),
                                                          closed.printed_quadratic_roots.end()))},
            {"displayed_formula", to_json(std::vector<cplx>(closed.displayed_formula.begin(),
                                                            closed.displayed_formula.end()))},
            {"rel_deviation_quadratic", quad_literal},
            {"rel_deviation_quadratic_reflected", quad_reflected},
            {"rel_deviation_displayed", displayed},
            {"sign_note", quad_literal <= quad_reflected
                              ? "label-1 roots equal the quadratic roots"
                              : "label-1 roots equal the quadratic roots under E -> -E; both lie in the edge set"}};
        out["max_rel_deviation"] = worst;
    }
    return out;
}

} // namespace

CommandResult cmd_edges(const RunConfig& cfg)
{
    if (cfg.ell < 1)
        throw Error(ErrorKind::invalid_argument, "edges needs ell >= 1");
    const LameContext ctx(cfg.ell, cfg.params());
    CommandResult result{report_header("edges", cfg, ctx.theta())};
    const auto be = band_edges(ctx);

    Json labels = Json::array();
    for (int a = 1; a <= 4; ++a) {
        Json roots = Json::array();
        for (const auto& r : be.label(a))
            roots.push_back({{"value", to_json(r.value)}, {"multiplicity", r.multiplicity},
                             {"match_residual", r.match_residual}});
        labels.push_back({{"label", a}, {"roots", roots}});
    }
    const auto counts = be.counts();
    const auto expected = expected_edge_counts(cfg.ell);
    result.doc["labels"] = labels;
    result.doc["edges"] = to_json(be.values());
    result.doc["full_edge_set"] = to_json(be.full);
    result.doc["counts"] = counts;
    result.doc["expected_counts"] = expected;
    result.doc["counts_match"] = counts == expected;
    result.doc["total"] = be.total();
    result.doc["ambiguous"] = be.ambiguous;
    result.doc["notes"] = be.notes;
    if (cfg.ell <= 2)
        result.doc["closed_forms"] = closed_form_section(ctx, be);

    if (be.ambiguous)
        result.exit = exit_code::cluster_ambiguity;

    result.csv = "label,re,im,multiplicity\n";
    for (int a = 1; a <= 4; ++a)
        for (const auto& r : be.label(a))
            result.csv += std::to_string(a) + "," + format_real(r.value.real()) + "," + format_real(r.value.imag()) +
                          "," + std::to_string(r.multiplicity) + "\n";
    return result;
}

} // namespace lame_spectra::cli
