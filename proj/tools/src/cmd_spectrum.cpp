// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"
#include "lame_spectra/bloch_numerics.hpp"
#include "lame_spectra/curve.hpp"

#include <optional>

namespace lame_spectra::cli {

CommandResult cmd_spectrum(const RunConfig& cfg, const SpectrumOptions& opts)
{
    if (!cfg.eta.rational)
        throw Error(ErrorKind::invalid_argument, "spectrum needs a rational eta given as P/Q");
    if (opts.kpoints < 2)
        throw Error(ErrorKind::invalid_argument, "spectrum needs kpoints >= 2");
    const RationalEta re = *cfg.eta.rational;
    const ThetaEvaluator ev(cfg.params());
    const cplx x0 = parse_complex(opts.x0);
    CommandResult result{report_header("spectrum", cfg, ev)};
    result.doc["config"]["kpoints"] = opts.kpoints;
    result.doc["config"]["x0"] = format_complex(x0);

    Json warnings = Json::array();
    if (re.Q < 2L * cfg.ell + 2)
        warnings.push_back("Q = " + std::to_string(re.Q) + " < 2 ell + 2 = " + std::to_string(2 * cfg.ell + 2) +
                           ": gaps may be unresolved");

    const auto sweep = band_sweep(cfg.ell, re, x0, brillouin_grid(re, opts.kpoints), ev);
    for (const auto& w : sweep.warnings)
        warnings.push_back(w);
    const auto edges = numeric_band_edges(cfg.ell, re, x0, ev);

    // A torsion eta has no analytic edge set; the sweep itself stays valid.
    std::optional<std::vector<cplx>> analytic;
    if (cfg.ell == 0) {
        analytic = std::vector<cplx>{cplx(-2.0), cplx(2.0)};
    } else {
        try {
            analytic = band_edges(LameContext(cfg.ell, cfg.params())).full;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::torsion_eta)
                throw;
            warnings.push_back("no analytic comparison: " + e.detail());
        }
    }
    const auto confident = edges.confident_values();

    Json bands = Json::array();
    for (const auto& iv : sweep.intervals)
        bands.push_back(Json::array({iv.lo, iv.hi}));
    Json candidates = Json::array();
    for (const auto& c : edges.candidates)
        candidates.push_back({{"value", to_json(c.value)},
                              {"phase", c.phase_sign > 0 ? "periodic" : "antiperiodic"},
                              {"nearest_distance", c.nearest_distance},
                              {"confident", c.confident}});

    result.doc["x0_used"] = format_complex(sweep.x0);
    result.doc["bands"] = bands;
    result.doc["band_count"] = sweep.intervals.size();
    result.doc["warnings"] = warnings;
    result.doc["numeric_edges"] = {{"candidates", candidates},
                                   {"confident_count", confident.size()},
                                   {"ambiguous", edges.ambiguous},
                                   {"expected_count", cfg.ell == 0 ? 2 : 2 * (2 * cfg.ell + 1)},
                                   {"max_imag", edges.max_imag},
                                   {"scale", edges.scale}};
    if (analytic) {
        const double deviation = hausdorff_distance(confident, *analytic);
        result.doc["analytic_edges"] = to_json(*analytic);
        result.doc["max_deviation"] = deviation;
        result.doc["max_rel_deviation"] = deviation / edges.scale;
    } else {
        result.doc["analytic_edges"] = nullptr;
        result.doc["max_deviation"] = nullptr;
        result.doc["max_rel_deviation"] = nullptr;
    }

    result.csv = "k,phase,index,re,im\n";
    for (std::size_t i = 0; i < sweep.ks.size(); ++i) {
        const double phase = sweep.ks[i] * re.value() * double(re.Q);
        for (std::size_t j = 0; j < sweep.energies[i].size(); ++j) {
            const cplx e = sweep.energies[i][j];
            result.csv += format_real(sweep.ks[i]) + "," + format_real(phase) + "," + std::to_string(j) + "," +
                          format_real(e.real()) + "," + format_real(e.imag()) + "\n";
        }
    }
    return result;
}

} // namespace lame_spectra::cli
