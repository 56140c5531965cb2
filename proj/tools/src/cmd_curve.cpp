// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"
#include "lame_spectra/curve.hpp"

namespace lame_spectra::cli {

namespace {

Json point_json(const CurvePoint& pt, const LameContext& ctx, bool with_w)
{
    const auto res = residual(pt, ctx);
    Json j{{"zeta", to_json(pt.zeta)},
           {"K", to_json(pt.K)},
           {"E", to_json(pt.E)},
           {"det_M0_scaled", res.scaled0()},
           {"det_M1_scaled", res.scaled1()},
           {"curve_sums_scaled", curve_equations(pt, ctx).scaled_max()},
           {"bloch_relation_scaled", bloch_relation(pt.zeta, pt.K, ctx).relative()}};
    const auto mult = bloch_multipliers(pt, ctx);
    j["B1"] = to_json(mult.B1);
    j["Btau"] = to_json(mult.Btau);
    if (with_w) {
        const auto w = w_eigenvalue(pt, solve_bloch_coeffs(pt, ctx), ctx);
        j["w"] = {{"value", to_json(w.w)}, {"spread", w.spread}, {"scale", w.scale}, {"samples", w.samples}};
    }
    return j;
}

std::string point_csv(const CurvePoint& pt, const LameContext& ctx)
{
    const auto res = residual(pt, ctx);
    return format_real(pt.zeta.real()) + "," + format_real(pt.zeta.imag()) + "," + format_real(pt.K.real()) + "," +
           format_real(pt.K.imag()) + "," + format_real(pt.E.real()) + "," + format_real(pt.E.imag()) + "," +
           format_real(res.scaled_max()) + "\n";
}

} // namespace

CommandResult cmd_curve_point(const RunConfig& cfg, const CurvePointOptions& opts)
{
    if (cfg.ell < 1)
        throw Error(ErrorKind::invalid_argument, "curve-point needs ell >= 1");
    if (opts.zeta.has_value() == opts.energy.has_value())
        throw Error(ErrorKind::invalid_argument, "curve-point needs exactly one of --zeta, --energy");
    const LameContext ctx(cfg.ell, cfg.params());
    CommandResult result{report_header("curve-point", cfg, ctx.theta())};
    result.csv = "re_zeta,im_zeta,re_K,im_K,re_E,im_E,residual\n";

    if (opts.zeta) {
        const cplx zeta = parse_complex(*opts.zeta);
        result.doc["config"]["fix"] = "zeta";
        result.doc["config"]["zeta"] = format_complex(zeta);
        if (opts.all || !opts.seed_k || !opts.seed_e) {
            Json points = Json::array();
            for (const auto& p : find_curve_points(zeta, ctx)) {
                points.push_back(point_json(p, ctx, opts.with_w));
                result.csv += point_csv(p, ctx);
            }
            result.doc["points"] = points;
            return result;
        }
        const CurvePoint seed{zeta, parse_complex(*opts.seed_k), parse_complex(*opts.seed_e)};
        const auto solved = solve_curve_point(CurveFix::zeta, seed, ctx);
        result.doc["iterations"] = solved.iterations;
        result.doc["points"] = Json::array({point_json(solved.point, ctx, opts.with_w)});
        result.csv += point_csv(solved.point, ctx);
        return result;
    }

    const cplx E = parse_complex(*opts.energy);
    result.doc["config"]["fix"] = "E";
    result.doc["config"]["E"] = format_complex(E);
    // Without seeds start on the branch toward the point at infinity: K ~ E, zeta ~ -0.4 / E^2.
    const cplx seed_k = opts.seed_k ? parse_complex(*opts.seed_k) : E;
    const cplx seed_zeta = opts.seed_zeta ? parse_complex(*opts.seed_zeta) : -0.4 / (E * E);
    const auto solved = solve_curve_point(CurveFix::E, {seed_zeta, seed_k, E}, ctx);
    result.doc["iterations"] = solved.iterations;
    result.doc["points"] = Json::array({point_json(solved.point, ctx, opts.with_w)});
    result.csv += point_csv(solved.point, ctx);
    return result;
}

CommandResult cmd_coeffs(const RunConfig& cfg)
{
    if (cfg.ell < 1)
        throw Error(ErrorKind::invalid_argument, "coeffs needs ell >= 1");
    const LameContext ctx(cfg.ell, cfg.params());
    CommandResult result{report_header("coeffs", cfg, ctx.theta())};
    const auto c = curve_coeffs(ctx);
    double sym = 0.0;
    for (int j = 0; j <= ctx.N(); ++j)
        sym = std::max(sym, std::abs(c.C[j] - c.C[ctx.N() - j]) / std::max(1.0, std::abs(c.C[j])));
    result.doc["N"] = ctx.N();
    result.doc["C"] = to_json(c.C);
    result.doc["C_symmetry_error"] = sym;

    Json brackets = Json::array();
    for (int n = 0; n <= 2 * cfg.ell + 1; ++n)
        brackets.push_back(to_json(ctx.numbers().bracket(n)));
    result.doc["brackets"] = brackets;

    Json apolys = Json::array();
    const auto a = a_polys_recurrence(ctx);
    for (int s = 0; s <= cfg.ell; ++s)
        apolys.push_back({{"index", cfg.ell - s}, {"coefficients", to_json(a[cfg.ell - s].coeffs())}});
    result.doc["A_polynomials"] = apolys;

    result.csv = "j,re_C,im_C\n";
    for (int j = 0; j <= ctx.N(); ++j)
        result.csv += std::to_string(j) + "," + format_real(c.C[j].real()) + "," + format_real(c.C[j].imag()) + "\n";
    return result;
}

} // namespace lame_spectra::cli
