// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <functional>
#include <map>
#include <random>

#include "commands.hpp"
#include "lame_spectra/curve.hpp"

namespace lame_spectra::cli {

namespace {

/// Largest error observed for one identity, compared against its threshold.
struct Check {
    std::string identity;
    double threshold;
    double max_error = 0.0;
    int samples = 0;
    std::string failure{}; // set when the computation itself threw

    void observe(double err)
    {
        ++samples;
        if (!(err <= max_error))
            max_error = err; // NaN propagates into a failure
    }
    bool pass() const { return failure.empty() && max_error < threshold; }

    Json json() const
    {
        Json j{{"identity", identity}, {"max_error", max_error}, {"threshold", threshold}, {"samples", samples},
               {"pass", pass()}};
        if (!failure.empty())
            j["failure"] = failure;
        return j;
    }
};

double rel(cplx a, cplx b)
{
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

class Sampler {
public:
    Sampler(std::uint64_t seed, cplx tau) : rng_(seed), tau_(tau) {}

    /// Point in |Re| < 1/2, |Im| < 0.4 Im tau.
    cplx cell_point()
    {
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        const double re = u(rng_);
        const double im = 0.8 * u(rng_) * tau_.imag();
        return {re, im};
    }

    cplx box(double re_lo, double re_hi, double im_lo, double im_hi)
    {
        std::uniform_real_distribution<double> ur(re_lo, re_hi), ui(im_lo, im_hi);
        const double re = ur(rng_);
        const double im = ui(rng_);
        return {re, im};
    }

private:
    std::mt19937_64 rng_;
    cplx tau_;
};

using Suite = std::function<std::vector<Check>(const RunConfig&, int, Sampler&)>;

std::vector<Check> suite_monodromy(const RunConfig& cfg, int trials, Sampler& rng)
{
    const ThetaEvaluator ev(cfg.params());
    const cplx tau = cfg.tau;
    Check one{"theta_a(x+1) = +-theta_a(x)", 1e-10};
    Check quasi{"theta_a(x+tau) = +-exp(-pi i tau - 2 pi i x) theta_a(x)", 1e-10};
    Check half{"half-period identities", 1e-10};
    const double sign_one[] = {-1.0, -1.0, 1.0, 1.0};
    const double sign_tau[] = {-1.0, 1.0, 1.0, -1.0};
    for (int t = 0; t < trials; ++t) {
        const cplx x = rng.cell_point();
        for (int a = 1; a <= 4; ++a) {
            const cplx v = ev.theta(a, x);
            if (std::abs(v) < 1e-3 * ev.theta_magnitude_bound(a, x))
                continue;
            one.observe(rel(ev.theta(a, x + 1.0), sign_one[a - 1] * v));
            quasi.observe(rel(ev.theta(a, x + tau), sign_tau[a - 1] * std::exp(-I * pi * tau - 2.0 * I * pi * x) * v));
            for (HalfPeriod h : {HalfPeriod::one_half, HalfPeriod::tau_half, HalfPeriod::one_plus_tau_half}) {
                const cplx shift = h == HalfPeriod::one_half ? cplx(0.5) : (h == HalfPeriod::tau_half ? tau / 2.0 : (1.0 + tau) / 2.0);
                half.observe(rel(ev.theta(a, x + shift), ev.theta_halfshift_identity(a, x, h)));
            }
        }
    }
    return {one, quasi, half};
}

std::vector<Check> suite_cauchy(const RunConfig& cfg, int trials, Sampler& rng)
{
    const ThetaEvaluator ev(cfg.params());
    std::vector<Check> out;
    for (int n = 1; n <= std::max(1, cfg.ell); ++n) {
        Check c{"elliptic Cauchy determinant n=" + std::to_string(n), 1e-9};
        for (int t = 0; t < trials; ++t) {
            std::vector<cplx> xs;
            for (int i = 0; i < n; ++i)
                xs.push_back(rng.box(-0.45, 0.45, -0.4 * cfg.tau.imag(), 0.4 * cfg.tau.imag()));
            const cplx zeta = rng.box(-0.45, 0.45, -0.4 * cfg.tau.imag(), 0.4 * cfg.tau.imag());
            try {
                c.observe(cauchy_det(xs, zeta, ev).relative_error());
            } catch (const Error&) {
                // a random pair sum landed on a lattice point; draw again next trial
            }
        }
        out.push_back(c);
    }
    return out;
}

std::vector<Check> suite_schur(const RunConfig& cfg, int trials, Sampler& rng)
{
    const cplx q = std::exp(2.0 * pi * I * cfg.eta.value);
    std::vector<Check> out;
    for (int ell = 1; ell <= std::max(1, cfg.ell); ++ell) {
        Check c{"Weyl denominator product ell=" + std::to_string(ell), 1e-10};
        try {
            for (int t = 0; t < trials; ++t)
                c.observe(weyl_denominator_check(ell, rng.box(-1.5, 1.5, -1.0, 1.0), q).relative_error());
        } catch (const Error& e) {
            c.failure = e.what();
        }
        out.push_back(c);
    }
    return out;
}

std::vector<Check> suite_apoly(const RunConfig& cfg, int trials, Sampler& rng)
{
    Check agree{"A-polynomials: recurrence = determinant", 1e-10};
    Check parity{"A-polynomials: parity", 1e-12};
    try {
        const LameContext ctx(std::max(1, cfg.ell), cfg.params());
        const auto a = a_polys_recurrence(ctx);
        const int ell = ctx.ell();
        for (int t = 0; t < trials; ++t) {
            const cplx E = rng.box(-3.0, 3.0, -1.0, 1.0);
            for (int s = 0; s <= ell; ++s)
                agree.observe(std::abs(a_polys_determinant(s, E, ctx) - a[ell - s](E)) / a[ell - s].abs_eval(E));
        }
        for (int s = 0; s <= ell; ++s) {
            const EPoly& p = a[ell - s];
            for (int i = 0; i <= p.degree(); ++i)
                if ((s - i) % 2 != 0)
                    parity.observe(std::abs(p.coeff(i)) / p.max_abs_coeff());
        }
    } catch (const Error& e) {
        agree.failure = e.what();
    }
    return {agree, parity};
}

std::vector<Check> suite_curve_symmetry(const RunConfig& cfg, int trials, Sampler& rng)
{
    Check shift{"curve sums under (zeta+tau, K e^{2 pi i eta}): factor -exp(-pi i tau - 2 pi i zeta)", 1e-10};
    Check refl{"curve sums under (zeta, -K, -E): +-itself", 1e-10};
    try {
        const LameContext ctx(std::max(1, cfg.ell), cfg.params());
        for (int t = 0; t < trials; ++t) {
            const CurvePoint pt{rng.box(-0.4, 0.4, -0.3 * cfg.tau.imag(), 0.3 * cfg.tau.imag()),
                                rng.box(0.5, 1.5, -0.5, 0.5), rng.box(-2.0, 2.0, -1.0, 1.0)};
            const auto base = curve_equations(pt, ctx);
            const auto moved = curve_equations(shift_by_tau(pt, ctx), ctx);
            const cplx factor = -std::exp(-I * pi * cfg.tau - 2.0 * I * pi * pt.zeta);
            shift.observe(std::max(std::abs(moved.first - factor * base.first) / (std::abs(factor) * base.scale_first),
                                   std::abs(moved.second - factor * base.second) / (std::abs(factor) * base.scale_second)));
            const auto r = curve_equations(reflect(pt), ctx);
            const double e1 = std::min(std::abs(r.first - base.first), std::abs(r.first + base.first)) / base.scale_first;
            const double e2 = std::min(std::abs(r.second - base.second), std::abs(r.second + base.second)) / base.scale_second;
            refl.observe(std::max(e1, e2));
        }
    } catch (const Error& e) {
        shift.failure = e.what();
    }
    return {shift, refl};
}

std::vector<Check> suite_cj_symmetry(const RunConfig& cfg, int, Sampler&)
{
    std::vector<Check> out;
    for (int ell = 1; ell <= std::max(1, cfg.ell); ++ell) {
        Check sym{"C_j = C_{N-j} ell=" + std::to_string(ell), 1e-10};
        Check c0{"C_0 = 1 exactly ell=" + std::to_string(ell), 0.5};
        try {
            const LameContext ctx(ell, cfg.params());
            const auto c = curve_coeffs(ctx);
            c0.observe(c.C[0] == cplx(1.0) ? 0.0 : 1.0);
            for (int j = 0; j <= ctx.N(); ++j)
                sym.observe(std::abs(c.C[j] - c.C[ctx.N() - j]) / std::max(1.0, std::abs(c.C[j])));
        } catch (const Error& e) {
            sym.failure = e.what();
        }
        out.push_back(sym);
        out.push_back(c0);
    }
    return out;
}

std::vector<Check> suite_cj_limit(const RunConfig& cfg, int, Sampler&)
{
    // |C_j(eta) - binom(N, j)| must shrink along eta = 1e-2, 5e-3, 2.5e-3;
    // the error reported is the number of non-decreasing steps.
    std::vector<Check> out;
    for (int ell = 1; ell <= std::max(1, cfg.ell); ++ell) {
        Check c{"C_j -> binom(N, j) monotonically as eta -> 0, ell=" + std::to_string(ell), 0.5};
        try {
            std::vector<std::vector<double>> dev;
            for (double eta : {1e-2, 0.5e-2, 0.25e-2}) {
                const LameContext ctx(ell, EllipticParams{cfg.tau, eta, cfg.tol});
                const auto coeffs = curve_coeffs(ctx);
                std::vector<double> d;
                double binom = 1.0;
                for (int j = 0; j <= ctx.N(); ++j) {
                    d.push_back(std::abs(coeffs.C[j] - binom));
                    binom = binom * double(ctx.N() - j) / double(j + 1);
                }
                dev.push_back(d);
            }
            for (std::size_t j = 1; j + 1 < dev[0].size(); ++j)
                c.observe((dev[1][j] < dev[0][j] && dev[2][j] < dev[1][j]) ? 0.0 : 1.0);
        } catch (const Error& e) {
            c.failure = e.what();
        }
        out.push_back(c);
    }
    return out;
}

const std::vector<std::pair<std::string, Suite>>& suites()
{
    static const std::vector<std::pair<std::string, Suite>> table = {
        {"monodromy", suite_monodromy},   {"cauchy", suite_cauchy},
        {"schur", suite_schur},           {"a-poly", suite_apoly},
        {"curve-symmetry", suite_curve_symmetry}, {"cj-symmetry", suite_cj_symmetry},
        {"cj-limit", suite_cj_limit},
    };
    return table;
}

} // namespace

CommandResult cmd_verify(const RunConfig& cfg, const VerifyOptions& opts)
{
    if (opts.trials < 1)
        throw Error(ErrorKind::invalid_argument, "verify needs trials >= 1");
    const bool known = opts.suite == "all" || std::any_of(suites().begin(), suites().end(),
                                                          [&](const auto& s) { return s.first == opts.suite; });
    if (!known) {
        std::string names;
        for (const auto& s : suites())
            names += " " + s.first;
        throw Error(ErrorKind::invalid_argument, "unknown suite '" + opts.suite + "'; choose all or one of" + names);
    }

    const ThetaEvaluator ev(cfg.params());
    CommandResult result{report_header("verify", cfg, ev)};
    result.doc["config"]["suite"] = opts.suite;
    result.doc["config"]["trials"] = opts.trials;

    bool all_pass = true;
    Json reports = Json::array();
    result.csv = "suite,identity,max_error,threshold,samples,pass\n";
    for (const auto& [name, run] : suites()) {
        if (opts.suite != "all" && opts.suite != name)
            continue;
        Sampler rng(cfg.seed, cfg.tau);
        const auto checks = run(cfg, opts.trials, rng);
        bool pass = true;
        Json items = Json::array();
        for (const auto& c : checks) {
            pass = pass && c.pass();
            items.push_back(c.json());
            result.csv += name + ",\"" + c.identity + "\"," + format_real(c.max_error) + "," +
                          format_real(c.threshold) + "," + std::to_string(c.samples) + "," +
                          (c.pass() ? "true" : "false") + "\n";
        }
        all_pass = all_pass && pass;
        reports.push_back({{"suite", name}, {"pass", pass}, {"checks", items}});
    }
    result.doc["suites"] = reports;
    result.doc["pass"] = all_pass;
    if (!all_pass)
        result.exit = exit_code::verify_failed;
    return result;
}

} // namespace lame_spectra::cli
