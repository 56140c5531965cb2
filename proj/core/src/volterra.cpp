// SPDX-License-Identifier: Apache-2.0

#include "lame_spectra/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>

namespace lame_spectra {

PoleConfig degenerate_config(int ell, cplx eta)
{
    if (ell < 1)
        throw Error(ErrorKind::invalid_argument, "degenerate configuration needs ell >= 1");
    PoleConfig cfg;
    for (int j = 1; j <= ell; ++j) {
        for (int k = j; k <= ell; ++k)
            cfg.xs.push_back(-double(j + k - ell - 1) * eta);
    }
    return cfg;
}

namespace {

cplx rho(const PoleConfig& cfg, cplx x, const ThetaEvaluator& ev)
{
    cplx r{1.0};
    for (const cplx& xj : cfg.xs)
        r *= ev.theta1(x - xj);
    return r;
}

cplx rho_nonzero(const PoleConfig& cfg, cplx x, const ThetaEvaluator& ev)
{
    cplx r{1.0};
    for (const cplx& xj : cfg.xs)
        r *= ev.theta1_nonzero(x - xj, "c(x) denominator");
    return r;
}

// theta_1(2 eta) / theta_1'(0)
cplx base_velocity(const ThetaEvaluator& ev) { return ev.theta1(2.0 * ev.eta()) / ev.theta1_prime_zero(); }

// Residuals of the locus products; denominators checked only for poles.
std::vector<cplx> raw_locus(const std::vector<cplx>& xs, const ThetaEvaluator& ev)
{
    const cplx eta = ev.eta();
    std::vector<cplx> r(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        cplx p{1.0};
        for (std::size_t k = 0; k < xs.size(); ++k) {
            if (k == j)
                continue;
            const cplx d = xs[j] - xs[k];
            const cplx minus = ev.theta1(d - eta);
            const cplx plus = ev.theta1_nonzero(d + eta, "locus residual");
            p *= ev.theta1(d + 2.0 * eta) * minus * minus /
                 (ev.theta1_nonzero(d - 2.0 * eta, "locus residual") * plus * plus);
        }
        r[j] = p - 1.0;
    }
    return r;
}

} // namespace

cplx c_from_poles(const PoleConfig& cfg, cplx x, const ThetaEvaluator& ev)
{
    const cplx eta = ev.eta();
    return rho(cfg, x + eta, ev) * rho(cfg, x - 2.0 * eta, ev) / (rho_nonzero(cfg, x, ev) * rho_nonzero(cfg, x - eta, ev));
}

cplx volterra_rhs_c(const PoleConfig& cfg, cplx x, const ThetaEvaluator& ev)
{
    const cplx eta = ev.eta();
    return -c_from_poles(cfg, x, ev) * (c_from_poles(cfg, x + eta, ev) - c_from_poles(cfg, x - eta, ev));
}

MarginReport pole_margin(const PoleConfig& cfg, const ThetaEvaluator& ev)
{
    MarginReport rep;
    rep.margin = std::numeric_limits<double>::infinity();
    const double scale = ev.theta1_scale();
    const std::size_t n = cfg.xs.size();
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
            for (int s = -2; s <= 2; ++s) {
                const double m = std::abs(ev.theta1(cfg.xs[j] - cfg.xs[k] - double(s) * ev.eta())) / scale;
                if (m < rep.margin)
                    rep = {m, int(j), int(k), s};
            }
        }
    }
    return rep;
}

bool is_degenerate_translate(const PoleConfig& cfg, const ThetaEvaluator& ev, double rel_tol)
{
    const std::size_t n = cfg.xs.size();
    const int ell = static_cast<int>(std::lround((std::sqrt(8.0 * double(n) + 1.0) - 1.0) / 2.0));
    if (ell < 1 || std::size_t(ell * (ell + 1) / 2) != n)
        return false;
    const auto deg = degenerate_config(ell, ev.eta()).xs;
    for (const cplx& anchor : deg) {
        const cplx offset = cfg.xs[0] - anchor;
        std::vector<bool> used(n, false);
        bool all = true;
        for (const cplx& x : cfg.xs) {
            bool hit = false;
            for (std::size_t i = 0; i < n && !hit; ++i) {
                if (!used[i] && std::abs(x - deg[i] - offset) <= rel_tol * (1.0 + std::abs(x))) {
                    used[i] = true;
                    hit = true;
                }
            }
            if (!hit) {
                all = false;
                break;
            }
        }
        if (all)
            return true;
    }
    return false;
}

void require_margin(const PoleConfig& cfg, const ThetaEvaluator& ev, const MarginOptions& opts)
{
    const MarginReport rep = pole_margin(cfg, ev);
    if (rep.margin >= opts.tol_margin)
        return;
    if (is_degenerate_translate(cfg, ev))
        throw Error(ErrorKind::boundary_of_locus,
                    "degenerate configuration, pole differences hit 0, +-eta or +-2eta");
    throw Error(ErrorKind::margin_violation, "poles " + std::to_string(rep.j) + " and " + std::to_string(rep.k) +
                                                 " collide at shift " + std::to_string(rep.shift) +
                                                 " eta (margin " + format_number(rep.margin) + ")");
}

PoleVelocities pole_rhs(const PoleConfig& cfg, const ThetaEvaluator& ev, const MarginOptions& opts)
{
    require_margin(cfg, ev, opts);
    const cplx eta = ev.eta();
    const cplx v0 = base_velocity(ev);
    const std::size_t n = cfg.xs.size();
    PoleVelocities out{std::vector<cplx>(n, v0), std::vector<cplx>(n, v0), 0.0};
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            if (k == j)
                continue;
            const cplx d = cfg.xs[j] - cfg.xs[k];
            const cplx t0 = ev.theta1(d);
            out.first[j] *= ev.theta1(d + 2.0 * eta) * ev.theta1(d - eta) / (ev.theta1(d + eta) * t0);
            out.second[j] *= ev.theta1(d - 2.0 * eta) * ev.theta1(d + eta) / (ev.theta1(d - eta) * t0);
        }
        out.gap = std::max(out.gap, std::abs(out.first[j] - out.second[j]) / std::abs(v0));
    }
    return out;
}

LocusReport locus_residual(const PoleConfig& cfg, const ThetaEvaluator& ev, const MarginOptions& opts)
{
    require_margin(cfg, ev, opts);
    LocusReport rep{raw_locus(cfg.xs, ev), 0.0};
    for (const cplx& r : rep.residuals)
        rep.max_norm = std::max(rep.max_norm, std::abs(r));
    return rep;
}

FlowTrajectory integrate_flow(const PoleConfig& cfg0, double t_end, double dt, const ThetaEvaluator& ev,
                              const FlowOptions& opts)
{
    if (!(dt > 0.0) || !std::isfinite(t_end))
        throw Error(ErrorKind::invalid_argument, "flow needs dt > 0 and a finite end time");
    if (cfg0.xs.empty())
        throw Error(ErrorKind::invalid_argument, "flow needs at least one pole");

    FlowTrajectory traj;
    auto halt = [&](ErrorKind kind, const std::string& msg) {
        if (opts.throw_on_halt)
            throw Error(kind, msg);
        traj.halted = true;
        traj.halt_kind = kind;
        traj.halt_message = msg;
        return traj;
    };

    PoleVelocities v;
    try {
        v = pole_rhs(cfg0, ev, opts.margin);
    } catch (const Error& e) {
        return halt(e.kind(), e.detail());
    }
    if (v.gap >= opts.tol_locus)
        return halt(ErrorKind::off_locus, "initial configuration is off the locus (gap " + format_number(v.gap) +
                                              " >= " + format_number(opts.tol_locus) + ")");
    traj.samples.push_back({cfg0.t, cfg0.xs, v.gap, pole_margin(cfg0, ev).margin});

    const double span = t_end - cfg0.t;
    const double direction = span >= 0.0 ? 1.0 : -1.0;
    const long full_steps = static_cast<long>(std::floor(std::abs(span) / dt + 1e-9));
    const double remainder = std::abs(span) - double(full_steps) * dt;
    const long steps = full_steps + (remainder > 1e-12 * dt ? 1 : 0);

    PoleConfig cfg = cfg0;
    const std::size_t n = cfg.xs.size();
    auto advanced = [&](const std::vector<cplx>& k, double h) {
        PoleConfig c = cfg;
        for (std::size_t j = 0; j < n; ++j)
            c.xs[j] += h * k[j];
        return c;
    };
    for (long step = 0; step < steps; ++step) {
        const double h = direction * (step < full_steps ? dt : remainder);
        try {
            const auto k1 = pole_rhs(cfg, ev, opts.margin).first;
            const auto k2 = pole_rhs(advanced(k1, 0.5 * h), ev, opts.margin).first;
            const auto k3 = pole_rhs(advanced(k2, 0.5 * h), ev, opts.margin).first;
            const auto k4 = pole_rhs(advanced(k3, h), ev, opts.margin).first;
            for (std::size_t j = 0; j < n; ++j)
                cfg.xs[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            cfg.t = step + 1 == steps ? t_end : cfg.t + h;
            v = pole_rhs(cfg, ev, opts.margin);
        } catch (const Error& e) {
            return halt(e.kind(), e.detail() + " at t = " + format_number(cfg.t));
        }
        traj.samples.push_back({cfg.t, cfg.xs, v.gap, pole_margin(cfg, ev).margin});
        if (v.gap > 100.0 * opts.tol_locus)
            return halt(ErrorKind::locus_drift,
                        "locus gap " + format_number(v.gap) + " exceeds 100 tol_locus at t = " + format_number(cfg.t));
    }
    return traj;
}

std::optional<LocusSearchResult> find_locus_config(int ell, const ThetaEvaluator& ev, const LocusSearchOptions& opts)
{
    if (ell < 2)
        throw Error(ErrorKind::invalid_argument, "locus search needs ell >= 2 (ell = 1 is trivially on the locus)");
    const std::vector<cplx> base = degenerate_config(ell, ev.eta()).xs;
    const Eigen::Index n = static_cast<Eigen::Index>(base.size());

    // x_0 is pinned to remove the translation symmetry.
    auto unpack = [&](const Eigen::VectorXcd& y) {
        std::vector<cplx> xs(n);
        xs[0] = base[0];
        for (Eigen::Index i = 1; i < n; ++i)
            xs[i] = y(i - 1);
        return xs;
    };
    auto residual_vec = [&](const Eigen::VectorXcd& y, Eigen::VectorXcd& r) {
        try {
            const auto res = raw_locus(unpack(y), ev);
            r = Eigen::Map<const Eigen::VectorXcd>(res.data(), n);
            return r.allFinite();
        } catch (const Error&) {
            return false;
        }
    };

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int attempt = 0; attempt < opts.attempts; ++attempt) {
        Eigen::VectorXcd y(n - 1);
        for (Eigen::Index i = 1; i < n; ++i)
            y(i - 1) = base[i] + opts.perturbation * cplx(unit(rng), unit(rng));
        Eigen::VectorXcd r;
        if (!residual_vec(y, r))
            continue;
        double cost = r.squaredNorm();
        double lambda = 1e-3;
        for (int iter = 0; iter < opts.max_iter && r.cwiseAbs().maxCoeff() >= opts.tol && lambda < 1e12; ++iter) {
            Eigen::MatrixXcd jac(n, n - 1);
            const double h = 1e-6;
            bool ok = true;
            for (Eigen::Index c = 0; c < n - 1 && ok; ++c) {
                Eigen::VectorXcd yp = y, ym = y, rp, rm;
                yp(c) += h;
                ym(c) -= h;
                ok = residual_vec(yp, rp) && residual_vec(ym, rm);
                if (ok)
                    jac.col(c) = (rp - rm) / (2.0 * h);
            }
            if (!ok)
                break;
            const Eigen::MatrixXcd normal = jac.adjoint() * jac;
            const Eigen::VectorXcd grad = jac.adjoint() * r;
            bool improved = false;
            while (!improved && lambda < 1e12) {
                Eigen::MatrixXcd damped = normal;
                damped.diagonal().array() += lambda * (1.0 + normal.diagonal().real().array());
                const Eigen::VectorXcd step = damped.ldlt().solve(-grad);
                Eigen::VectorXcd trial_r;
                const Eigen::VectorXcd trial = y + step;
                if (residual_vec(trial, trial_r) && trial_r.squaredNorm() < cost) {
                    y = trial;
                    r = trial_r;
                    cost = r.squaredNorm();
                    lambda = std::max(lambda / 3.0, 1e-12);
                    improved = true;
                } else {
                    lambda *= 4.0;
                }
            }
        }
        if (r.cwiseAbs().maxCoeff() >= opts.tol)
            continue;
        PoleConfig cfg{unpack(y), 0.0};
        if (pole_margin(cfg, ev).margin < opts.margin.tol_margin)
            continue;
        return LocusSearchResult{cfg, r.cwiseAbs().maxCoeff(), attempt};
    }
    return std::nullopt;
}

} // namespace lame_spectra
