// SPDX-License-Identifier: Apache-2.0

#include "lame_spectra/curve.hpp"

#include "lame_spectra/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <optional>

namespace lame_spectra {

std::vector<EPoly> a_polys_recurrence(const LameContext& ctx)
{
    const int ell = ctx.ell();
    if (ell < 1)
        throw Error(ErrorKind::invalid_argument, "A-polynomials need ell >= 1");
    const auto& nb = ctx.numbers();
    std::vector<EPoly> a(ell + 2);
    a[ell + 1] = EPoly();
    a[ell] = EPoly::constant(1.0);
    // A_{ell-s-1} = [ell-s]/[2ell-s] E A_{ell-s} + [s]/[2ell-s] A_{ell-s+1}
    for (int s = 0; s < ell; ++s) {
        const cplx denom = nb.bracket_nonzero(2 * ell - s);
        a[ell - s - 1] = a[ell - s].times_E() * (nb.bracket(ell - s) / denom) + a[ell - s + 1] * (nb.bracket(s) / denom);
    }
    a.pop_back();
    return a;
}

cplx a_polys_determinant(int s, cplx E, const LameContext& ctx)
{
    const int ell = ctx.ell();
    if (s < 0 || s > ell)
        throw Error(ErrorKind::invalid_argument, "need 0 <= s <= ell");
    if (s == 0)
        return 1.0;
    const auto& nb = ctx.numbers();
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(s, s);
    for (int i = 1; i <= s; ++i) {
        t(i - 1, i - 1) = E;
        const cplx denom = nb.bracket_nonzero(ell + 1 - i);
        if (i < s)
            t(i - 1, i) = nb.bracket(-i) / denom;
        if (i > 1)
            t(i - 1, i - 2) = nb.bracket(2 * ell + 2 - i) / denom;
    }
    return nb.binom(ell, s) / nb.binom(2 * ell, s) * t.determinant();
}

CurveEquations curve_equations(const CurvePoint& pt, const LameContext& ctx, const std::vector<EPoly>& a_polys)
{
    const int ell = ctx.ell();
    const auto& nb = ctx.numbers();
    const auto& ev = ctx.theta();
    const cplx eta = ctx.eta();
    const cplx inv_k = 1.0 / pt.K;

    CurveEquations out{0.0, 0.0, 0.0, 0.0};
    cplx k_power{1.0};
    for (int j = 0; j <= ell + 1; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        const cplx base = sign * k_power * ev.theta1(pt.zeta - double(j) * eta);
        if (j <= ell) {
            const cplx term = base * nb.binom(ell, j) * a_polys[j](pt.E);
            out.first += term;
            out.scale_first += std::abs(term);
        }
        const cplx term2 = base * nb.bracket(j - 1) * nb.binom(ell + 1, j) * a_polys[std::abs(j - 1)](pt.E);
        out.second += term2;
        out.scale_second += std::abs(term2);
        k_power *= inv_k;
    }
    if (out.scale_first == 0.0)
        out.scale_first = 1.0;
    if (out.scale_second == 0.0)
        out.scale_second = 1.0;
    return out;
}

CurveEquations curve_equations(const CurvePoint& pt, const LameContext& ctx)
{
    return curve_equations(pt, ctx, a_polys_recurrence(ctx));
}

std::array<int, 4> BandEdgeSet::counts() const
{
    std::array<int, 4> c{};
    for (int a = 0; a < 4; ++a) {
        for (const auto& r : by_label[a])
            c[a] += r.multiplicity;
    }
    return c;
}

int BandEdgeSet::total() const
{
    const auto c = counts();
    return c[0] + c[1] + c[2] + c[3];
}

std::vector<cplx> BandEdgeSet::values() const
{
    std::vector<cplx> out;
    for (const auto& lab : by_label) {
        for (const auto& r : lab)
            out.push_back(r.value);
    }
    return out;
}

std::array<EPoly, 2> edge_polynomials(int a, const LameContext& ctx, const std::vector<EPoly>& a_polys,
                                      double trim_tol)
{
    if (a < 1 || a > 4)
        throw Error(ErrorKind::invalid_argument, "edge label must be in 1..4");
    const int ell = ctx.ell();
    const int n = ctx.N();
    const auto& nb = ctx.numbers();
    const auto& ev = ctx.theta();
    const cplx eta = ctx.eta();

    std::array<EPoly, 2> poly;
    std::array<std::vector<double>, 2> abs_scale{std::vector<double>(ell + 1, 0.0), std::vector<double>(ell + 1, 0.0)};
    auto accumulate = [&](int which, const EPoly& p, cplx weight) {
        const EPoly term = p * weight;
        poly[which] += term;
        for (int i = 0; i <= term.degree(); ++i)
            abs_scale[which][i] += std::abs(term.coeff(i));
    };
    for (int j = 0; j <= ell + 1; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        const cplx weight = sign * ev.theta(a, double(n - j) * eta);
        if (j <= ell)
            accumulate(0, a_polys[j], weight * nb.binom(ell, j));
        accumulate(1, a_polys[std::abs(j - 1)], weight * nb.bracket(j - 1) * nb.binom(ell + 1, j));
    }
    for (int which = 0; which < 2; ++which) {
        std::vector<cplx> c = poly[which].coeffs();
        const double floor = 1e-3 * trim_tol * *std::max_element(abs_scale[which].begin(), abs_scale[which].end());
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (std::abs(c[i]) <= trim_tol * abs_scale[which][i] + floor)
                c[i] = 0.0;
        }
        poly[which] = EPoly(std::move(c)).trimmed(0.0);
    }
    return poly;
}

BandEdgeSet band_edges(const LameContext& ctx, const BandEdgeOptions& opts)
{
    const auto a_polys = a_polys_recurrence(ctx);
    BandEdgeSet out;
    for (int a = 1; a <= 4; ++a) {
        const auto polys = edge_polynomials(a, ctx, a_polys, opts.trim_tol);
        const EPoly* rooted = &polys[0];
        const EPoly* other = &polys[1];
        if (polys[0].is_zero()) {
            std::swap(rooted, other);
            out.notes.push_back("label " + std::to_string(a) + ": first polynomial vanishes identically");
        }
        if (rooted->is_zero()) {
            out.ambiguous = true;
            out.notes.push_back("label " + std::to_string(a) + ": both polynomials vanish identically");
            continue;
        }

        std::vector<EdgeRoot> common;
        for (const cplx& r : rooted->roots()) {
            double res = 0.0;
            if (!other->is_zero()) {
                const double s = other->abs_eval(r);
                res = s > 0.0 ? std::abs((*other)(r)) / s : 0.0;
            }
            if (res < opts.match_tol) {
                common.push_back({r, 1, res});
            } else if (res < opts.reject_tol) {
                out.ambiguous = true;
                out.notes.push_back("label " + std::to_string(a) + ": root with intermediate match residual " +
                                    format_number(res));
            }
        }

        // Merge near-coincident roots into clusters.
        std::vector<EdgeRoot> clusters;
        for (const auto& r : common) {
            auto it = std::find_if(clusters.begin(), clusters.end(), [&](const EdgeRoot& c) {
                return std::abs(c.value - r.value) <= opts.cluster_tol * std::max(1.0, std::abs(r.value));
            });
            if (it == clusters.end()) {
                clusters.push_back(r);
            } else {
                it->value = (it->value * double(it->multiplicity) + r.value) / double(it->multiplicity + 1);
                it->multiplicity += 1;
                it->match_residual = std::max(it->match_residual, r.match_residual);
            }
        }
        std::sort(clusters.begin(), clusters.end(),
                  [](const EdgeRoot& x, const EdgeRoot& y) { return x.value.real() < y.value.real(); });
        for (const auto& c : clusters) {
            if (c.multiplicity > 1)
                out.notes.push_back("label " + std::to_string(a) + ": root cluster of size " +
                                    std::to_string(c.multiplicity));
            out.full.push_back(c.value);
            out.full.push_back(-c.value);
        }
        out.by_label[a - 1] = std::move(clusters);
    }
    std::sort(out.full.begin(), out.full.end(), [](cplx x, cplx y) { return x.real() < y.real(); });
    return out;
}

std::array<int, 4> expected_edge_counts(int ell)
{
    if (ell < 1)
        throw Error(ErrorKind::invalid_argument, "ell >= 1 required");
    if (ell % 2 == 1)
        return {(ell - 1) / 2, (ell + 1) / 2, (ell + 1) / 2, (ell + 1) / 2};
    return {ell / 2 + 1, ell / 2, ell / 2, ell / 2};
}

std::array<cplx, 3> closed_form_edges_ell1(const ThetaEvaluator& ev)
{
    const cplx eta = ev.eta();
    std::array<cplx, 3> out;
    // {alpha, beta, gamma} cyclic in {1, 2, 3}; E_alpha lands in label alpha + 1.
    for (int alpha = 1; alpha <= 3; ++alpha) {
        const int beta = alpha % 3 + 1;
        const int gamma = beta % 3 + 1;
        out[alpha - 1] = 2.0 * ev.theta(beta + 1, eta) * ev.theta(gamma + 1, eta) /
                         (ev.theta(beta + 1, 0.0) * ev.theta(gamma + 1, 0.0));
    }
    return out;
}

ClosedFormsEll2 closed_form_edges_ell2(const ThetaEvaluator& ev)
{
    const cplx eta = ev.eta();
    const cplx b2 = ebracket(2, ev);
    const cplx b4 = ebracket(4, ev);
    ClosedFormsEll2 out;
    // [2]E^2 + [2]^3 E + 2[4] = 0
    const cplx disc = std::sqrt(b2 * b2 * b2 * b2 * b2 * b2 - 8.0 * b2 * b4);
    out.printed_quadratic_roots = {(-b2 * b2 * b2 + disc) / (2.0 * b2), (-b2 * b2 * b2 - disc) / (2.0 * b2)};
    const cplx r = ev.theta1(2.0 * eta) / ev.theta1(eta);
    const cplx inner = std::sqrt(r * r * r * r - 8.0 * ev.theta1(4.0 * eta) / ev.theta1(2.0 * eta));
    out.displayed_formula = {0.5 * (r * r + inner), 0.5 * (r * r - inner)};
    for (int a = 2; a <= 4; ++a) {
        out.labels[a - 2] =
            ev.theta1(2.0 * eta) * ev.theta(a, 2.0 * eta) / (ev.theta1(eta) * ev.theta(a, eta));
    }
    return out;
}

CurvePoint edge_curve_point(int a, cplx E, const LameContext& ctx)
{
    const cplx base = double(ctx.N()) * ctx.eta();
    const cplx tau = ctx.tau();
    switch (a) {
    case 1: return {base, 1.0, E};
    case 2: return {base + 0.5, 1.0, E};
    case 3: return {base + 0.5 * (1.0 + tau), std::exp(pi * I * ctx.eta()), E};
    case 4: return {base + 0.5 * tau, std::exp(pi * I * ctx.eta()), E};
    default: throw Error(ErrorKind::invalid_argument, "edge label must be in 1..4");
    }
}

CurveCoeffs curve_coeffs(const LameContext& ctx)
{
    const int ell = ctx.ell();
    if (ell < 1 || ell > 24)
        throw Error(ErrorKind::invalid_argument, "curve coefficients need 1 <= ell <= 24");
    const auto& nb = ctx.numbers();
    CurveCoeffs out;
    out.C.assign(ctx.N() + 1, 0.0);
    for (unsigned mask = 0; mask < (1u << ell); ++mask) {
        int sigma = 0;
        cplx product{1.0};
        for (int k = 1; k <= ell; ++k) {
            if (!(mask & (1u << (k - 1))))
                continue;
            sigma += k;
            for (int kp = 1; kp <= ell; ++kp) {
                if (mask & (1u << (kp - 1)))
                    continue;
                product *= nb.bracket(k + kp) / nb.bracket_nonzero(std::abs(k - kp));
            }
        }
        out.C[sigma] += product;
    }
    return out;
}

ScaledValue bloch_relation(cplx zeta, cplx K, const LameContext& ctx, const CurveCoeffs& coeffs)
{
    const int n = ctx.N();
    const auto& ev = ctx.theta();
    const cplx k2 = K * K;
    ScaledValue out{0.0, 0.0};
    for (int j = 0; j <= n; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        const cplx term = sign * coeffs.C[j] * ev.theta1(zeta - 2.0 * double(j) * ctx.eta()) * std::pow(k2, n - j);
        out.value += term;
        out.scale += std::abs(term);
    }
    if (out.scale == 0.0)
        out.scale = 1.0;
    return out;
}

ScaledValue bloch_relation(cplx zeta, cplx K, const LameContext& ctx)
{
    return bloch_relation(zeta, K, ctx, curve_coeffs(ctx));
}

cplx bloch_determinant(cplx zeta, cplx K, const LameContext& ctx)
{
    const int ell = ctx.ell();
    const auto& nb = ctx.numbers();
    const auto& ev = ctx.theta();
    const double sign = (ell % 2 == 1) ? 1.0 : -1.0; // (-1)^{ell+1}
    Eigen::MatrixXcd m(ell, ell);
    for (int a = 1; a <= ell; ++a) {
        cplx weight = sign * ev.theta1(2.0 * double(a) * ctx.eta());
        for (int j = 1; j <= ell; ++j) {
            if (j != a)
                weight *= nb.bracket(a + j) / nb.bracket_nonzero(a - j);
        }
        for (int b = 1; b <= ell; ++b) {
            m(a - 1, b - 1) = weight * phi(-double(a + b) * ctx.eta(), zeta, ev);
            if (a == b)
                m(a - 1, b - 1) += std::pow(K, 2 * a);
        }
    }
    return m.determinant();
}

IdentityPair cauchy_det(const std::vector<cplx>& xs, cplx zeta, const ThetaEvaluator& ev)
{
    const int n = static_cast<int>(xs.size());
    if (n < 1)
        throw Error(ErrorKind::invalid_argument, "cauchy_det needs at least one point");
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            m(i, j) = ev.theta1(xs[i] + xs[j] + zeta) / ev.theta1_nonzero(xs[i] + xs[j], "cauchy_det");
    }
    cplx sum{0.0};
    cplx rhs = std::pow(ev.theta1(zeta), n - 1);
    for (int i = 0; i < n; ++i) {
        sum += xs[i];
        rhs /= ev.theta1_nonzero(2.0 * xs[i], "cauchy_det");
    }
    rhs *= ev.theta1(zeta + 2.0 * sum);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const cplx ratio = ev.theta1(xs[i] - xs[j]) / ev.theta1_nonzero(xs[i] + xs[j], "cauchy_det");
            rhs *= ratio * ratio;
        }
    }
    return {m.determinant(), rhs};
}

IdentityPair weyl_denominator_check(int ell, cplx z, cplx q)
{
    if (ell < 1 || ell > 24)
        throw Error(ErrorKind::invalid_argument, "weyl_denominator_check needs 1 <= ell <= 24");
    const cplx qh = std::sqrt(q);
    const cplx unit = qh - 1.0 / qh;
    if (std::abs(unit) < 1e-14)
        throw Error(ErrorKind::invalid_argument, "q = 1 makes the q-numbers degenerate");
    auto qnum = [&](int j) {
        const cplx value = (std::pow(qh, j) - std::pow(qh, -j)) / unit;
        if (std::abs(value) < 1e-14)
            throw Error(ErrorKind::torsion_eta, "q-number (" + std::to_string(j) + ")_q vanishes");
        return value;
    };

    cplx lhs{0.0};
    for (unsigned mask = 0; mask < (1u << ell); ++mask) {
        int sigma = 0;
        cplx product{1.0};
        for (int k = 1; k <= ell; ++k) {
            if (!(mask & (1u << (k - 1))))
                continue;
            sigma += k;
            for (int kp = 1; kp <= ell; ++kp) {
                if (!(mask & (1u << (kp - 1))))
                    product *= qnum(k + kp) / qnum(std::abs(k - kp));
            }
        }
        lhs += std::pow(z, sigma) * product;
    }
    cplx rhs{1.0};
    for (int j = 1; j <= ell; ++j) {
        for (int k = j; k <= ell; ++k)
            rhs *= 1.0 + z * std::pow(q, j + k - ell - 1);
    }
    return {lhs, rhs};
}

namespace {

// Cofactor matrix: cof(i, j) = (-1)^{i+j} det(minor_ij); d det A = sum cof .* dA.
Eigen::MatrixXcd cofactors(const Eigen::MatrixXcd& a)
{
    const Eigen::Index n = a.rows();
    Eigen::MatrixXcd cof(n, n);
    if (n == 1) {
        cof(0, 0) = 1.0;
        return cof;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            Eigen::MatrixXcd minor(n - 1, n - 1);
            for (Eigen::Index r = 0, mr = 0; r < n; ++r) {
                if (r == i)
                    continue;
                for (Eigen::Index c = 0, mc = 0; c < n; ++c) {
                    if (c == j)
                        continue;
                    minor(mr, mc++) = a(r, c);
                }
                ++mr;
            }
            cof(i, j) = (((i + j) % 2 == 0) ? 1.0 : -1.0) * minor.determinant();
        }
    }
    return cof;
}

Eigen::MatrixXcd without_row(const Eigen::MatrixXcd& m, int row)
{
    Eigen::MatrixXcd out(m.rows() - 1, m.cols());
    for (int i = 0, r = 0; i < m.rows(); ++i) {
        if (i != row)
            out.row(r++) = m.row(i);
    }
    return out;
}

double merit(const CurvePoint& pt, const LameContext& ctx)
{
    try {
        return residual(pt, ctx).scaled_max();
    } catch (const Error&) {
        return 1e300;
    }
}

} // namespace

CurveSolveResult solve_curve_point(CurveFix fix, const CurvePoint& seed, const LameContext& ctx,
                                   const CurveSolveOptions& opts)
{
    const CurveVariable v1 = fix == CurveFix::zeta ? CurveVariable::K : CurveVariable::zeta;
    const CurveVariable v2 = fix == CurveFix::zeta ? CurveVariable::E : CurveVariable::K;
    auto get = [](const CurvePoint& p, CurveVariable v) -> cplx {
        return v == CurveVariable::zeta ? p.zeta : (v == CurveVariable::K ? p.K : p.E);
    };
    auto set = [](CurvePoint& p, CurveVariable v, cplx value) {
        (v == CurveVariable::zeta ? p.zeta : (v == CurveVariable::K ? p.K : p.E)) = value;
    };

    CurvePoint pt = seed;
    double current = merit(pt, ctx);
    if (current >= 1e300)
        throw Error(ErrorKind::pole_proximity, "curve solver seed sits on a pole");
    for (int iter = 0; iter <= opts.max_iter; ++iter) {
        if (current < opts.tol)
            return {pt, iter, current};
        if (iter == opts.max_iter)
            break;

        const Eigen::MatrixXcd m = build_M(pt, ctx);
        const Eigen::MatrixXcd d1 = build_M_derivative(pt, ctx, v1);
        const Eigen::MatrixXcd d2 = build_M_derivative(pt, ctx, v2);
        Eigen::Matrix2cd jac;
        Eigen::Vector2cd f;
        for (int r = 0; r < 2; ++r) {
            const Eigen::MatrixXcd a = without_row(m, r);
            const Eigen::MatrixXcd cof = cofactors(a);
            f(r) = a.determinant();
            jac(r, 0) = (cof.array() * without_row(d1, r).array()).sum();
            jac(r, 1) = (cof.array() * without_row(d2, r).array()).sum();
        }
        // Singularity is judged on the column-equilibrated Jacobian against its row Hadamard bound,
        // so rescaling either coordinate or either equation leaves the verdict unchanged.
        Eigen::Matrix2cd eq = jac;
        bool degenerate = false;
        for (int c = 0; c < 2; ++c) {
            const double col = eq.col(c).cwiseAbs().maxCoeff();
            degenerate = degenerate || !(col > 0.0);
            if (col > 0.0)
                eq.col(c) /= col;
        }
        const double hadamard = eq.row(0).norm() * eq.row(1).norm();
        if (degenerate || !(hadamard > 0.0) || std::abs(eq.determinant()) < 1e-14 * hadamard)
            throw Error(ErrorKind::singular_jacobian, "curve Jacobian is singular (near a branch point?)");
        const Eigen::Vector2cd step = jac.partialPivLu().solve(-f);

        double lambda = 1.0;
        CurvePoint trial = pt;
        double trial_merit = 0.0;
        for (int h = 0; h <= opts.max_halvings; ++h) {
            trial = pt;
            set(trial, v1, get(pt, v1) + lambda * step(0));
            set(trial, v2, get(pt, v2) + lambda * step(1));
            trial_merit = merit(trial, ctx);
            if (trial_merit < current)
                break;
            lambda *= 0.5;
        }
        if (trial_merit >= 1e300)
            throw Error(ErrorKind::non_convergence, "curve solver stepped onto a pole");
        const double step_size = lambda * step.norm();
        pt = trial;
        current = trial_merit;
        if (step_size < 1e-15 * (1.0 + std::abs(get(pt, v1)) + std::abs(get(pt, v2))) && current < 1e3 * opts.tol)
            return {pt, iter + 1, current};
    }
    throw Error(ErrorKind::non_convergence,
                "curve solver did not converge in " + std::to_string(opts.max_iter) + " iterations (residual " +
                    format_number(current) + ")");
}

std::vector<CurvePoint> find_curve_points(cplx zeta, const LameContext& ctx, const CurveSolveOptions& opts)
{
    const int ell = ctx.ell();
    const double radii[] = {0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0};
    const int angles = 12;
    const std::size_t seeds = std::size(radii) * angles;
    // One slot per (seed, eigenvalue); filled concurrently, merged in seed order.
    std::vector<std::vector<std::optional<CurvePoint>>> slots(seeds);
    parallel_for(seeds, [&](std::size_t idx) {
        const double r = radii[idx / angles];
        const int t = static_cast<int>(idx % angles);
        const cplx K = std::polar(r, 2.0 * pi * (t + 0.25) / angles);
        Eigen::MatrixXcd b;
        try {
            b = without_row(build_M({zeta, K, 0.0}, ctx), 0);
        } catch (const Error&) {
            return;
        }
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(b, false);
        auto& out = slots[idx];
        out.resize(static_cast<std::size_t>(ell));
        for (Eigen::Index e = 0; e < ell; ++e) {
            try {
                out[static_cast<std::size_t>(e)] =
                    solve_curve_point(CurveFix::zeta, {zeta, K, es.eigenvalues()(e)}, ctx, opts).point;
            } catch (const Error&) {
            }
        }
    });

    std::vector<CurvePoint> found;
    for (const auto& slot : slots) {
        for (const auto& candidate : slot) {
            if (!candidate)
                continue;
            const CurvePoint& p = *candidate;
            if (!(std::abs(p.K) > 1e-4 && std::abs(p.K) < 1e4))
                continue;
            const bool duplicate = std::any_of(found.begin(), found.end(), [&](const CurvePoint& q) {
                return std::abs(q.K - p.K) <= 1e-7 * (1.0 + std::abs(p.K)) &&
                       std::abs(q.E - p.E) <= 1e-7 * (1.0 + std::abs(p.E));
            });
            if (!duplicate)
                found.push_back(p);
        }
    }
    return found;
}

} // namespace lame_spectra
