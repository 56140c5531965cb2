// SPDX-License-Identifier: Apache-2.0

#include "lame_spectra/lame.hpp"

#include <algorithm>
#include <cmath>

namespace lame_spectra {

LameContext::LameContext(int ell, const ThetaEvaluator& ev)
    : ell_(ell), numbers_(ev, 4 * std::max(ell, 0) + 2)
{
    if (ell < 0)
        throw Error(ErrorKind::invalid_argument, "ell must be non-negative");
    for (int j = 1; j <= 2 * ell + 2; ++j)
        numbers_.bracket_nonzero(j);
}

BlochMultipliers bloch_multipliers(const CurvePoint& pt, const LameContext& ctx)
{
    const cplx log_k = std::log(pt.K);
    return {std::exp(log_k / ctx.eta()), std::exp(ctx.tau() * log_k / ctx.eta() - 2.0 * pi * I * pt.zeta)};
}

CurvePoint shift_by_tau(const CurvePoint& pt, const LameContext& ctx)
{
    return {pt.zeta + ctx.tau(), pt.K * std::exp(2.0 * pi * I * ctx.eta()), pt.E};
}

CurvePoint reflect(const CurvePoint& pt) { return {pt.zeta, -pt.K, -pt.E}; }

CurvePoint involution(const CurvePoint& pt, const LameContext& ctx)
{
    return {2.0 * double(ctx.N()) * ctx.eta() - pt.zeta, 1.0 / pt.K, pt.E};
}

cplx phi(cplx x, cplx zeta, const ThetaEvaluator& ev)
{
    return ev.theta1(zeta + x) / (ev.theta1_nonzero(x, "Phi") * ev.theta1_nonzero(zeta, "Phi"));
}

cplx gauge_factor(cplx x, const LameContext& ctx)
{
    cplx f{1.0};
    for (int j = 1; j <= ctx.ell(); ++j)
        f *= ctx.theta().theta1(x - double(j) * ctx.eta());
    return f;
}

cplx apply_L(const ComplexFn& Psi, cplx x, const LameContext& ctx)
{
    const auto& ev = ctx.theta();
    const cplx eta = ctx.eta();
    const double ell = ctx.ell();
    const cplx denom = ev.theta1_nonzero(x, "apply_L");
    return (ev.theta1(x - ell * eta) * Psi(x + eta) + ev.theta1(x + ell * eta) * Psi(x - eta)) / denom;
}

cplx ltilde_coefficient(cplx x, const LameContext& ctx)
{
    const auto& ev = ctx.theta();
    const cplx eta = ctx.eta();
    const double ell = ctx.ell();
    const cplx denom = ev.theta1_nonzero(x, "L~ coefficient") * ev.theta1_nonzero(x - eta, "L~ coefficient");
    return ev.theta1(x + ell * eta) * ev.theta1(x - (ell + 1.0) * eta) / denom;
}

cplx apply_Ltilde(const ComplexFn& psi, cplx x, const LameContext& ctx)
{
    return apply_Ltilde_shifted(psi, x, 0.0, ctx);
}

cplx apply_Ltilde_shifted(const ComplexFn& psi, cplx x, cplx shift, const LameContext& ctx)
{
    const cplx eta = ctx.eta();
    return psi(x + eta) + ltilde_coefficient(x + shift, ctx) * psi(x - eta);
}

namespace {

// theta_1(zeta - a eta) / theta_1(zeta) and its zeta-derivative.
cplx zeta_ratio(cplx zeta, int a, const LameContext& ctx, bool derivative)
{
    const auto& ev = ctx.theta();
    const cplx shifted = zeta - double(a) * ctx.eta();
    const cplx t0 = ev.theta1_nonzero(zeta, "residue matrix");
    if (!derivative)
        return ev.theta1(shifted) / t0;
    return ev.theta1_prime(shifted) / t0 - ev.theta1(shifted) * ev.theta1_prime(zeta) / (t0 * t0);
}

// Build M (mode 0) or one of its partials: 1 d/dzeta, 2 d/dK, 3 d/dE. In mode 0
// `magnitude`, when given, receives the entrywise sums of |contributions|.
Eigen::MatrixXcd assemble_M(const CurvePoint& pt, const LameContext& ctx, int mode,
                            Eigen::MatrixXd* magnitude = nullptr)
{
    const int ell = ctx.ell();
    if (ell < 1)
        throw Error(ErrorKind::invalid_argument, "the residue matrix needs ell >= 1");
    if (pt.K == cplx(0.0))
        throw Error(ErrorKind::invalid_argument, "K must be nonzero");
    const auto& nb = ctx.numbers();
    const cplx inv_k = 1.0 / pt.K;
    const cplx k_factor = mode == 2 ? -inv_k * inv_k : inv_k;

    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(ell + 1, ell);
    if (magnitude)
        *magnitude = Eigen::MatrixXd::Zero(ell + 1, ell);
    for (int i = 0; i <= ell; ++i) {
        for (int j = 1; j <= ell; ++j) {
            cplx v{0.0};
            double mag = 0.0;
            auto add = [&](cplx term) {
                v += term;
                mag += std::abs(term);
            };
            if (i == j - 1) {
                if (mode == 0)
                    add(pt.K);
                else if (mode == 2)
                    add(1.0);
            }
            if (i == j) {
                if (mode == 0)
                    add(-pt.E);
                else if (mode == 3)
                    add(-1.0);
            }
            if (i == j + 1 && (mode == 0 || mode == 2)) {
                add(k_factor * nb.bracket(j + ell + 1) * nb.bracket(j - ell) /
                    (nb.bracket_nonzero(j + 1) * nb.bracket_nonzero(j)));
            }
            const int delta = (i == 0 ? 1 : 0) - (i == 1 ? 1 : 0);
            if (delta != 0 && mode != 3) {
                const cplx weight = nb.bracket(i + ell) * nb.bracket(i - ell - 1) / nb.bracket_nonzero(j - i + 1);
                const cplx ratio = zeta_ratio(pt.zeta, j - i + 1, ctx, mode == 1);
                add(double(delta) * (mode == 1 ? inv_k : k_factor) * ratio * weight);
            }
            m(i, j - 1) = v;
            if (magnitude)
                (*magnitude)(i, j - 1) = mag;
        }
    }
    return m;
}

template <typename Matrix>
Matrix delete_row(const Matrix& m, int row)
{
    Matrix out(m.rows() - 1, m.cols());
    for (int i = 0, r = 0; i < m.rows(); ++i) {
        if (i == row)
            continue;
        out.row(r++) = m.row(i);
    }
    return out;
}

double hadamard_bound(const Eigen::MatrixXd& m)
{
    double bound = 1.0;
    for (int i = 0; i < m.rows(); ++i)
        bound *= m.row(i).norm();
    return bound > 0.0 ? bound : 1.0;
}

} // namespace

Eigen::MatrixXcd build_M(const CurvePoint& pt, const LameContext& ctx) { return assemble_M(pt, ctx, 0); }

Eigen::MatrixXd build_M_magnitude(const CurvePoint& pt, const LameContext& ctx)
{
    Eigen::MatrixXd magnitude;
    assemble_M(pt, ctx, 0, &magnitude);
    return magnitude;
}

Eigen::MatrixXcd build_M_derivative(const CurvePoint& pt, const LameContext& ctx, CurveVariable v)
{
    switch (v) {
    case CurveVariable::zeta: return assemble_M(pt, ctx, 1);
    case CurveVariable::K: return assemble_M(pt, ctx, 2);
    case CurveVariable::E: return assemble_M(pt, ctx, 3);
    }
    return {};
}

CurveResidual residual(const CurvePoint& pt, const LameContext& ctx)
{
    Eigen::MatrixXd magnitude;
    const Eigen::MatrixXcd m = assemble_M(pt, ctx, 0, &magnitude);
    return {delete_row(m, 0).determinant(), delete_row(m, 1).determinant(),
            hadamard_bound(delete_row(magnitude, 0)), hadamard_bound(delete_row(magnitude, 1))};
}

BlochCoeffs solve_bloch_coeffs(const CurvePoint& pt, const LameContext& ctx, double rank_tol)
{
    Eigen::MatrixXd magnitude;
    const Eigen::MatrixXcd m = assemble_M(pt, ctx, 0, &magnitude);
    const int ell = ctx.ell();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double top = magnitude.norm() > 0.0 ? magnitude.norm() : 1.0;
    BlochCoeffs out;
    out.sigma_min_rel = sv(ell - 1) / top;
    out.sigma_next_rel = ell >= 2 ? sv(ell - 2) / top : 1.0;
    if (out.sigma_min_rel > rank_tol) {
        throw Error(ErrorKind::not_on_curve,
                    "residue matrix has full rank (sigma_min / |M| = " + format_number(out.sigma_min_rel) + ")");
    }
    Eigen::VectorXcd v = svd.matrixV().col(ell - 1);
    Eigen::Index largest = 0;
    v.cwiseAbs().maxCoeff(&largest);
    v /= v(largest);
    out.s.assign(v.data(), v.data() + v.size());
    return out;
}

cplx build_psi(const CurvePoint& pt, const BlochCoeffs& coeffs, cplx x, const LameContext& ctx)
{
    const auto& ev = ctx.theta();
    const cplx eta = ctx.eta();
    cplx sum{0.0};
    for (std::size_t j = 1; j <= coeffs.s.size(); ++j)
        sum += coeffs.s[j - 1] * phi(x - double(j) * eta, pt.zeta, ev);
    return std::exp(x / eta * std::log(pt.K)) * sum;
}

cplx build_Psi(const CurvePoint& pt, const BlochCoeffs& coeffs, cplx x, const LameContext& ctx)
{
    const auto& ev = ctx.theta();
    const cplx eta = ctx.eta();
    const int ell = static_cast<int>(coeffs.s.size());
    std::vector<cplx> zeros(ell);
    for (int i = 1; i <= ell; ++i)
        zeros[i - 1] = ev.theta1(x - double(i) * eta);
    const cplx theta_zeta = ev.theta1_nonzero(pt.zeta, "Psi");
    cplx sum{0.0};
    for (int m = 1; m <= ell; ++m) {
        cplx term = coeffs.s[m - 1] * ev.theta1(x - double(m) * eta + pt.zeta) / theta_zeta;
        for (int i = 1; i <= ell; ++i) {
            if (i != m)
                term *= zeros[i - 1];
        }
        sum += term;
    }
    return std::exp(x / eta * std::log(pt.K)) * sum;
}

std::vector<cplx> apply_W_terms(const ComplexFn& Psi, cplx x, const LameContext& ctx)
{
    const auto& ev = ctx.theta();
    const auto& nb = ctx.numbers();
    const cplx eta = ctx.eta();
    const int ell = ctx.ell();

    cplx prefactor{1.0};
    for (int j = 0; j <= 2 * ell; ++j)
        prefactor *= ev.theta1(x + double(j - ell) * eta);

    std::vector<cplx> terms;
    terms.reserve(2 * ell + 2);
    for (int k = 0; k <= 2 * ell + 1; ++k) {
        cplx denom{1.0};
        for (int j = 0; j <= 2 * ell - k + 1; ++j)
            denom *= ev.theta1_nonzero(x + double(j) * eta, "W operator");
        for (int jp = 1; jp <= k; ++jp)
            denom *= ev.theta1_nonzero(x - double(jp) * eta, "W operator");
        const double step = 2 * ell - 2 * k + 1;
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        terms.push_back(sign * nb.binom(2 * ell + 1, k) * prefactor * ev.theta1(x + step * eta) / denom *
                        Psi(x + step * eta));
    }
    return terms;
}

cplx apply_W(const ComplexFn& Psi, cplx x, const LameContext& ctx)
{
    cplx sum{0.0};
    for (const cplx& t : apply_W_terms(Psi, x, ctx))
        sum += t;
    return sum;
}

double halton(int index, int base)
{
    double result = 0.0;
    double f = 1.0;
    while (index > 0) {
        f /= base;
        result += f * (index % base);
        index /= base;
    }
    return result;
}

WEigenvalue w_eigenvalue(const CurvePoint& pt, const BlochCoeffs& coeffs, const LameContext& ctx, double rel_tol)
{
    const auto& ev = ctx.theta();
    const cplx eta = ctx.eta();
    const cplx tau = ctx.tau();
    const int ell = ctx.ell();
    const ComplexFn Psi = [&](cplx y) { return build_Psi(pt, coeffs, y, ctx); };

    // Candidate points in the period cell, offset away from the real axis.
    struct Candidate {
        cplx x;
        cplx psi;
        double pole_distance;
    };
    std::vector<Candidate> candidates;
    for (int n = 1; n <= 60; ++n) {
        const cplx x = halton(n, 2) - 0.5 + (halton(n, 3) - 0.5) * tau + cplx(0.0137, 0.0071);
        double closest = 1e300;
        for (int j = -(2 * ell + 1); j <= 2 * ell + 1; ++j)
            closest = std::min(closest, std::abs(ev.theta1(x + double(j) * eta)));
        candidates.push_back({x, Psi(x), closest / ev.theta1_scale()});
    }
    std::vector<double> magnitudes;
    for (const auto& c : candidates)
        magnitudes.push_back(std::abs(c.psi));
    std::nth_element(magnitudes.begin(), magnitudes.begin() + magnitudes.size() / 2, magnitudes.end());
    const double typical = magnitudes[magnitudes.size() / 2];

    std::vector<cplx> ratios;
    std::vector<double> scales;
    for (const auto& c : candidates) {
        if (ratios.size() == 10)
            break;
        if (c.pole_distance < 1e-2 || std::abs(c.psi) < 1e-3 * typical)
            continue;
        const auto terms = apply_W_terms(Psi, c.x, ctx);
        cplx sum{0.0};
        double abs_sum = 0.0;
        for (const cplx& t : terms) {
            sum += t;
            abs_sum += std::abs(t);
        }
        ratios.push_back(sum / c.psi);
        scales.push_back(abs_sum / std::abs(c.psi));
    }
    if (ratios.size() < 3)
        throw Error(ErrorKind::inconsistent, "too few usable sample points for the W eigenvalue");

    // Complex median: the sample minimizing the summed distance to the others.
    std::size_t best = 0;
    double best_cost = 1e300;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        double cost = 0.0;
        for (const cplx& r : ratios)
            cost += std::abs(r - ratios[i]);
        if (cost < best_cost) {
            best_cost = cost;
            best = i;
        }
    }
    WEigenvalue out{ratios[best], 0.0, 0.0, static_cast<int>(ratios.size())};
    for (const cplx& r : ratios)
        out.spread = std::max(out.spread, std::abs(r - out.w));
    std::nth_element(scales.begin(), scales.begin() + scales.size() / 2, scales.end());
    out.scale = scales[scales.size() / 2];
    if (out.spread > rel_tol * out.scale) {
        throw Error(ErrorKind::inconsistent, "W Psi / Psi is not constant (spread " + format_number(out.spread) +
                                                 ", scale " + format_number(out.scale) + ")");
    }
    return out;
}

} // namespace lame_spectra
