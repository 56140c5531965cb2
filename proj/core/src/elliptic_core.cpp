// SPDX-License-Identifier: Apache-2.0

#include "lame_spectra/elliptic_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace lame_spectra {

std::string format_number(double value)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::pole_proximity: return "pole proximity";
    case ErrorKind::torsion_eta: return "torsion eta";
    case ErrorKind::not_on_curve: return "not on curve";
    case ErrorKind::non_convergence: return "non-convergence";
    case ErrorKind::singular_jacobian: return "singular jacobian";
    case ErrorKind::inconsistent: return "inconsistent";
    case ErrorKind::lattice_collision: return "lattice collision";
    case ErrorKind::root_cluster: return "root cluster";
    case ErrorKind::margin_violation: return "margin violation";
    case ErrorKind::boundary_of_locus: return "boundary of locus";
    case ErrorKind::off_locus: return "off locus";
    case ErrorKind::locus_drift: return "locus drift";
    }
    return "unknown";
}

void EllipticParams::validate() const
{
    if (!(tau.imag() > 0.0))
        throw Error(ErrorKind::divergence, "theta series require Im(tau) > 0");
    if (eta == cplx(0.0))
        throw Error(ErrorKind::invalid_argument, "eta must be nonzero");
    if (!(tol > 0.0))
        throw Error(ErrorKind::invalid_argument, "tol must be positive");
}

int default_series_cutoff(const EllipticParams& params)
{
    params.validate();
    // log|q| = -pi Im(tau); need N^2 * pi Im(tau) > -log(1e-2 tol).
    const double target = -std::log(1e-2 * params.tol);
    const double per = pi * params.tau.imag();
    int n = static_cast<int>(std::ceil(std::sqrt(target / per)));
    return n < 1 ? 1 : n;
}

cplx half_period_value(HalfPeriod shift, cplx tau)
{
    switch (shift) {
    case HalfPeriod::one_half: return {0.5, 0.0};
    case HalfPeriod::tau_half: return 0.5 * tau;
    case HalfPeriod::one_plus_tau_half: return 0.5 * (1.0 + tau);
    }
    return {};
}

namespace {

void check_index(int a)
{
    if (a < 1 || a > 4)
        throw Error(ErrorKind::invalid_argument, "theta index must be in 1..4, got " + std::to_string(a));
}

} // namespace

ThetaEvaluator::ThetaEvaluator(const EllipticParams& params)
    : ThetaEvaluator(params, default_series_cutoff(params))
{
}

ThetaEvaluator::ThetaEvaluator(const EllipticParams& params, int series_cutoff)
    : params_(params), cutoff_(series_cutoff)
{
    params_.validate();
    if (cutoff_ < 1)
        throw Error(ErrorKind::invalid_argument, "series cutoff must be >= 1");
    nome_ = std::exp(I * pi * params_.tau);
    scale_ = std::pow(std::abs(nome_), 0.25);
    theta1_prime_zero_ = theta_derivative(1, cplx(0.0), 1);
}

cplx ThetaEvaluator::theta_derivative(int a, cplx x, int order) const
{
    return series(a, x, order, nullptr);
}

double ThetaEvaluator::theta_magnitude_bound(int a, cplx x) const
{
    double bound = 0.0;
    series(a, x, 0, &bound);
    return bound;
}

cplx ThetaEvaluator::series(int a, cplx x, int order, double* abs_sum) const
{
    check_index(a);
    if (order < 0)
        throw Error(ErrorKind::invalid_argument, "derivative order must be >= 0");

    const double nu_offset = (a == 1 || a == 2) ? 0.5 : 0.0;
    const double x_offset = (a == 1 || a == 4) ? 0.5 : 0.0;
    const cplx xs = x + x_offset;
    const cplx tau = params_.tau;

    const int widen = static_cast<int>(std::ceil(std::abs(x.imag()) / tau.imag()));
    const int kmax = cutoff_ + widen + order;

    cplx sum{0.0};
    for (int k = -kmax - 1; k <= kmax; ++k) {
        const double nu = k + nu_offset;
        cplx term = std::exp(I * pi * tau * (nu * nu) + 2.0 * I * pi * xs * nu);
        if (order > 0) {
            const cplx factor = 2.0 * I * pi * nu;
            cplx power{1.0};
            for (int p = 0; p < order; ++p)
                power *= factor;
            term *= power;
        }
        sum += term;
        if (abs_sum)
            *abs_sum += std::abs(term);
    }
    // Odd functions vanish exactly at the origin; the series only does so to round-off.
    const bool odd = (a == 1) != (order % 2 == 1);
    if (odd && x == cplx(0.0))
        return 0.0;
    return a == 1 ? -sum : sum;
}

cplx ThetaEvaluator::theta1_nonzero(cplx x, std::string_view context) const
{
    double bound = 0.0;
    const cplx value = series(1, x, 0, &bound);
    if (std::abs(value) < params_.tol * std::max(scale_, bound)) {
        throw Error(ErrorKind::pole_proximity,
                    std::string(context) + ": theta_1 vanishes at x = (" + format_number(x.real()) + ", " +
                        format_number(x.imag()) + ")");
    }
    return value;
}

cplx ThetaEvaluator::theta_halfshift_identity(int a, cplx x, HalfPeriod shift, int sign) const
{
    check_index(a);
    if (sign != 1 && sign != -1)
        throw Error(ErrorKind::invalid_argument, "half-shift sign must be +1 or -1");
    if (sign == -1) {
        // theta_a(x - s) = parity_a * theta_a(-x + s)
        const double parity = a == 1 ? -1.0 : 1.0;
        return parity * theta_halfshift_identity(a, -x, shift, +1);
    }

    const cplx e = std::exp(-0.25 * pi * I * params_.tau - pi * I * x);
    switch (shift) {
    case HalfPeriod::one_half:
        switch (a) {
        case 1: return theta(2, x);
        case 2: return -theta(1, x);
        case 3: return theta(4, x);
        default: return theta(3, x);
        }
    case HalfPeriod::tau_half:
        switch (a) {
        case 1: return I * e * theta(4, x);
        case 2: return e * theta(3, x);
        case 3: return e * theta(2, x);
        default: return I * e * theta(1, x);
        }
    case HalfPeriod::one_plus_tau_half:
        switch (a) {
        case 1: return e * theta(3, x);
        case 2: return -I * e * theta(4, x);
        case 3: return I * e * theta(1, x);
        default: return e * theta(2, x);
        }
    }
    return {};
}

cplx ThetaEvaluator::theta_halfshift(int a, cplx x, HalfPeriod shift, int sign) const
{
    const cplx direct = theta(a, x + double(sign) * half_period_value(shift, params_.tau));
    const cplx via = theta_halfshift_identity(a, x, shift, sign);
    const double scale = std::max(theta_magnitude_bound(a, x + double(sign) * half_period_value(shift, params_.tau)),
                                  std::abs(via));
    if (std::abs(direct - via) > 10.0 * params_.tol * scale) {
        throw Error(ErrorKind::inconsistent, "half-period identity mismatch for theta_" + std::to_string(a) +
                                                 "; series cutoff too small?");
    }
    return direct;
}

ReducedTheta ThetaEvaluator::theta_reduced(int a, cplx x) const
{
    check_index(a);
    const cplx tau = params_.tau;
    const double n = std::round(x.imag() / tau.imag());
    const cplx y = x - n * tau;
    const double m = std::round(y.real());
    const cplx xr = y - m;

    // theta_a(xr + m + n tau) = p^m s^n exp(-pi i tau n^2 - 2 pi i n xr) theta_a(xr)
    const bool p_negative = (a == 1 || a == 2);
    const bool s_negative = (a == 1 || a == 4);
    double sign_count = 0.0;
    if (p_negative)
        sign_count += m;
    if (s_negative)
        sign_count += n;
    const cplx log_factor = -I * pi * tau * (n * n) - 2.0 * I * pi * n * xr + I * pi * sign_count;
    return {theta(a, xr), log_factor};
}

cplx ThetaEvaluator::weierstrass_p(cplx x) const
{
    const cplx t0 = theta1_nonzero(x, "weierstrass_p");
    const cplx t1 = theta_derivative(1, x, 1);
    const cplx t2 = theta_derivative(1, x, 2);
    const cplx log_derivative = t1 / t0;
    return log_derivative * log_derivative - t2 / t0;
}

} // namespace lame_spectra
