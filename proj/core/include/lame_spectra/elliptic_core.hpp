// SPDX-License-Identifier: Apache-2.0

#ifndef LAME_SPECTRA_ELLIPTIC_CORE_HPP
#define LAME_SPECTRA_ELLIPTIC_CORE_HPP

#include <complex>
#include <string_view>

#include "lame_spectra/error.hpp"

namespace lame_spectra {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I{0.0, 1.0};

/// Modular parameter, lattice spacing and truncation tolerance. Every
/// computation in the library is parametrized by one of these.
struct EllipticParams {
    cplx tau{0.0, 1.0};
    cplx eta{0.1, 0.0};
    double tol = 1e-14;

    /// Throws Error(divergence) for Im(tau) <= 0 and
    /// Error(invalid_argument) for eta == 0 or tol <= 0.
    void validate() const;
};

enum class HalfPeriod { one_half, tau_half, one_plus_tau_half };

/// theta_a(x) = mantissa * exp(log_factor); produced by argument reduction.
struct ReducedTheta {
    cplx mantissa;
    cplx log_factor;

    cplx value() const { return mantissa * std::exp(log_factor); }
};

/// Jacobi theta functions theta_1..theta_4 with the sign conventions
///
///   theta_1(x) = -sum_k exp(pi i tau (k+1/2)^2 + 2 pi i (x+1/2)(k+1/2)),
///   theta_2(x) =  sum_k exp(pi i tau (k+1/2)^2 + 2 pi i x (k+1/2)),
///   theta_3(x) =  sum_k exp(pi i tau k^2 + 2 pi i x k),
///   theta_4(x) =  sum_k exp(pi i tau k^2 + 2 pi i (x+1/2) k),
///
/// so theta_1(x) = 2 sin(pi x) e^{pi i tau/4} + ..., theta_1(x+1) = -theta_1(x)
/// and theta_1(x+tau) = -e^{-pi i tau - 2 pi i x} theta_1(x).
///
/// The series is truncated at |k| <= series_cutoff(), the smallest N with
/// |q|^{N^2} < 1e-2 * tol where q = e^{pi i tau}. Arguments with large
/// imaginary part shift the peak of the summand; the cutoff is widened by
/// ceil(|Im x| / Im tau) for such arguments. No reduction to the fundamental
/// cell is performed unless theta_reduced() is called.
///
/// Instances are immutable and may be shared between threads.
class ThetaEvaluator {
public:
    explicit ThetaEvaluator(const EllipticParams& params);
    ThetaEvaluator(const EllipticParams& params, int series_cutoff);

    const EllipticParams& params() const noexcept { return params_; }
    cplx tau() const noexcept { return params_.tau; }
    cplx eta() const noexcept { return params_.eta; }
    double tol() const noexcept { return params_.tol; }
    cplx nome() const noexcept { return nome_; }
    int series_cutoff() const noexcept { return cutoff_; }

    /// |q|^{1/4}: magnitude of the leading coefficient of theta_1 and theta_2.
    /// Pole-proximity and torsion thresholds are taken relative to it.
    double theta1_scale() const noexcept { return scale_; }

    cplx theta(int a, cplx x) const { return theta_derivative(a, x, 0); }
    cplx theta1(cplx x) const { return theta_derivative(1, x, 0); }

    /// d^order/dx^order theta_a(x), by term-wise differentiation.
    cplx theta_derivative(int a, cplx x, int order) const;

    cplx theta1_prime(cplx x) const { return theta_derivative(1, x, 1); }
    cplx theta1_prime_zero() const noexcept { return theta1_prime_zero_; }

    /// theta_1(x), throwing Error(pole_proximity) when |theta_1(x)| falls below
    /// tol * max(theta1_scale(), theta_magnitude_bound(1, x)). Use for every
    /// value that ends up in a denominator.
    cplx theta1_nonzero(cplx x, std::string_view context) const;

    /// theta_a(x + sign * shift) evaluated directly and through the half-period
    /// identities; throws Error(inconsistent) if the two routes disagree by more
    /// than 10 * tol (relative). Returns the direct value.
    cplx theta_halfshift(int a, cplx x, HalfPeriod shift, int sign = +1) const;

    /// Right-hand side of the half-period identity for theta_a(x + sign*shift).
    cplx theta_halfshift_identity(int a, cplx x, HalfPeriod shift, int sign = +1) const;

    /// Evaluate theta_a after reducing x to the cell |Re| <= 1/2,
    /// |Im| <= Im(tau)/2 with the quasi-periodicity factors carried in log form.
    ReducedTheta theta_reduced(int a, cplx x) const;

    /// -d^2/dx^2 log theta_1(x). Equals the Weierstrass function with periods
    /// 1 and tau up to an additive constant; no constant is added here.
    cplx weierstrass_p(cplx x) const;

    /// Sum of the absolute values of the series terms; the natural scale for
    /// round-off in theta_a(x).
    double theta_magnitude_bound(int a, cplx x) const;

    /// A copy with a different series cutoff (used for stability checks).
    ThetaEvaluator with_cutoff(int series_cutoff) const { return ThetaEvaluator(params_, series_cutoff); }

private:
    cplx series(int a, cplx x, int order, double* abs_sum) const;

    EllipticParams params_;
    cplx nome_;
    int cutoff_;
    double scale_;
    cplx theta1_prime_zero_;
};

/// Smallest N with |q|^{N^2} < 1e-2 * tol.
int default_series_cutoff(const EllipticParams& params);

cplx half_period_value(HalfPeriod shift, cplx tau);

} // namespace lame_spectra

#endif
