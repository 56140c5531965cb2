// SPDX-License-Identifier: Apache-2.0

#ifndef LAME_SPECTRA_LAME_HPP
#define LAME_SPECTRA_LAME_HPP

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "lame_spectra/elliptic_numbers.hpp"

namespace lame_spectra {

using ComplexFn = std::function<cplx(cplx)>;

/// Integer ell, the theta evaluator and the brackets [0..4 ell + 2].
class LameContext {
public:
    LameContext(int ell, const ThetaEvaluator& ev);
    LameContext(int ell, const EllipticParams& params) : LameContext(ell, ThetaEvaluator(params)) {}

    int ell() const noexcept { return ell_; }
    /// N = ell (ell + 1) / 2.
    int N() const noexcept { return ell_ * (ell_ + 1) / 2; }
    const ThetaEvaluator& theta() const noexcept { return numbers_.theta(); }
    const EllipticNumbers& numbers() const noexcept { return numbers_; }
    cplx eta() const noexcept { return theta().eta(); }
    cplx tau() const noexcept { return theta().tau(); }

private:
    int ell_;
    EllipticNumbers numbers_;
};

/// Spectral parameters (zeta, K, E).
struct CurvePoint {
    cplx zeta;
    cplx K;
    cplx E;
};

/// B_1 = K^{1/eta}, B_tau = K^{tau/eta} e^{-2 pi i zeta}, principal branch of log K.
struct BlochMultipliers {
    cplx B1;
    cplx Btau;
};
BlochMultipliers bloch_multipliers(const CurvePoint& pt, const LameContext& ctx);

/// (zeta, K, E) -> (zeta + tau, K e^{2 pi i eta}, E)
CurvePoint shift_by_tau(const CurvePoint& pt, const LameContext& ctx);
/// (zeta, K, E) -> (zeta, -K, -E)
CurvePoint reflect(const CurvePoint& pt);
/// (zeta, K, E) -> (2 N eta - zeta, 1/K, E), the hyperelliptic involution.
CurvePoint involution(const CurvePoint& pt, const LameContext& ctx);

/// Phi(x, zeta) = theta_1(zeta + x) / (theta_1(x) theta_1(zeta)).
cplx phi(cplx x, cplx zeta, const ThetaEvaluator& ev);

/// f(x) = prod_{j=1..ell} theta_1(x - j eta); Psi = f psi.
cplx gauge_factor(cplx x, const LameContext& ctx);

/// (L Psi)(x) = theta_1(x - ell eta)/theta_1(x) Psi(x + eta) + theta_1(x + ell eta)/theta_1(x) Psi(x - eta).
cplx apply_L(const ComplexFn& Psi, cplx x, const LameContext& ctx);

/// Coefficient of psi(x - eta) in L~: theta_1(x+ell eta) theta_1(x-(ell+1)eta) / (theta_1(x) theta_1(x-eta)).
cplx ltilde_coefficient(cplx x, const LameContext& ctx);

/// (L~ psi)(x) = psi(x + eta) + ltilde_coefficient(x) psi(x - eta).
cplx apply_Ltilde(const ComplexFn& psi, cplx x, const LameContext& ctx);

/// psi(x + eta) + ltilde_coefficient(x + shift) psi(x - eta): L~ with its
/// coefficient translated by `shift` (tau/2 gives the continuum-limit form).
cplx apply_Ltilde_shifted(const ComplexFn& psi, cplx x, cplx shift, const LameContext& ctx);

/// The (ell+1) x ell residue matrix; rows i = 0..ell, columns j = 1..ell.
Eigen::MatrixXcd build_M(const CurvePoint& pt, const LameContext& ctx);

/// Entrywise sums of the magnitudes of the terms making up build_M: the
/// round-off scale of each entry.
Eigen::MatrixXd build_M_magnitude(const CurvePoint& pt, const LameContext& ctx);

enum class CurveVariable { zeta, K, E };

/// Entry-wise partial derivative of build_M with respect to one variable.
Eigen::MatrixXcd build_M_derivative(const CurvePoint& pt, const LameContext& ctx, CurveVariable v);

/// Determinants of M with row 0 (det0) or row 1 (det1) deleted. The scales are
/// Hadamard bounds of build_M_magnitude with the same row removed, so
/// |det| / scale lies in [0, 1] and measures cancellation.
struct CurveResidual {
    cplx det0;
    cplx det1;
    double scale0;
    double scale1;

    double scaled0() const { return std::abs(det0) / scale0; }
    double scaled1() const { return std::abs(det1) / scale1; }
    double scaled_max() const { return std::max(scaled0(), scaled1()); }
};
CurveResidual residual(const CurvePoint& pt, const LameContext& ctx);

/// Null vector of M, largest-magnitude entry normalized to 1.
struct BlochCoeffs {
    std::vector<cplx> s;
    double sigma_min_rel;  // smallest singular value / Frobenius norm of build_M_magnitude
    double sigma_next_rel; // second smallest, same scale (1 for ell = 1)
};

/// Throws Error(not_on_curve) when sigma_min_rel > rank_tol.
BlochCoeffs solve_bloch_coeffs(const CurvePoint& pt, const LameContext& ctx, double rank_tol = 1e-8);

/// psi(x) = K^{x/eta} sum_j s_j Phi(x - j eta, zeta).
cplx build_psi(const CurvePoint& pt, const BlochCoeffs& coeffs, cplx x, const LameContext& ctx);

/// Psi(x) = psi(x) prod_j theta_1(x - j eta), evaluated with the poles of psi
/// cancelled analytically, so it is finite everywhere.
cplx build_Psi(const CurvePoint& pt, const BlochCoeffs& coeffs, cplx x, const LameContext& ctx);

/// Individual terms of (W Psi)(x); their sum is apply_W.
std::vector<cplx> apply_W_terms(const ComplexFn& Psi, cplx x, const LameContext& ctx);
cplx apply_W(const ComplexFn& Psi, cplx x, const LameContext& ctx);

struct WEigenvalue {
    cplx w;
    double spread; // max |ratio - w| over accepted samples
    double scale;  // median of sum |terms| / |Psi|
    int samples;
};

/// Estimate w with W Psi = w Psi from the median of W Psi / Psi over ten
/// Halton-sampled x in the period cell. Samples close to a theta_1 zero in the
/// W denominators, or to a zero of Psi, are skipped. Throws Error(inconsistent)
/// if spread > rel_tol * scale.
WEigenvalue w_eigenvalue(const CurvePoint& pt, const BlochCoeffs& coeffs, const LameContext& ctx,
                         double rel_tol = 1e-7);

/// Radical inverse in the given base, 0 < value < 1 for index >= 1.
double halton(int index, int base);

} // namespace lame_spectra

#endif
