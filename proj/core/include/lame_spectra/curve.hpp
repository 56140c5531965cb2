// SPDX-License-Identifier: Apache-2.0

#ifndef LAME_SPECTRA_CURVE_HPP
#define LAME_SPECTRA_CURVE_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "lame_spectra/lame.hpp"
#include "lame_spectra/polynomial.hpp"

namespace lame_spectra {

// ---------------------------------------------------------------------------
// A-polynomials

/// A_j(E) for j = 0..ell (index j holds A_j, of degree ell - j), built by the
/// downward recurrence from A_ell = 1 and A_{ell-1} = ([ell]/[2 ell]) E.
std::vector<EPoly> a_polys_recurrence(const LameContext& ctx);

/// A_{ell-s}(E) from the s x s tridiagonal determinant with its bracket
/// prefactor binom(ell, s) / binom(2 ell, s). s = 0 gives 1.
cplx a_polys_determinant(int s, cplx E, const LameContext& ctx);

// ---------------------------------------------------------------------------
// Curve equations

/// The two sums defining the curve. `scale*` are the sums of absolute values of
/// the terms, so first/scale_first is a relative residual.
struct CurveEquations {
    cplx first;
    cplx second;
    double scale_first;
    double scale_second;

    double scaled_max() const
    {
        return std::max(std::abs(first) / scale_first, std::abs(second) / scale_second);
    }
};

CurveEquations curve_equations(const CurvePoint& pt, const LameContext& ctx, const std::vector<EPoly>& a_polys);
CurveEquations curve_equations(const CurvePoint& pt, const LameContext& ctx);

// ---------------------------------------------------------------------------
// Band edges

/// One common root of the label-a edge system.
struct EdgeRoot {
    cplx value;
    int multiplicity = 1;        // size of the root cluster it represents
    double match_residual = 0.0; // |P2(E)| / sum |p2_i| |E|^i
};

struct BandEdgeSet {
    std::array<std::vector<EdgeRoot>, 4> by_label; // index a-1
    std::vector<cplx> full;                        // union with the reflection E -> -E
    bool ambiguous = false;                        // some root was neither clearly common nor clearly not
    std::vector<std::string> notes;

    const std::vector<EdgeRoot>& label(int a) const { return by_label.at(a - 1); }
    std::array<int, 4> counts() const;
    int total() const;
    /// Positive-representative values of all labels, in label order.
    std::vector<cplx> values() const;
};

struct BandEdgeOptions {
    double match_tol = 1e-8;     // |P2| relative residual below which a root is common
    double reject_tol = 1e-4;    // above which it is clearly not; in between -> ambiguous
    double cluster_tol = 1e-7;   // relative distance for merging roots into a cluster
    double trim_tol = 1e-11;     // coefficient cancellation threshold
};

/// The two E-polynomials for label a, with theta_a((N - j) eta) weights.
/// Coefficients whose magnitude is at round-off level relative to the terms
/// that produced them are set to exactly zero.
std::array<EPoly, 2> edge_polynomials(int a, const LameContext& ctx, const std::vector<EPoly>& a_polys,
                                      double trim_tol = 1e-11);

BandEdgeSet band_edges(const LameContext& ctx, const BandEdgeOptions& opts = {});

/// Expected label counts for generic eta.
std::array<int, 4> expected_edge_counts(int ell);

/// ell = 1 closed forms; element a-2 belongs to label a (a = 2, 3, 4).
std::array<cplx, 3> closed_form_edges_ell1(const ThetaEvaluator& ev);

struct ClosedFormsEll2 {
    std::array<cplx, 2> printed_quadratic_roots; // roots of [2]E^2 + [2]^3 E + 2[4] = 0
    std::array<cplx, 2> displayed_formula;       // (1/2)([2]^2 +- sqrt([2]^4 - 8[4]/[2]))
    std::array<cplx, 3> labels;                  // element a-2 belongs to label a
};
ClosedFormsEll2 closed_form_edges_ell2(const ThetaEvaluator& ev);

/// The point above zeta = N eta + omega_a fixed by the hyperelliptic involution,
/// carrying the given edge value E: K = 1 for a = 1, 2 and K = e^{pi i eta} for a = 3, 4.
CurvePoint edge_curve_point(int a, cplx E, const LameContext& ctx);

// ---------------------------------------------------------------------------
// Bloch multiplier relation

struct CurveCoeffs {
    std::vector<cplx> C; // C_0..C_N
};

/// C_j as a sum over subsets J of {1..ell} with element sum j.
CurveCoeffs curve_coeffs(const LameContext& ctx);

struct ScaledValue {
    cplx value;
    double scale; // sum of |terms|

    double relative() const { return std::abs(value) / scale; }
};

/// sum_{j=0..N} (-1)^j C_j theta_1(zeta - 2 j eta) K^{2(N-j)}.
ScaledValue bloch_relation(cplx zeta, cplx K, const LameContext& ctx, const CurveCoeffs& coeffs);
ScaledValue bloch_relation(cplx zeta, cplx K, const LameContext& ctx);

/// det(K^{2m} delta_mn + G_mn(zeta)), m, n = 1..ell, with
/// G_mn = (-1)^{ell+1} theta_1(2 m eta) prod_{j != m} [m+j]/[m-j] Phi(-(m+n) eta, zeta).
/// The unnormalized theta_1(2 m eta) weight is the one produced by the
/// monodromy conditions; with it the determinant equals bloch_relation / theta_1(zeta).
cplx bloch_determinant(cplx zeta, cplx K, const LameContext& ctx);

// ---------------------------------------------------------------------------
// Identities

struct IdentityPair {
    cplx lhs;
    cplx rhs;

    double relative_error() const { return std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300); }
};

/// det(theta_1(x_i + x_j + zeta) / theta_1(x_i + x_j)) against its product formula.
IdentityPair cauchy_det(const std::vector<cplx>& xs, cplx zeta, const ThetaEvaluator& ev);

/// Subset sum with trigonometric q-numbers against prod_{1<=j<=k<=ell} (1 + z q^{j+k-ell-1}).
IdentityPair weyl_denominator_check(int ell, cplx z, cplx q);

// ---------------------------------------------------------------------------
// Solving for curve points

enum class CurveFix { zeta, E };

struct CurveSolveOptions {
    double tol = 1e-12; // scaled residual target
    int max_iter = 100;
    int max_halvings = 8;
};

struct CurveSolveResult {
    CurvePoint point;
    int iterations;
    double residual; // CurveResidual::scaled_max at the returned point
};

/// Damped Newton on (det M^(0), det M^(1)) in the two coordinates not fixed.
/// Throws Error(non_convergence) or Error(singular_jacobian).
CurveSolveResult solve_curve_point(CurveFix fix, const CurvePoint& seed, const LameContext& ctx,
                                   const CurveSolveOptions& opts = {});

/// Curve points above a fixed zeta: seeds from a log-polar K grid with E taken
/// from the eigenvalues of M^(0)(E = 0), each polished by solve_curve_point.
/// Distinct converged points are returned.
std::vector<CurvePoint> find_curve_points(cplx zeta, const LameContext& ctx, const CurveSolveOptions& opts = {});

} // namespace lame_spectra

#endif
