// SPDX-License-Identifier: Apache-2.0

#ifndef LAME_SPECTRA_BLOCH_NUMERICS_HPP
#define LAME_SPECTRA_BLOCH_NUMERICS_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lame_spectra/elliptic_core.hpp"
#include "lame_spectra/lame.hpp"

namespace lame_spectra {

/// eta = P/Q with gcd(P, Q) = 1 and Q > 0. The lattice x0 + n eta closes up
/// after Q steps modulo the integer period.
struct RationalEta {
    long P = 1;
    long Q = 1;

    void validate() const;
    double value() const { return double(P) / double(Q); }
};

/// Default lattice offset; generic enough to miss theta_1 zeros.
inline constexpr double default_x0 = 0.123456;

/// Q x Q matrix of the operator a_n Psi_{n+1} + c_n Psi_{n-1} on Bloch
/// solutions Psi_{n+Q} = e^{i phase} Psi_n. `x0` is the offset actually used,
/// after any reshifts.
struct BlochMatrix {
    Eigen::MatrixXcd m;
    double phase = 0.0;
    cplx x0;
    int reshifts = 0;
};

/// Coefficient functions of a generic three-term operator without diagonal.
struct LatticeOperator {
    ComplexFn a; // multiplies Psi(x + eta)
    ComplexFn c; // multiplies Psi(x - eta)
};

/// a(x) = theta_1(x - ell eta)/theta_1(x), c(x) = theta_1(x + ell eta)/theta_1(x).
/// The evaluator must carry eta = P/Q.
LatticeOperator lame_lattice_operator(int ell, const ThetaEvaluator& ev);

/// Matrix at Bloch phase `phase` (the phase accumulated over Q sites). If a
/// coefficient hits a pole the offset moves by 1/(2Q), up to 8 times, before
/// Error(lattice_collision) is thrown.
BlochMatrix build_bloch_matrix(const LatticeOperator& op, const RationalEta& re, double phase, cplx x0);

/// The difference Lame matrix at quasi-momentum k (phase = k eta Q).
BlochMatrix build_bloch_matrix(int ell, const RationalEta& re, double k, cplx x0, const ThetaEvaluator& ev);

/// Eigenvalues sorted by real part, then imaginary part.
std::vector<cplx> bloch_eigenvalues(const BlochMatrix& bm);

struct EdgeCandidate {
    cplx value;
    int phase_sign;          // +1 periodic, -1 antiperiodic
    double nearest_distance; // to the closest other eigenvalue at the same phase
    bool confident;
};

struct NumericEdgeOptions {
    double pair_tol = 1e-9;       // relative distance below which two eigenvalues form a closed gap
    double confident_tol = 1e-6;  // relative distance above which a simple eigenvalue is unambiguous
};

struct NumericEdges {
    std::vector<EdgeCandidate> candidates; // simple eigenvalues, sorted by real part
    std::vector<cplx> periodic;            // all eigenvalues at phase 0
    std::vector<cplx> antiperiodic;        // all eigenvalues at phase pi
    double scale = 0.0;                    // max |E| over both spectra
    double max_imag = 0.0;                 // max |Im E|, a self-adjointness diagnostic
    cplx x0;
    int ambiguous = 0;                     // simple but not confident

    std::vector<cplx> confident_values() const;
};

NumericEdges numeric_band_edges(const LatticeOperator& op, const RationalEta& re, cplx x0,
                                const NumericEdgeOptions& opts = {});
NumericEdges numeric_band_edges(int ell, const RationalEta& re, cplx x0, const ThetaEvaluator& ev,
                                const NumericEdgeOptions& opts = {});

/// k values with phases 2 pi j / n, j = 0..n-1 (n rounded up to even so that
/// phase pi is included).
std::vector<double> brillouin_grid(const RationalEta& re, int n);

struct StableInterval {
    double lo;
    double hi;
};

struct BandSweep {
    std::vector<double> ks;
    std::vector<std::vector<cplx>> energies; // energies[i] sorted, one row per k
    std::vector<StableInterval> intervals;   // merged stable bands (real parts)
    std::vector<std::string> warnings;       // trajectory jumps, non-real spectra
    double scale = 0.0;
    cplx x0;
};

/// Eigenvalue curves over k_grid. Intervals covered by the real parts of the
/// sorted curves are merged when they overlap within 1e-8 scale. A warning is
/// raised when a sorted curve moves between adjacent k by more than four times
/// the phase step times the largest corner entry (a possible mislabeling).
BandSweep band_sweep(const LatticeOperator& op, const RationalEta& re, cplx x0, const std::vector<double>& k_grid);
BandSweep band_sweep(int ell, const RationalEta& re, cplx x0, const std::vector<double>& k_grid,
                     const ThetaEvaluator& ev);

/// Symmetric Hausdorff distance between finite point sets (infinity if exactly one is empty).
double hausdorff_distance(const std::vector<cplx>& a, const std::vector<cplx>& b);

} // namespace lame_spectra

#endif
