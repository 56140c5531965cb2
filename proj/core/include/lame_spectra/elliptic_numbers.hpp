// SPDX-License-Identifier: Apache-2.0

#ifndef LAME_SPECTRA_ELLIPTIC_NUMBERS_HPP
#define LAME_SPECTRA_ELLIPTIC_NUMBERS_HPP

#include <vector>

#include "lame_spectra/elliptic_core.hpp"

namespace lame_spectra {

/// Elliptic integer [n] = theta_1(n eta) / theta_1(eta).
cplx ebracket(int n, const ThetaEvaluator& ev);

/// [n]! = [1][2]...[n]; [0]! = 1. Throws Error(torsion_eta) on a vanishing factor.
cplx efactorial(int n, const ThetaEvaluator& ev);

/// [n]! / ([m]! [n-m]!) for 0 <= m <= n.
cplx ebinom(int n, int m, const ThetaEvaluator& ev);

/// Brackets [1..max_index] computed once; everything else derived from them.
/// Read-only after construction.
class EllipticNumbers {
public:
    EllipticNumbers(const ThetaEvaluator& ev, int max_index);

    const ThetaEvaluator& theta() const noexcept { return ev_; }
    int max_index() const noexcept { return static_cast<int>(brackets_.size()) - 1; }

    /// [n] for any integer n; memoized for |n| <= max_index().
    cplx bracket(int n) const;

    /// [n], throwing Error(torsion_eta) if it vanishes. For use as a divisor.
    cplx bracket_nonzero(int n) const;

    cplx factorial(int n) const;
    cplx binom(int n, int m) const;

    /// |[j]| below this counts as zero.
    double torsion_threshold() const noexcept { return 100.0 * ev_.tol(); }

private:
    ThetaEvaluator ev_;
    cplx theta1_eta_;
    std::vector<cplx> brackets_;
};

} // namespace lame_spectra

#endif
