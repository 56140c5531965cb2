// SPDX-License-Identifier: Apache-2.0

#ifndef LAME_SPECTRA_POLYNOMIAL_HPP
#define LAME_SPECTRA_POLYNOMIAL_HPP

#include <vector>

#include "lame_spectra/elliptic_core.hpp"

namespace lame_spectra {

/// Polynomial in E with complex coefficients, increasing degree.
class EPoly {
public:
    EPoly() : coeffs_{0.0} {}
    explicit EPoly(std::vector<cplx> coeffs);

    static EPoly constant(cplx c) { return EPoly({c}); }
    static EPoly monomial(int degree, cplx c = 1.0);

    const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }
    cplx coeff(int i) const { return i < static_cast<int>(coeffs_.size()) ? coeffs_[i] : cplx(0.0); }

    /// Index of the highest nonzero coefficient (0 for the zero polynomial).
    int degree() const;
    bool is_zero() const;

    cplx operator()(cplx E) const;

    /// sum_i |c_i| |E|^i: the round-off scale of evaluating at E.
    double abs_eval(cplx E) const;
    double max_abs_coeff() const;

    /// Drop leading coefficients with |c_i| <= rel_tol * max|c|.
    EPoly trimmed(double rel_tol) const;

    EPoly& operator+=(const EPoly& other);
    EPoly operator+(const EPoly& other) const;
    EPoly operator*(cplx c) const;
    EPoly times_E() const;
    EPoly derivative() const;

    /// All roots: companion-matrix eigenvalues, then a few Newton steps on
    /// each root that is isolated from the others.
    std::vector<cplx> roots() const;

private:
    std::vector<cplx> coeffs_;
};

} // namespace lame_spectra

#endif
