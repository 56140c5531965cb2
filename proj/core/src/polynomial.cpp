// SPDX-License-Identifier: Apache-2.0

#include "lame_spectra/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace lame_spectra {

EPoly::EPoly(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs))
{
    if (coeffs_.empty())
        coeffs_.push_back(0.0);
}

EPoly EPoly::monomial(int degree, cplx c)
{
    std::vector<cplx> v(degree + 1, 0.0);
    v[degree] = c;
    return EPoly(std::move(v));
}

int EPoly::degree() const
{
    for (int i = static_cast<int>(coeffs_.size()) - 1; i > 0; --i) {
        if (coeffs_[i] != cplx(0.0))
            return i;
    }
    return 0;
}

bool EPoly::is_zero() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c == cplx(0.0); });
}

cplx EPoly::operator()(cplx E) const
{
    cplx acc{0.0};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * E + *it;
    return acc;
}

double EPoly::abs_eval(cplx E) const
{
    const double r = std::abs(E);
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * r + std::abs(*it);
    return acc;
}

double EPoly::max_abs_coeff() const
{
    double m = 0.0;
    for (const cplx& c : coeffs_)
        m = std::max(m, std::abs(c));
    return m;
}

EPoly EPoly::trimmed(double rel_tol) const
{
    const double cutoff = rel_tol * max_abs_coeff();
    std::vector<cplx> v = coeffs_;
    while (v.size() > 1 && std::abs(v.back()) <= cutoff)
        v.pop_back();
    return EPoly(std::move(v));
}

EPoly& EPoly::operator+=(const EPoly& other)
{
    if (other.coeffs_.size() > coeffs_.size())
        coeffs_.resize(other.coeffs_.size(), 0.0);
    for (std::size_t i = 0; i < other.coeffs_.size(); ++i)
        coeffs_[i] += other.coeffs_[i];
    return *this;
}

EPoly EPoly::operator+(const EPoly& other) const
{
    EPoly out = *this;
    out += other;
    return out;
}

EPoly EPoly::operator*(cplx c) const
{
    std::vector<cplx> v = coeffs_;
    for (cplx& x : v)
        x *= c;
    return EPoly(std::move(v));
}

EPoly EPoly::times_E() const
{
    std::vector<cplx> v(coeffs_.size() + 1, 0.0);
    std::copy(coeffs_.begin(), coeffs_.end(), v.begin() + 1);
    return EPoly(std::move(v));
}

EPoly EPoly::derivative() const
{
    if (coeffs_.size() <= 1)
        return EPoly();
    std::vector<cplx> v(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
        v[i - 1] = double(i) * coeffs_[i];
    return EPoly(std::move(v));
}

std::vector<cplx> EPoly::roots() const
{
    const int n = degree();
    if (n == 0)
        return {};
    const cplx lead = coeffs_[n];
    if (n == 1)
        return {-coeffs_[0] / lead};

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i)
        companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i)
        companion(i, n - 1) = -coeffs_[i] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    std::vector<cplx> r(solver.eigenvalues().data(), solver.eigenvalues().data() + n);

    const EPoly dp = derivative();
    for (int i = 0; i < n; ++i) {
        double nearest = 1e300;
        for (int j = 0; j < n; ++j) {
            if (j != i)
                nearest = std::min(nearest, std::abs(r[i] - r[j]));
        }
        if (nearest < 1e-6 * std::max(1.0, std::abs(r[i])))
            continue;
        for (int it = 0; it < 3; ++it) {
            const cplx d = dp(r[i]);
            if (d == cplx(0.0))
                break;
            const cplx step = (*this)(r[i]) / d;
            if (!(std::abs(step) < 0.1 * nearest))
                break;
            r[i] -= step;
        }
    }
    return r;
}

} // namespace lame_spectra
