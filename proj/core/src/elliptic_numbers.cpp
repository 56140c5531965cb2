// SPDX-License-Identifier: Apache-2.0

#include "lame_spectra/elliptic_numbers.hpp"

#include <string>

namespace lame_spectra {

namespace {

cplx theta1_eta_checked(const ThetaEvaluator& ev)
{
    const cplx value = ev.theta1(ev.eta());
    if (std::abs(value) < ev.tol() * ev.theta1_scale())
        throw Error(ErrorKind::torsion_eta, "theta_1(eta) vanishes: eta is a lattice point");
    return value;
}

void check_torsion(cplx value, int j, double threshold)
{
    if (std::abs(value) < threshold)
        throw Error(ErrorKind::torsion_eta, "[" + std::to_string(j) + "] vanishes: eta is a torsion point");
}

} // namespace

cplx ebracket(int n, const ThetaEvaluator& ev)
{
    if (n == 0)
        return 0.0;
    if (n == 1)
        return 1.0;
    return ev.theta1(double(n) * ev.eta()) / theta1_eta_checked(ev);
}

cplx efactorial(int n, const ThetaEvaluator& ev)
{
    if (n < 0)
        throw Error(ErrorKind::invalid_argument, "elliptic factorial needs n >= 0");
    const cplx denom = theta1_eta_checked(ev);
    cplx result{1.0};
    for (int j = 2; j <= n; ++j) {
        const cplx b = ev.theta1(double(j) * ev.eta()) / denom;
        check_torsion(b, j, 100.0 * ev.tol());
        result *= b;
    }
    return result;
}

cplx ebinom(int n, int m, const ThetaEvaluator& ev)
{
    if (n < 0 || m < 0 || m > n)
        throw Error(ErrorKind::invalid_argument,
                    "elliptic binomial needs 0 <= m <= n, got n=" + std::to_string(n) + " m=" + std::to_string(m));
    return efactorial(n, ev) / (efactorial(m, ev) * efactorial(n - m, ev));
}

EllipticNumbers::EllipticNumbers(const ThetaEvaluator& ev, int max_index)
    : ev_(ev), theta1_eta_(theta1_eta_checked(ev))
{
    if (max_index < 1)
        max_index = 1;
    brackets_.resize(max_index + 1);
    brackets_[0] = 0.0;
    brackets_[1] = 1.0;
    for (int j = 2; j <= max_index; ++j)
        brackets_[j] = ev.theta1(double(j) * ev.eta()) / theta1_eta_;
}

cplx EllipticNumbers::bracket(int n) const
{
    const int m = n < 0 ? -n : n;
    cplx value = m < static_cast<int>(brackets_.size()) ? brackets_[m] : ev_.theta1(double(m) * ev_.eta()) / theta1_eta_;
    return n < 0 ? -value : value;
}

cplx EllipticNumbers::bracket_nonzero(int n) const
{
    const cplx value = bracket(n);
    check_torsion(value, n, torsion_threshold());
    return value;
}

cplx EllipticNumbers::factorial(int n) const
{
    if (n < 0)
        throw Error(ErrorKind::invalid_argument, "elliptic factorial needs n >= 0");
    cplx result{1.0};
    for (int j = 2; j <= n; ++j)
        result *= bracket_nonzero(j);
    return result;
}

cplx EllipticNumbers::binom(int n, int m) const
{
    if (n < 0 || m < 0 || m > n)
        throw Error(ErrorKind::invalid_argument,
                    "elliptic binomial needs 0 <= m <= n, got n=" + std::to_string(n) + " m=" + std::to_string(m));
    return factorial(n) / (factorial(m) * factorial(n - m));
}

} // namespace lame_spectra
