// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations used only by the tests. None of these
// share code with the library.

#ifndef LAME_SPECTRA_TEST_ORACLES_HPP
#define LAME_SPECTRA_TEST_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;
inline const cplx I{0.0, 1.0};

/// Jacobi theta functions from the triple-product expansion, q = e^{pi i tau}.
inline cplx theta_product(int a, cplx x, cplx tau, int factors = 200)
{
    const cplx q = std::exp(I * pi * tau);
    const cplx q4 = std::exp(I * pi * tau / 4.0);
    const cplx c = std::cos(2.0 * pi * x);
    cplx p{1.0};
    cplx q2n{1.0};
    for (int n = 1; n <= factors; ++n) {
        q2n *= q * q;
        const cplx q2n1 = q2n / q;
        switch (a) {
        case 1:
        case 2: {
            const double sign = a == 1 ? -1.0 : 1.0;
            p *= (1.0 - q2n) * (1.0 + sign * 2.0 * q2n * c + q2n * q2n);
            break;
        }
        case 3: p *= (1.0 - q2n) * (1.0 + 2.0 * q2n1 * c + q2n1 * q2n1); break;
        default: p *= (1.0 - q2n) * (1.0 - 2.0 * q2n1 * c + q2n1 * q2n1); break;
        }
        if (std::abs(q2n1) < 1e-20)
            break;
    }
    switch (a) {
    case 1: return 2.0 * q4 * std::sin(pi * x) * p;
    case 2: return 2.0 * q4 * std::cos(pi * x) * p;
    default: return p;
    }
}

/// Symmetric q-number sin(n pi eta) / sin(pi eta), the Im tau -> infinity limit of [n].
inline double qnumber(int n, double eta) { return std::sin(n * pi * eta) / std::sin(pi * eta); }

/// Determinant by permutation expansion (n <= 8).
inline cplx permutation_det(const std::vector<std::vector<cplx>>& m)
{
    const int n = static_cast<int>(m.size());
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    cplx det{0.0};
    do {
        int inversions = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                inversions += perm[i] > perm[j];
        cplx term = (inversions % 2 == 0) ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i)
            term *= m[i][perm[i]];
        det += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

inline double binomial(int n, int k)
{
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * double(n - k + i) / double(i);
    return r;
}

/// Uniform complex sample in the box [re_lo, re_hi] x [im_lo, im_hi].
inline cplx random_point(std::mt19937_64& rng, double re_lo, double re_hi, double im_lo, double im_hi)
{
    std::uniform_real_distribution<double> re(re_lo, re_hi);
    std::uniform_real_distribution<double> im(im_lo, im_hi);
    return {re(rng), im(rng)};
}

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

} // namespace oracle

#endif
