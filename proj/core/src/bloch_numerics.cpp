// SPDX-License-Identifier: Apache-2.0

#include "lame_spectra/bloch_numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lame_spectra/parallel.hpp"

namespace lame_spectra {

void RationalEta::validate() const
{
    if (Q <= 0)
        throw Error(ErrorKind::invalid_argument, "rational eta needs Q > 0");
    if (P == 0)
        throw Error(ErrorKind::invalid_argument, "rational eta needs P != 0");
    if (std::gcd(P, Q) != 1)
        throw Error(ErrorKind::invalid_argument,
                    "rational eta " + std::to_string(P) + "/" + std::to_string(Q) + " is not in lowest terms");
}

std::vector<cplx> NumericEdges::confident_values() const
{
    std::vector<cplx> out;
    for (const auto& c : candidates) {
        if (c.confident)
            out.push_back(c.value);
    }
    return out;
}

LatticeOperator lame_lattice_operator(int ell, const ThetaEvaluator& ev)
{
    if (ell < 0)
        throw Error(ErrorKind::invalid_argument, "ell must be non-negative");
    const cplx shift = double(ell) * ev.eta();
    return {
        [ev, shift](cplx x) { return ev.theta1(x - shift) / ev.theta1_nonzero(x, "Bloch coefficient"); },
        [ev, shift](cplx x) { return ev.theta1(x + shift) / ev.theta1_nonzero(x, "Bloch coefficient"); },
    };
}

namespace {

constexpr int max_reshifts = 8;

void check_eta(const RationalEta& re, const ThetaEvaluator& ev)
{
    re.validate();
    if (std::abs(ev.eta() - re.value()) > 1e-14 * std::max(1.0, std::abs(re.value())))
        throw Error(ErrorKind::invalid_argument, "evaluator eta differs from P/Q");
}

struct Samples {
    std::vector<cplx> a;
    std::vector<cplx> c;
    cplx x0;
    int reshifts;
};

Samples sample_coefficients(const LatticeOperator& op, const RationalEta& re, cplx x0)
{
    re.validate();
    const double eta = re.value();
    for (int attempt = 0; attempt <= max_reshifts; ++attempt) {
        const cplx offset = x0 + double(attempt) / (2.0 * double(re.Q));
        Samples s{std::vector<cplx>(re.Q), std::vector<cplx>(re.Q), offset, attempt};
        try {
            for (long n = 0; n < re.Q; ++n) {
                const cplx x = offset + double(n) * eta;
                s.a[n] = op.a(x);
                s.c[n] = op.c(x);
            }
            return s;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::pole_proximity)
                throw;
        }
    }
    throw Error(ErrorKind::lattice_collision,
                "coefficients hit a pole after " + std::to_string(max_reshifts) + " offset shifts");
}

BlochMatrix assemble(const Samples& s, double phase)
{
    const long q = static_cast<long>(s.a.size());
    BlochMatrix bm{Eigen::MatrixXcd::Zero(q, q), phase, s.x0, s.reshifts};
    const cplx forward = std::polar(1.0, phase);
    const cplx backward = std::polar(1.0, -phase);
    for (long n = 0; n < q; ++n) {
        bm.m(n, (n + 1) % q) += (n + 1 == q ? forward : cplx(1.0)) * s.a[n];
        bm.m(n, (n + q - 1) % q) += (n == 0 ? backward : cplx(1.0)) * s.c[n];
    }
    return bm;
}

bool real_then_imag(cplx x, cplx y)
{
    if (x.real() != y.real())
        return x.real() < y.real();
    return x.imag() < y.imag();
}

std::vector<cplx> sorted_eigenvalues(const Eigen::MatrixXcd& m)
{
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    if (es.info() != Eigen::Success)
        throw Error(ErrorKind::non_convergence, "eigenvalue solver failed");
    std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), real_then_imag);
    return ev;
}

double max_abs(const std::vector<cplx>& v)
{
    double m = 0.0;
    for (const cplx& z : v)
        m = std::max(m, std::abs(z));
    return m;
}

} // namespace

BlochMatrix build_bloch_matrix(const LatticeOperator& op, const RationalEta& re, double phase, cplx x0)
{
    return assemble(sample_coefficients(op, re, x0), phase);
}

BlochMatrix build_bloch_matrix(int ell, const RationalEta& re, double k, cplx x0, const ThetaEvaluator& ev)
{
    check_eta(re, ev);
    return build_bloch_matrix(lame_lattice_operator(ell, ev), re, k * re.value() * double(re.Q), x0);
}

std::vector<cplx> bloch_eigenvalues(const BlochMatrix& bm) { return sorted_eigenvalues(bm.m); }

NumericEdges numeric_band_edges(const LatticeOperator& op, const RationalEta& re, cplx x0,
                                const NumericEdgeOptions& opts)
{
    const Samples s = sample_coefficients(op, re, x0);
    NumericEdges out;
    out.x0 = s.x0;
    out.periodic = sorted_eigenvalues(assemble(s, 0.0).m);
    out.antiperiodic = sorted_eigenvalues(assemble(s, pi).m);
    out.scale = std::max(max_abs(out.periodic), max_abs(out.antiperiodic));
    if (out.scale == 0.0)
        out.scale = 1.0;
    for (const auto* spectrum : {&out.periodic, &out.antiperiodic}) {
        const int sign = spectrum == &out.periodic ? 1 : -1;
        for (std::size_t i = 0; i < spectrum->size(); ++i) {
            const cplx e = (*spectrum)[i];
            out.max_imag = std::max(out.max_imag, std::abs(e.imag()));
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < spectrum->size(); ++j) {
                if (j != i)
                    nearest = std::min(nearest, std::abs((*spectrum)[j] - e));
            }
            if (nearest <= opts.pair_tol * out.scale)
                continue;
            const bool confident = nearest > opts.confident_tol * out.scale;
            if (!confident)
                ++out.ambiguous;
            out.candidates.push_back({e, sign, nearest, confident});
        }
    }
    std::sort(out.candidates.begin(), out.candidates.end(),
              [](const EdgeCandidate& x, const EdgeCandidate& y) { return real_then_imag(x.value, y.value); });
    return out;
}

NumericEdges numeric_band_edges(int ell, const RationalEta& re, cplx x0, const ThetaEvaluator& ev,
                                const NumericEdgeOptions& opts)
{
    check_eta(re, ev);
    return numeric_band_edges(lame_lattice_operator(ell, ev), re, x0, opts);
}

std::vector<double> brillouin_grid(const RationalEta& re, int n)
{
    re.validate();
    if (n < 2)
        throw Error(ErrorKind::invalid_argument, "Brillouin grid needs at least 2 points");
    if (n % 2 == 1)
        ++n;
    // phase = k eta Q = k P
    std::vector<double> ks(n);
    for (int j = 0; j < n; ++j)
        ks[j] = 2.0 * pi * double(j) / double(n) / double(re.P);
    return ks;
}

BandSweep band_sweep(const LatticeOperator& op, const RationalEta& re, cplx x0, const std::vector<double>& k_grid)
{
    if (k_grid.empty())
        throw Error(ErrorKind::invalid_argument, "empty k grid");
    const Samples s = sample_coefficients(op, re, x0);
    BandSweep out;
    out.ks = k_grid;
    out.x0 = s.x0;
    out.energies.resize(k_grid.size());
    const double eta_q = re.value() * double(re.Q);
    parallel_for(k_grid.size(), [&](std::size_t i) {
        out.energies[i] = sorted_eigenvalues(assemble(s, k_grid[i] * eta_q).m);
    });

    double max_imag = 0.0;
    for (const auto& row : out.energies) {
        out.scale = std::max(out.scale, max_abs(row));
        for (const cplx& e : row)
            max_imag = std::max(max_imag, std::abs(e.imag()));
    }
    if (out.scale == 0.0)
        out.scale = 1.0;
    if (max_imag > 1e-8 * out.scale)
        out.warnings.push_back("spectrum is not real (max |Im E| = " + format_number(max_imag) +
                               "); intervals use real parts");

    const std::size_t bands = out.energies.front().size();
    const double corner = std::max(std::abs(s.a.back()), std::abs(s.c.front()));
    std::vector<StableInterval> raw(bands, {std::numeric_limits<double>::infinity(),
                                            -std::numeric_limits<double>::infinity()});
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
        for (std::size_t b = 0; b < bands; ++b) {
            const double e = out.energies[i][b].real();
            raw[b].lo = std::min(raw[b].lo, e);
            raw[b].hi = std::max(raw[b].hi, e);
            if (i > 0) {
                const double dphase = std::abs(k_grid[i] - k_grid[i - 1]) * eta_q;
                const double jump = std::abs(out.energies[i][b] - out.energies[i - 1][b]);
                if (jump > 4.0 * dphase * corner + 1e-12 * out.scale)
                    out.warnings.push_back("curve " + std::to_string(b) + " jumps by " + format_number(jump) +
                                           " between k[" + std::to_string(i - 1) + "] and k[" +
                                           std::to_string(i) + "]");
            }
        }
    }
    std::sort(raw.begin(), raw.end(), [](const StableInterval& x, const StableInterval& y) { return x.lo < y.lo; });
    for (const auto& iv : raw) {
        if (!out.intervals.empty() && iv.lo <= out.intervals.back().hi + 1e-8 * out.scale)
            out.intervals.back().hi = std::max(out.intervals.back().hi, iv.hi);
        else
            out.intervals.push_back(iv);
    }
    return out;
}

BandSweep band_sweep(int ell, const RationalEta& re, cplx x0, const std::vector<double>& k_grid,
                     const ThetaEvaluator& ev)
{
    check_eta(re, ev);
    return band_sweep(lame_lattice_operator(ell, ev), re, x0, k_grid);
}

double hausdorff_distance(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    if (a.empty() && b.empty())
        return 0.0;
    if (a.empty() || b.empty())
        return std::numeric_limits<double>::infinity();
    auto directed = [](const std::vector<cplx>& from, const std::vector<cplx>& to) {
        double worst = 0.0;
        for (const cplx& x : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const cplx& y : to)
                best = std::min(best, std::abs(x - y));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

} // namespace lame_spectra
