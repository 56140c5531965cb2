// SPDX-License-Identifier: Apache-2.0

#ifndef LAME_SPECTRA_ERROR_HPP
#define LAME_SPECTRA_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace lame_spectra {

/// Failure categories shared by every module. The CLI maps these onto exit codes.
enum class ErrorKind {
    invalid_argument,
    divergence,        // Im(tau) <= 0: theta series do not converge
    pole_proximity,    // division by a theta_1 value below tolerance
    torsion_eta,       // an elliptic bracket [j] vanishes
    not_on_curve,      // no null vector where one was expected
    non_convergence,   // iterative solver ran out of iterations
    singular_jacobian, // Newton step undefined (typically near a branch point)
    inconsistent,      // two evaluation routes disagree beyond tolerance
    lattice_collision, // Bloch lattice hits a coefficient pole after reshifts
    root_cluster,      // ambiguous clustering of polynomial roots / eigenvalues
    margin_violation,  // pole configuration too close to a singular difference
    boundary_of_locus, // degenerate configuration in the closure of the locus
    off_locus,         // locus equations violated at the start of a flow
    locus_drift,       // locus gap grew past threshold during integration
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Compact "%.6g" rendering used in error and warning messages.
std::string format_number(double value);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail)
        : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind), detail_(detail) {}

    ErrorKind kind() const noexcept { return kind_; }
    /// The message without the "kind: " prefix carried by what().
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

} // namespace lame_spectra

#endif
