// SPDX-License-Identifier: Apache-2.0
//
// Text forms accepted on the command line and in config files.

#ifndef LAME_SPECTRA_CLI_PARSE_HPP
#define LAME_SPECTRA_CLI_PARSE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lame_spectra/bloch_numerics.hpp"

namespace lame_spectra::cli {

/// "a", "bi", "a+bi", "a-bi", "i", "-i"; a and b are decimal or scientific
/// literals. Whitespace is ignored. Throws Error(invalid_argument).
cplx parse_complex(const std::string& text);

/// Shortest round-trip form: format_complex(parse_complex(s)) is canonical and
/// parse_complex(format_complex(z)) == z exactly.
std::string format_complex(cplx z);
std::string format_real(double x);

/// eta either as a complex literal or as an exact rational "P/Q".
struct EtaSpec {
    cplx value;
    std::optional<RationalEta> rational; // reduced to lowest terms, Q > 0

    std::string canonical() const;
};

EtaSpec parse_eta(const std::string& text);

/// tau with Im(tau) > 0 enforced (Error(divergence) otherwise).
cplx parse_tau(const std::string& text);

/// Comma-separated complex literals.
std::vector<cplx> parse_complex_list(const std::string& text);

/// key=value lines; blank lines and lines starting with '#' are skipped.
/// Keys are the long option names without dashes.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// argv with "--config FILE" removed and, for every config key not already
/// given as --key on the command line, "--key=value" (or "--key" for a true
/// boolean, nothing for false) appended. Command-line flags therefore win.
std::vector<std::string> merge_config(const std::vector<std::string>& argv);

} // namespace lame_spectra::cli

#endif
