// SPDX-License-Identifier: Apache-2.0

#ifndef LAME_SPECTRA_PARALLEL_HPP
#define LAME_SPECTRA_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace lame_spectra {

/// Worker count: LAME_SPECTRA_THREADS if set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
unsigned worker_count();

/// Calls body(i) for i in [0, n) on up to worker_count() threads. Iterations
/// must be independent. The first exception thrown by any iteration is
/// rethrown on the calling thread after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace lame_spectra

#endif
