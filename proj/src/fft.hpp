#pragma once

#include <complex>
#include <cstddef>

namespace phnls::detail {

// In-place batched complex DFTs of length n over `howmany` contiguous rows.
// sign = -1 is forward (e^{-2πi jm/n}), +1 is backward. Unnormalized.
// Plans are cached and shared; execution is thread-safe.
void fft_rows(std::complex<double>* data, std::size_t n, std::size_t howmany, int sign);

}  // namespace phnls::detail
