#pragma once

#include <vector>

#include "sparselab/grid.hpp"
#include "sparselab/numeric.hpp"

namespace sparselab {

/// In-place iterative radix-2 FFT (forward: e^{-2 pi i jk/N}). N must be a
/// power of two. Hand-rolled so outputs are deterministic across platforms.
void fft_radix2(std::vector<cplx>& a, bool inverse);

/// Frequencies of the signed spectrum: bin m corresponds to xi_m = m / L with
/// L = step * count, for m in [-N/2, N/2).
struct Spectrum {
    double freq_step = 0.0;           // 1 / L
    std::vector<cplx> coeff;          // index i <-> m = i - N/2 (ascending frequency)
    long long bin_of(std::size_t i) const {
        return static_cast<long long>(i) - static_cast<long long>(coeff.size() / 2);
    }
    double freq_of(std::size_t i) const {
        return freq_step * static_cast<double>(bin_of(i));
    }
};

/// Inversion coefficients F_m on ascending signed bins, normalized so that
/// f(x_i) = sum_m F_m e^{2 pi i xi_m x_i} exactly (up to roundoff).
Spectrum analyze(const GridFunction& f);

/// Rebuild samples from inversion coefficients on the given grid geometry.
GridFunction synthesize(const Spectrum& s, double origin, double step);

} // namespace sparselab
