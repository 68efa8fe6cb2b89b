#pragma once

// Grid transforms backed by FFTW.  Plans are created once per (dim, points)
// shape under a lock and executed with the new-array interface, so every
// function here is safe to call concurrently.

#include <span>
#include <vector>

#include "kolmo/spectral.hpp"

namespace kolmo::fft {

enum class Direction { forward, backward };

/// Unnormalized in-place DFT of a row-major d-dimensional box of side
/// `points`.  Backward uses exp(+2 pi i k.x), matching the series convention.
void transform(std::span<Complex> data, int dim, int points, Direction dir);

/// Grid offsets of each mode of `modes` (k_j taken modulo points).
std::vector<std::size_t> mode_offsets(const ModeSet& modes, int points);

/// Zero `grid` and place the coefficients of f at their offsets.
void scatter(const SpectralField& f, std::span<const std::size_t> offsets,
             std::span<Complex> grid);

/// Read coefficients at `offsets` into a field over `modes`, times `scale`.
SpectralField gather(std::span<const Complex> grid,
                     std::span<const std::size_t> offsets,
                     const std::shared_ptr<const ModeSet>& modes, double scale);

}  // namespace kolmo::fft
