#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fracheat/field.hpp"

namespace fracheat {

/// |ξ| for every coefficient of the real-to-complex transform of a field on
/// `grid` (FFTW half-spectrum layout, ξ = π k / L).
std::vector<double> wave_magnitudes(const Grid& grid);

/// Multiplies the discrete Fourier coefficients of f by `multiplier`
/// (indexed like wave_magnitudes) in place.
void apply_multiplier(Field& f, std::span<const double> multiplier);

/// Convenience: multiplier m(|ξ|) evaluated on the fly.
void apply_radial_multiplier(Field& f, const std::function<double(double)>& m);

}  // namespace fracheat
