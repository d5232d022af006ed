#pragma once

// Discrete Fourier transforms on BoxDomain grids and the two helpers the rest
// of the toolkit is built from: Fourier multipliers and periodic convolution.
//
// Frequency convention: bin m (per axis) carries the signed index
// m' = m for m < N/2, m - N for m >= N/2, and represents the continuum
// frequency xi = pi * m' / L of the exponential e^{i xi x} on the period-2L
// torus.  Multipliers are exact on band-limited data in this convention.

#include <Eigen/Dense>

#include "plab/grid.hpp"

namespace plab {

/// Unnormalized forward DFT (row-major flattening; axis 0 slowest).
Eigen::ArrayXcd dft_forward(const GridFunction& f);

/// Inverse of dft_forward (includes the 1/N^dim normalization).
GridFunction dft_inverse(const BoxDomain& box, const Eigen::ArrayXcd& spectrum);

/// Signed frequency index of per-axis bin m.
std::int64_t signed_bin(const BoxDomain& box, std::int64_t m);

/// Continuum frequency vector of flat spectral bin index.
std::array<double, 2> frequency_point(const BoxDomain& box, std::int64_t flat);

/// Pointwise Fourier multiplier: IDFT[ sigma(xi_m) . DFT f ].
GridFunction apply_symbol(
    const GridFunction& f,
    const std::function<cplx(std::array<double, 2>)>& sigma);

/// Trapezoidal approximation of the continuum transform, evaluated at the
/// grid frequencies: hat f(xi_m) = h^dim (-1)^(sum m') DFT(f)_m.
Eigen::ArrayXcd continuum_fourier(const GridFunction& f);

/// True torus convolution integral (f*g)(x) = integral f(y) g(x-y) dy with
/// both arguments read as functions of the box coordinate x in [-L, L)^n.
GridFunction convolve_periodic(const GridFunction& f, const GridFunction& g);

/// The (-1)^(sum m) spectral sign that realigns corner-indexed spectra with
/// origin-centered kernels (also the continuum transform phase).
Eigen::ArrayXd center_phase(const BoxDomain& box);

}  // namespace plab
