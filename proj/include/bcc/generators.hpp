#pragma once

#include "bcc/circuit.hpp"

namespace bcc {

/// Radix-2 FFT circuit for the matrix (omega^{jk}) with omega = e^{2 pi i/n}.
/// With `inverse`, the circuit computes the inverse matrix including the 1/n
/// factor, realized as halving scales. All scale factors have modulus <= 1.
/// Requires n to be a power of two; n = 1 yields the identity wiring.
Circuit gen_dft(std::size_t n, bool inverse = false);

/// Bilinear circuit for cyclic convolution: DFT on x | DFT on y | n pointwise
/// products | inverse DFT with the 1/n factor folded into bounded scales.
/// Requires n to be a power of two.
Circuit gen_convolution_fft(std::size_t n);

/// Defining-sum circuit for cyclic convolution, c_k = sum_{i+j=k mod n} x_i y_j.
/// Size is exactly 2n^2 - n. Works for any n >= 1.
Circuit gen_convolution_naive(std::size_t n);

/// Bilinear circuit for the 2n-1 coefficients of f*g with deg f, deg g < n,
/// by zero padding to the next power of two >= 2n and cyclic convolution.
Circuit gen_polymul(std::size_t n);

/// Inputs a_1..a_n of f = 1 - sum a_i X^i; outputs the coefficients b_1..b_n
/// of the power series inverse of f. Built by Newton doubling from
/// polynomial-multiplication blocks; all scales bounded.
Circuit gen_power_series_inv(std::size_t n);

/// Division with remainder for a monic divisor. Inputs are the dividend
/// coefficients f_0..f_n followed by the divisor's low coefficients
/// g_0..g_{m-1} (the leading g_m = 1 is implicit). Outputs q_0..q_{n-m}
/// followed by r_0..r_{m-1}, where f = q g + r and deg r < m. Built via
/// coefficient reversal and power-series inversion.
Circuit gen_division(std::size_t n, std::size_t m);

} // namespace bcc
