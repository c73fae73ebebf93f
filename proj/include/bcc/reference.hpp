#pragma once

#include "bcc/complex_matrix.hpp"

namespace bcc {

/// Direct-formula evaluators, independent of the circuit machinery. They
/// back `bcv check` and serve as cross-oracles in the tests.
namespace reference {

/// c_k = sum_{i+j = k mod n} a_i b_j
std::vector<Complex> cyclic_convolution(std::span<const Complex> a, std::span<const Complex> b);

/// sum_j omega^{jk} x_j with omega = e^{2 pi i/n}; the inverse applies the
/// conjugate transform and the 1/n factor.
std::vector<Complex> dft(std::span<const Complex> x, bool inverse = false);

/// Schoolbook product; result length |a| + |b| - 1.
std::vector<Complex> polymul(std::span<const Complex> a, std::span<const Complex> b);

/// First n coefficients b_1..b_n of the inverse of 1 - sum a_i X^i, by the
/// defining recurrence b_0 = 1, b_k = sum_{i=0}^{k-1} a_{k-i} b_i.
std::vector<Complex> power_series_inverse(std::span<const Complex> a, std::size_t n);

struct DivisionResult {
    std::vector<Complex> quotient;  // degree n - m
    std::vector<Complex> remainder; // m coefficients
};

/// Long division of f (degree n, all coefficients given) by the monic divisor
/// X^m + sum g_low[i] X^i.
DivisionResult divide(std::span<const Complex> f, std::span<const Complex> g_low);

/// f(t) for coefficient vector f.
Complex eval_poly(std::span<const Complex> f, Complex t);

} // namespace reference
} // namespace bcc
