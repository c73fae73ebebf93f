#pragma once

#include "bcc/complex_matrix.hpp"
#include "bcc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace bcc::testing {

inline std::vector<Complex> random_complex_vector(std::size_t n, CounterRng& rng) {
    std::vector<Complex> v(n);
    for (Complex& z : v) z = rng.complex_normal();
    return v;
}

inline ComplexMatrix random_complex_matrix(std::size_t m, std::size_t n, CounterRng& rng) {
    ComplexMatrix a(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.complex_normal();
    return a;
}

inline ComplexMatrix random_unitary(std::size_t n, CounterRng& rng) {
    return orthonormalize_columns(random_complex_matrix(n, n, rng));
}

inline double max_rel_error(std::span<const Complex> got, std::span<const Complex> want) {
    double scale = 0.0;
    for (const Complex& z : want) scale = std::max(scale, std::abs(z));
    if (scale == 0.0)
        for (const Complex& z : got) scale = std::max(scale, std::abs(z));
    if (scale == 0.0) return 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
    return worst / scale;
}

/// Eigenvalues of a 3x3 (or smaller) Hermitian matrix through its
/// characteristic polynomial, solved by the trigonometric cubic formula.
/// Deliberately disjoint from the Jacobi SVD path.
inline std::vector<double> hermitian_eigenvalues_charpoly(const ComplexMatrix& h) {
    const std::size_t n = h.rows();
    if (n == 1) return {std::real(h(0, 0))};
    if (n == 2) {
        const double a = std::real(h(0, 0)), d = std::real(h(1, 1));
        const double off = std::norm(h(0, 1));
        const double mid = (a + d) / 2.0, disc = std::sqrt((a - d) * (a - d) / 4.0 + off);
        return {mid + disc, mid - disc};
    }
    if (n != 3) throw BccError("charpoly oracle: only up to 3x3");
    // det(H - x I) = -x^3 + c2 x^2 - c1 x + c0
    const double c2 = std::real(h(0, 0) + h(1, 1) + h(2, 2));
    const double c1 = std::real(h(0, 0) * h(1, 1) + h(0, 0) * h(2, 2) + h(1, 1) * h(2, 2) -
                                h(0, 1) * h(1, 0) - h(0, 2) * h(2, 0) - h(1, 2) * h(2, 1));
    const double c0 = std::real(determinant(h));
    // shift x = y + c2/3 to the depressed cubic y^3 + p y + q = 0
    const double p = c1 - c2 * c2 / 3.0;
    const double q = -2.0 * c2 * c2 * c2 / 27.0 + c2 * c1 / 3.0 - c0;
    std::vector<double> roots;
    if (std::abs(p) < 1e-30) {
        const double y = std::cbrt(-q);
        roots = {y, y, y};
    } else {
        const double mp = std::sqrt(-4.0 * p / 3.0);
        double cosarg = 3.0 * q / (p * mp);
        cosarg = std::min(1.0, std::max(-1.0, cosarg));
        const double phi = std::acos(cosarg) / 3.0;
        for (int k = 0; k < 3; ++k)
            roots.push_back(mp * std::cos(phi - 2.0 * 3.14159265358979323846 * k / 3.0));
    }
    for (double& r : roots) r += c2 / 3.0;
    std::sort(roots.begin(), roots.end(), std::greater<>());
    return roots;
}

} // namespace bcc::testing
