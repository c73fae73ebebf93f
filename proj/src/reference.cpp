#include "bcc/reference.hpp"

#include <cmath>
#include <numbers>

namespace bcc::reference {

std::vector<Complex> cyclic_convolution(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) throw BccError("cyclic_convolution: length mismatch");
    const std::size_t n = a.size();
    std::vector<Complex> c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c[(i + j) % n] += a[i] * b[j];
    return c;
}

std::vector<Complex> dft(std::span<const Complex> x, bool inverse) {
    const std::size_t n = x.size();
    std::vector<Complex> out(n);
    const double sign = inverse ? -1.0 : 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        Complex acc{};
        for (std::size_t j = 0; j < n; ++j)
            acc += std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>((j * k) % n) /
                                       static_cast<double>(n)) *
                   x[j];
        out[k] = inverse ? acc / static_cast<double>(n) : acc;
    }
    return out;
}

std::vector<Complex> polymul(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.empty() || b.empty()) return {};
    std::vector<Complex> c(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

std::vector<Complex> power_series_inverse(std::span<const Complex> a, std::size_t n) {
    std::vector<Complex> b(n + 1);
    b[0] = 1.0;
    for (std::size_t k = 1; k <= n; ++k) {
        Complex acc{};
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t ai = k - i; // coefficient a_{k-i}, 1-based
            if (ai - 1 < a.size()) acc += a[ai - 1] * b[i];
        }
        b[k] = acc;
    }
    return {b.begin() + 1, b.end()};
}

DivisionResult divide(std::span<const Complex> f, std::span<const Complex> g_low) {
    const std::size_t m = g_low.size();
    if (f.size() < m + 1) throw BccError("divide: dividend degree below divisor degree");
    const std::size_t n = f.size() - 1;
    std::vector<Complex> rem(f.begin(), f.end());
    std::vector<Complex> q(n - m + 1);
    for (std::size_t k = n - m + 1; k-- > 0;) {
        const Complex coef = rem[k + m]; // monic divisor
        q[k] = coef;
        rem[k + m] = 0.0;
        for (std::size_t i = 0; i < m; ++i) rem[k + i] -= coef * g_low[i];
    }
    rem.resize(m);
    return {std::move(q), std::move(rem)};
}

Complex eval_poly(std::span<const Complex> f, Complex t) {
    Complex acc{};
    for (std::size_t i = f.size(); i-- > 0;) acc = acc * t + f[i];
    return acc;
}

} // namespace bcc::reference
