#include "bcc/generators.hpp"

#include <cmath>
#include <numbers>

namespace bcc {

namespace {

using Wire = CircuitBuilder::Wire;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

std::size_t log2_exact(std::size_t n) {
    std::size_t k = 0;
    while ((std::size_t{1} << k) < n) ++k;
    return k;
}

// In-place iterative radix-2 FFT over wires. Computes sum_j omega^{jk} v_j
// with omega = e^{2 pi i/n} (conjugate twiddles when `inverse_twiddles`).
// No 1/n normalization. Twiddle factors have modulus 1; the trivial twiddle
// omega^0 emits no scale.
void emit_fft(CircuitBuilder& b, std::vector<Wire>& v, bool inverse_twiddles, Section sec) {
    const std::size_t n = v.size();
    if (n < 2) return;
    for (std::size_t i = 1, j = 0; i < n; ++i) { // bit-reversal permutation (free rewiring)
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(v[i], v[j]);
    }
    const double sign = inverse_twiddles ? -1.0 : 1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        for (std::size_t s = 0; s < n; s += len) {
            for (std::size_t t = 0; t < len / 2; ++t) {
                const Wire u = v[s + t];
                Wire w = v[s + t + len / 2];
                if (t != 0) w = b.scale(std::polar(1.0, ang * static_cast<double>(t)), w, sec);
                v[s + t] = b.add(u, w, sec);
                v[s + t + len / 2] = b.sub(u, w, sec);
            }
        }
    }
}

// Divides each wire by n = 2^k through k successive halvings.
void emit_divide_by_n(CircuitBuilder& b, std::vector<Wire>& v, std::size_t log2_n, Section sec) {
    for (Wire& w : v)
        for (std::size_t t = 0; t < log2_n; ++t) w = b.scale(Complex{0.5, 0.0}, w, sec);
}

struct PolySections {
    Section f = Section::General;
    Section g = Section::General;
    Section prod = Section::General;
    Section out = Section::General;
};

// Coefficients of f*g (lengths |f|+|g|-1), FFT based, truncated to
// `out_count`. Either factor may be empty or contain zero wires.
std::vector<Wire> emit_polymul(CircuitBuilder& b, std::vector<Wire> f, std::vector<Wire> g,
                               std::size_t out_count, const PolySections& sec = {}) {
    std::vector<Wire> out(out_count, CircuitBuilder::zero());
    if (f.empty() || g.empty() || out_count == 0) return out;
    const std::size_t full = f.size() + g.size() - 1;
    const std::size_t n = next_power_of_two(full);
    f.resize(n, CircuitBuilder::zero());
    g.resize(n, CircuitBuilder::zero());
    emit_fft(b, f, false, sec.f);
    emit_fft(b, g, false, sec.g);
    std::vector<Wire> p(n);
    for (std::size_t k = 0; k < n; ++k) p[k] = b.mul(f[k], g[k], sec.prod);
    emit_fft(b, p, true, sec.out);
    emit_divide_by_n(b, p, log2_exact(n), sec.out);
    for (std::size_t k = 0; k < out_count && k < full; ++k) out[k] = p[k];
    return out;
}

// First `count` coefficients w_1..w_count of the power series inverse of
// 1 - sum_i a[i-1] X^i, via Newton doubling. Writing u for the input series
// and 1 + w for the inverse, each step extends w by
//   e = u - w + u w   (vanishes below the current precision),
//   w' = w + e + w e,
// doubling the number of correct coefficients.
std::vector<Wire> emit_series_inverse(CircuitBuilder& b, std::span<const Wire> a,
                                      std::size_t count) {
    std::vector<Wire> w; // w[i] = coefficient of X^{i+1}
    if (count == 0) return w;
    auto u_at = [&](std::size_t deg) { // coefficient of X^deg of u, deg >= 1
        return deg - 1 < a.size() ? a[deg - 1] : CircuitBuilder::zero();
    };
    std::size_t q = 0; // coefficients 1..q of w are final
    while (q < count) {
        const std::size_t q2 = std::min(2 * q + 1, count);
        // t = u*w, needed for degrees q+1..q2; u truncated to degree q2-1.
        std::vector<Wire> ubar;
        for (std::size_t d = 1; d + 1 <= q2; ++d) ubar.push_back(u_at(d));
        const std::vector<Wire> t = emit_polymul(b, ubar, w, q2 > 1 ? q2 - 1 : 0);
        // e_k = u_k + t_k for k in (q, q2]; below that e vanishes identically.
        std::vector<Wire> e(q2 - q);
        for (std::size_t k = q + 1; k <= q2; ++k) {
            Wire tk = k >= 2 && k - 2 < t.size() ? t[k - 2] : CircuitBuilder::zero();
            e[k - q - 1] = b.add(u_at(k), tk);
        }
        // s = w*e, needed for degrees up to q2.
        const std::vector<Wire> s =
            emit_polymul(b, w, e, q2 >= q + 2 ? q2 - q - 1 : 0);
        w.resize(q2, CircuitBuilder::zero());
        for (std::size_t k = q + 1; k <= q2; ++k) {
            const std::size_t si = k - q - 2; // s starts at degree q+2
            Wire sk = (k >= q + 2 && si < s.size()) ? s[si] : CircuitBuilder::zero();
            w[k - 1] = b.add(e[k - q - 1], sk);
        }
        q = q2;
    }
    return w;
}

} // namespace

Circuit gen_dft(std::size_t n, bool inverse) {
    if (!is_power_of_two(n)) throw BccError("gen_dft: n must be a power of two");
    CircuitBuilder b(CircuitKind::Linear, n);
    std::vector<Wire> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = b.input_x(i);
    emit_fft(b, v, inverse, Section::General);
    if (inverse) emit_divide_by_n(b, v, log2_exact(n), Section::General);
    for (Wire w : v) b.declare_output(w);
    return b.take();
}

Circuit gen_convolution_fft(std::size_t n) {
    if (!is_power_of_two(n)) throw BccError("gen_convolution_fft: n must be a power of two");
    CircuitBuilder b(CircuitKind::Bilinear, n, n);
    std::vector<Wire> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = b.input_x(i);
        y[i] = b.input_y(i);
    }
    emit_fft(b, x, false, Section::LinX);
    emit_fft(b, y, false, Section::LinY);
    std::vector<Wire> p(n);
    for (std::size_t k = 0; k < n; ++k) p[k] = b.mul(x[k], y[k], Section::Prod);
    emit_fft(b, p, true, Section::Out);
    emit_divide_by_n(b, p, log2_exact(n), Section::Out);
    for (Wire w : p) b.declare_output(w, Section::Out);
    return b.take();
}

Circuit gen_convolution_naive(std::size_t n) {
    if (n < 1) throw BccError("gen_convolution_naive: n must be at least 1");
    CircuitBuilder b(CircuitKind::Bilinear, n, n);
    // All n^2 products first to respect the section ordering, then n^2 - n
    // additions: size is exactly 2n^2 - n.
    std::vector<std::vector<Wire>> terms(n);
    for (std::size_t k = 0; k < n; ++k) {
        terms[k].reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = (k + n - i) % n;
            terms[k].push_back(b.mul(b.input_x(i), b.input_y(j), Section::Prod));
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        Wire acc = terms[k][0];
        for (std::size_t i = 1; i < n; ++i) acc = b.add(acc, terms[k][i], Section::Out);
        b.declare_output(acc, Section::Out);
    }
    return b.take();
}

Circuit gen_polymul(std::size_t n) {
    if (n < 1) throw BccError("gen_polymul: n must be at least 1");
    CircuitBuilder b(CircuitKind::Bilinear, n, n);
    const std::size_t padded = next_power_of_two(2 * n);
    std::vector<Wire> f(padded, CircuitBuilder::zero()), g(padded, CircuitBuilder::zero());
    for (std::size_t i = 0; i < n; ++i) {
        f[i] = b.input_x(i);
        g[i] = b.input_y(i);
    }
    emit_fft(b, f, false, Section::LinX);
    emit_fft(b, g, false, Section::LinY);
    std::vector<Wire> p(padded);
    for (std::size_t k = 0; k < padded; ++k) p[k] = b.mul(f[k], g[k], Section::Prod);
    emit_fft(b, p, true, Section::Out);
    emit_divide_by_n(b, p, log2_exact(padded), Section::Out);
    for (std::size_t k = 0; k + 1 < 2 * n; ++k) b.declare_output(p[k], Section::Out);
    return b.take();
}

Circuit gen_power_series_inv(std::size_t n) {
    if (n < 1) throw BccError("gen_power_series_inv: n must be at least 1");
    CircuitBuilder b(CircuitKind::General, n);
    std::vector<Wire> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = b.input_x(i);
    const std::vector<Wire> w = emit_series_inverse(b, a, n);
    for (Wire c : w) b.declare_output(c);
    return b.take();
}

Circuit gen_division(std::size_t n, std::size_t m) {
    if (m < 1 || n < m) throw BccError("gen_division: need n >= m >= 1");
    CircuitBuilder b(CircuitKind::General, n + 1 + m);
    std::vector<Wire> f(n + 1), g_low(m);
    for (std::size_t i = 0; i <= n; ++i) f[i] = b.input_x(i);
    for (std::size_t i = 0; i < m; ++i) g_low[i] = b.input_x(n + 1 + i);

    const std::size_t d = n - m; // quotient degree
    // rev(g) = 1 + sum_{i=1..m} g_{m-i} X^i; the inverse routine expects the
    // series 1 - sum a_i X^i, so feed a_i = -g_{m-i}. Only the first d
    // coefficients can matter for an inverse mod X^{d+1}.
    std::vector<Wire> neg_rev_g(std::min(m, d));
    for (std::size_t i = 1; i <= neg_rev_g.size(); ++i)
        neg_rev_g[i - 1] = b.scale(Complex{-1.0, 0.0}, g_low[m - i]);
    const std::vector<Wire> w = emit_series_inverse(b, neg_rev_g, d);

    // rev(q) = rev(f) * (1 + w) mod X^{d+1}
    std::vector<Wire> rev_f(d + 1);
    for (std::size_t i = 0; i <= d; ++i) rev_f[i] = f[n - i];
    std::vector<Wire> rf_trunc(rev_f.begin(), rev_f.begin() + d);
    const std::vector<Wire> t = emit_polymul(b, rf_trunc, w, d); // degrees of rev_f * w, shifted by 1
    std::vector<Wire> rev_q(d + 1);
    for (std::size_t k = 0; k <= d; ++k) {
        const Wire tk = (k >= 1 && k - 1 < t.size()) ? t[k - 1] : CircuitBuilder::zero();
        rev_q[k] = b.add(rev_f[k], tk);
    }
    std::vector<Wire> q(d + 1);
    for (std::size_t i = 0; i <= d; ++i) q[i] = rev_q[d - i];

    // r = f - q*g restricted to degrees < m; only the g_low part contributes
    // there because q * X^m has valuation m.
    const std::vector<Wire> qg_low = emit_polymul(b, q, g_low, m);
    std::vector<Wire> r(m);
    for (std::size_t k = 0; k < m; ++k) r[k] = b.sub(f[k], qg_low[k]);

    for (Wire c : q) b.declare_output(c);
    for (Wire c : r) b.declare_output(c);
    return b.take();
}

} // namespace bcc
