#include "bcc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bcc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct JacobiResult {
    ComplexMatrix w; // rotated copy of A (columns become orthogonal)
    ComplexMatrix v; // accumulated right factor
};

// One-sided Jacobi on the columns of `a` (requires rows >= cols for good
// behaviour; callers transpose when needed). W = A V with V unitary.
JacobiResult one_sided_jacobi(const ComplexMatrix& a) {
    const std::size_t n = a.cols();
    JacobiResult res{a, ComplexMatrix::identity(n)};
    ComplexMatrix& w = res.w;
    ComplexMatrix& v = res.v;
    const std::size_t m = a.rows();

    double fro2 = 0.0;
    for (const Complex& z : a.flat()) fro2 += std::norm(z);
    const double tol = 1e-13 * fro2;
    if (fro2 == 0.0 || n < 2) return res;

    auto col_dot = [&](const ComplexMatrix& mat, std::size_t i, std::size_t j) {
        Complex acc{};
        for (std::size_t k = 0; k < mat.rows(); ++k) acc += std::conj(mat(k, i)) * mat(k, j);
        return acc;
    };

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const Complex g = col_dot(w, i, j);
                const double absg = std::abs(g);
                if (absg <= tol) continue;
                rotated = true;
                const double aii = std::real(col_dot(w, i, i));
                const double ajj = std::real(col_dot(w, j, j));
                // Phase-fold column j so the 2x2 Gram becomes real symmetric,
                // then apply the classical Jacobi rotation.
                const Complex alpha = g / absg;
                const double tau = (ajj - aii) / (2.0 * absg);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * cs;
                const Complex ca = std::conj(alpha);
                for (std::size_t k = 0; k < m; ++k) {
                    const Complex wi = w(k, i), wj = w(k, j);
                    w(k, i) = cs * wi - sn * ca * wj;
                    w(k, j) = sn * wi + cs * ca * wj;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex vi = v(k, i), vj = v(k, j);
                    v(k, i) = cs * vi - sn * ca * vj;
                    v(k, j) = sn * vi + cs * ca * vj;
                }
            }
        }
        if (!rotated) return res;
    }
    throw BccError("svd: Jacobi iteration did not converge");
}

SpectralData svd_tall(const ComplexMatrix& a, bool want_factors) {
    JacobiResult jr = one_sided_jacobi(a);
    const std::size_t m = a.rows(), n = a.cols();

    std::vector<double> norms(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += std::norm(jr.w(i, j));
        norms[j] = std::sqrt(s);
    }
    std::vector<std::size_t> order(n);
    for (std::size_t j = 0; j < n; ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

    SpectralData out;
    out.rows = m;
    out.cols = n;
    out.singular_values.resize(n);
    for (std::size_t j = 0; j < n; ++j) out.singular_values[j] = norms[order[j]];

    if (want_factors) {
        ComplexMatrix u(m, n), v(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t src = order[j];
            const double s = norms[src];
            for (std::size_t i = 0; i < m; ++i) u(i, j) = s > 0.0 ? jr.w(i, src) / s : Complex{};
            for (std::size_t i = 0; i < n; ++i) v(i, j) = jr.v(i, src);
        }
        out.u = std::move(u);
        out.v = std::move(v);
    }
    return out;
}

} // namespace

SpectralData svd(const ComplexMatrix& a, bool want_factors) {
    if (a.rows() >= a.cols()) return svd_tall(a, want_factors);
    SpectralData t = svd_tall(conj_transpose(a), want_factors);
    SpectralData out;
    out.rows = a.rows();
    out.cols = a.cols();
    out.singular_values = std::move(t.singular_values);
    if (want_factors) {
        out.u = std::move(t.v); // A = (A*)^* = (U' S V'^*)^* = V' S U'^*
        out.v = std::move(t.u);
    }
    return out;
}

std::size_t numerical_rank(const SpectralData& s, double rel_threshold) {
    if (s.singular_values.empty()) return 0;
    const double cutoff = s.singular_values.front() * rel_threshold;
    std::size_t r = 0;
    for (double sv : s.singular_values)
        if (sv > cutoff && sv > 0.0) ++r;
    return r;
}

namespace {

void fft_in_place(std::vector<Complex>& x, bool inverse_twiddles) {
    const std::size_t n = x.size();
    if (n < 2) return;
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    const double sign = inverse_twiddles ? -1.0 : 1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        for (std::size_t s = 0; s < n; s += len) {
            for (std::size_t t = 0; t < len / 2; ++t) {
                const Complex w = std::polar(1.0, ang * static_cast<double>(t));
                const Complex u = x[s + t];
                const Complex tv = w * x[s + t + len / 2];
                x[s + t] = u + tv;
                x[s + t + len / 2] = u - tv;
            }
        }
    }
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

} // namespace

std::vector<Complex> circulant_spectrum(std::span<const Complex> a) {
    const std::size_t n = a.size();
    std::vector<Complex> lambda(a.begin(), a.end());
    if (n == 0) return lambda;
    if (is_power_of_two(n)) {
        fft_in_place(lambda, /*inverse_twiddles=*/false);
        return lambda;
    }
    std::vector<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex acc{};
        for (std::size_t j = 0; j < n; ++j)
            acc += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>((j * k) % n) /
                                       static_cast<double>(n)) *
                   a[j];
        out[k] = acc;
    }
    return out;
}

ComplexMatrix make_circulant(std::span<const Complex> a) {
    const std::size_t n = a.size();
    ComplexMatrix c(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) c(j, k) = a[(j + n - k) % n];
    return c;
}

double log2_elementary_symmetric(std::span<const double> log2_values, std::size_t r) {
    if (r == 0) return 0.0;
    if (r > log2_values.size()) return kNegInf;
    auto log2add = [](double x, double y) {
        if (x == kNegInf) return y;
        if (y == kNegInf) return x;
        const double hi = std::max(x, y), lo = std::min(x, y);
        return hi + std::log1p(std::exp2(lo - hi)) / std::numbers::ln2;
    };
    std::vector<double> dp(r + 1, kNegInf);
    dp[0] = 0.0;
    for (double lv : log2_values) {
        if (lv == kNegInf) continue; // zero entries contribute nothing
        for (std::size_t j = r; j >= 1; --j) {
            if (dp[j - 1] == kNegInf) continue;
            dp[j] = log2add(dp[j], dp[j - 1] + lv);
        }
    }
    return dp[r];
}

double log2_msv(const SpectralData& s, std::size_t r) {
    if (r < 1 || r > s.p()) throw BccError("msv: r out of range");
    std::vector<double> logs(s.p());
    for (std::size_t i = 0; i < s.p(); ++i) {
        const double sv = s.singular_values[i];
        logs[i] = sv > 0.0 ? 2.0 * std::log2(sv) : kNegInf;
    }
    return 0.5 * log2_elementary_symmetric(logs, r);
}

double msv(const SpectralData& s, std::size_t r) { return std::exp2(log2_msv(s, r)); }

double msv(const ComplexMatrix& a, std::size_t r) { return msv(svd(a), r); }

namespace {

// Visits all r-subsets of {0,...,n-1}.
template <typename F>
void for_each_subset(std::size_t n, std::size_t r, F&& fn) {
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i) idx[i] = i;
    while (true) {
        fn(std::span<const std::size_t>(idx));
        std::size_t i = r;
        while (i > 0) {
            --i;
            if (idx[i] != i + n - r) break;
            if (i == 0) return;
        }
        ++idx[i];
        for (std::size_t j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
}

double binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    k = std::min(k, n - k);
    double c = 1.0;
    for (std::size_t i = 0; i < k; ++i)
        c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return c;
}

} // namespace

double msv_bruteforce(const ComplexMatrix& a, std::size_t r) {
    const std::size_t m = a.rows(), n = a.cols();
    if (r < 1 || r > std::min(m, n)) throw BccError("msv_bruteforce: r out of range");
    if (std::min(m, n) > 12) throw BccError("msv_bruteforce: size guard exceeded (min(m,n) > 12)");
    const double count = binomial(m, r) * binomial(n, r);
    if (count > 2e7) throw BccError("msv_bruteforce: too many minors");
    double sum = 0.0;
    for_each_subset(m, r, [&](std::span<const std::size_t> ri) {
        for_each_subset(n, r, [&](std::span<const std::size_t> ci) {
            const Complex d = determinant(submatrix(a, ri, ci));
            sum += std::norm(d);
        });
    });
    return std::sqrt(sum);
}

double r_volume(const ComplexMatrix& a, std::size_t r) {
    const std::size_t m = a.rows();
    if (r < 1 || r > std::min(m, a.cols())) throw BccError("r_volume: r out of range");
    if (m > 20) throw BccError("r_volume: size guard exceeded (m > 20)");
    double best = 0.0;
    for_each_subset(m, r, [&](std::span<const std::size_t> ri) {
        // det(A_I A_I*) = squared volume of the parallelepiped of those rows
        ComplexMatrix gram(r, r);
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = 0; j < r; ++j) {
                Complex acc{};
                for (std::size_t k = 0; k < a.cols(); ++k)
                    acc += a(ri[i], k) * std::conj(a(ri[j], k));
                gram(i, j) = acc;
            }
        }
        const double vol2 = std::max(0.0, std::real(determinant(gram)));
        best = std::max(best, vol2);
    });
    return std::sqrt(best);
}

std::pair<double, double> rigidity_sandwich(const SpectralData& s, std::size_t r) {
    if (r >= s.p()) throw BccError("rigidity_sandwich: r out of range");
    const double sv = s.singular_values[r];
    return {sv / std::sqrt(static_cast<double>(s.cols)), sv};
}

PerturbationCheck check_perturbation(const ComplexMatrix& a, const ComplexMatrix& e) {
    if (a.rows() != e.rows() || a.cols() != e.cols())
        throw BccError("check_perturbation: shape mismatch");
    PerturbationCheck out;
    out.h = numerical_rank(svd(e));
    const SpectralData sa = svd(a);
    const SpectralData sb = svd(a + e);
    const std::size_t p = sa.p();
    out.slack = 1e-8 * (p > 0 ? sa.singular_values.front() : 0.0);
    for (std::size_t r = 1; r + out.h <= p; ++r) {
        const double lhs = sa.singular_values[r + out.h - 1];
        const double rhs = sb.singular_values[r - 1];
        if (lhs > rhs + out.slack) out.violations.push_back({r, lhs, rhs});
    }
    return out;
}

} // namespace bcc
