#include "bcc/probability.hpp"

#include "bcc/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

namespace bcc {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240;

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                            double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

} // namespace

DistributionConstants closed_form_constants() {
    DistributionConstants k;
    const double ln2 = std::numbers::ln2;
    k.gamma = (kEulerGamma + ln2) / ln2 + 1.0;
    k.theta = (std::numbers::pi * std::numbers::pi / 6.0 + (ln2 - kEulerGamma) * (ln2 - kEulerGamma)) /
              (ln2 * ln2);
    k.delta = std::exp2(-(k.gamma + std::sqrt(2.0 * k.theta)));
    k.c = 0.5 * (2.0 + k.gamma + std::sqrt(2.0 * k.theta));
    return k;
}

DistributionConstants constants() {
    static const DistributionConstants cached = [] {
        const double ln2 = std::numbers::ln2;
        const double tol = 1e-9;

        // gamma integral: -(1/sqrt(pi)) int_0^inf t^{-1/2} e^{-t} log2 t dt.
        // After t = u^2 it is 4 int_0^inf e^{-u^2} log2 u du; the log
        // singularity at 0 is removed by integrating log2 u on [0,1] exactly.
        auto g_smooth = [&](double u) {
            return u > 0.0 ? std::expm1(-u * u) * std::log2(u) : 0.0;
        };
        auto g_tail = [&](double u) { return std::exp(-u * u) * std::log2(u); };
        const double upper = std::sqrt(60.0); // exp(-60) tail is negligible
        const double integral = 4.0 * (adaptive_simpson(g_smooth, 0.0, 1.0, tol) - 1.0 / ln2 +
                                       adaptive_simpson(g_tail, 1.0, upper, tol));

        // theta integral: (1/2) int_0^inf e^{-t/2} log2^2 t dt
        //               = 4 int_0^inf u e^{-u^2/2} log2^2 u du after t = u^2.
        auto th = [&](double u) {
            return u > 0.0 ? u * std::exp(-u * u / 2.0) * std::log2(u) * std::log2(u) : 0.0;
        };
        const double upper2 = std::sqrt(120.0);
        const double theta = 4.0 * (adaptive_simpson(th, 0.0, 1.0, tol) +
                                    adaptive_simpson(th, 1.0, upper2, tol));

        DistributionConstants k;
        k.gamma = -integral / std::sqrt(std::numbers::pi);
        k.theta = theta;
        k.delta = std::exp2(-(k.gamma + std::sqrt(2.0 * k.theta)));
        k.c = 0.5 * (2.0 + k.gamma + std::sqrt(2.0 * k.theta));

        const DistributionConstants cf = closed_form_constants();
        if (std::abs(k.gamma - cf.gamma) > 1e-4 || std::abs(k.theta - cf.theta) > 1e-4 ||
            std::abs(k.delta - cf.delta) > 1e-4 || std::abs(k.c - cf.c) > 1e-4)
            throw BccError("constants: quadrature disagrees with the closed forms");
        return k;
    }();
    return cached;
}

std::vector<std::vector<Complex>> sample_gaussian(const GaussianSpec& spec, std::size_t count) {
    const ComplexMatrix* basis = spec.basis ? &*spec.basis : nullptr;
    if (basis) {
        if (basis->rows() != spec.dim) throw BccError("sample_gaussian: basis row count != dim");
        if (orthonormality_defect(*basis) > 1e-10)
            throw BccError("sample_gaussian: basis columns are not orthonormal");
    }
    const std::size_t draw_dim = basis ? basis->cols() : spec.dim;
    std::vector<std::vector<Complex>> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        CounterRng rng(CounterRng::derive_stream(spec.seed, 1 + i));
        std::vector<Complex> zeta(draw_dim);
        for (Complex& z : zeta) z = rng.complex_normal();
        if (!basis) {
            out[i] = std::move(zeta);
        } else {
            out[i] = matvec(*basis, zeta);
        }
    }
    return out;
}

double TrialStats::rate_std_error() const {
    if (trials == 0) return 0.0;
    const double p = success_rate();
    return std::sqrt(std::max(p * (1.0 - p), 1e-12) / static_cast<double>(trials));
}

double TrialStats::mean_std_error() const {
    if (trials == 0) return 0.0;
    return std::sqrt(std::max(variance, 0.0) / static_cast<double>(trials));
}

std::string TrialStats::to_line() const {
    std::ostringstream os;
    os << "trials:" << trials << " successes:" << successes << " mean:" << format_double(mean)
       << " variance:" << format_double(variance) << " seed:" << seed
       << " threshold:" << format_double(threshold);
    return os.str();
}

namespace {

// Deterministic trial batching. Trials are grouped into fixed blocks of 1024;
// blocks may run on several threads but are folded in block order, so results
// do not depend on the partitioning.
template <typename Batch, typename PerBatch>
Batch run_batches(std::uint64_t trials, unsigned threads, PerBatch per_batch) {
    constexpr std::uint64_t kBlock = 1024;
    const std::uint64_t nblocks = (trials + kBlock - 1) / kBlock;
    std::vector<Batch> results(nblocks);
    auto work_block = [&](std::uint64_t bi) {
        const std::uint64_t lo = bi * kBlock;
        const std::uint64_t hi = std::min(trials, lo + kBlock);
        results[bi] = per_batch(lo, hi);
    };
    if (threads <= 1 || nblocks <= 1) {
        for (std::uint64_t bi = 0; bi < nblocks; ++bi) work_block(bi);
    } else {
        std::atomic<std::uint64_t> next{0};
        const unsigned nt = std::min<std::uint64_t>(threads, nblocks);
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (unsigned t = 0; t < nt; ++t)
            pool.emplace_back([&] {
                for (std::uint64_t bi = next.fetch_add(1); bi < nblocks; bi = next.fetch_add(1))
                    work_block(bi);
            });
        for (std::thread& th : pool) th.join();
    }
    Batch total{};
    for (const Batch& b : results) total.merge(b);
    return total;
}

struct MomentAccum {
    std::uint64_t count = 0;
    double s1 = 0.0, s2 = 0.0;
    void push(double v) {
        ++count;
        s1 += v;
        s2 += v * v;
    }
    void merge(const MomentAccum& o) {
        count += o.count;
        s1 += o.s1;
        s2 += o.s2;
    }
    double mean() const { return count ? s1 / static_cast<double>(count) : 0.0; }
    double variance() const {
        if (count < 2) return 0.0;
        const double n = static_cast<double>(count);
        return std::max(0.0, (s2 - s1 * s1 / n) / (n - 1.0));
    }
};

} // namespace

LinearCombStats mc_linear_comb(std::span<const Complex> f, std::uint64_t trials,
                               std::uint64_t seed, unsigned threads) {
    double norm2 = 0.0;
    for (const Complex& z : f) norm2 += std::norm(z);
    if (norm2 <= 0.0) throw BccError("mc_linear_comb: f must be nonzero");

    struct Batch {
        MomentAccum t;
        std::array<std::uint64_t, 3> tail{0, 0, 0};
        void merge(const Batch& o) {
            t.merge(o.t);
            for (int i = 0; i < 3; ++i) tail[i] += o.tail[i];
        }
    };
    const std::array<double, 3> lambdas{2.0, 4.0, 8.0};
    const std::vector<Complex> fv(f.begin(), f.end());
    Batch total = run_batches<Batch>(trials, threads, [&](std::uint64_t lo, std::uint64_t hi) {
        Batch b;
        for (std::uint64_t i = lo; i < hi; ++i) {
            CounterRng rng(CounterRng::derive_stream(seed, 1 + i));
            Complex s{};
            for (const Complex& fi : fv) s += fi * rng.complex_normal();
            const double t = std::norm(s) / (2.0 * norm2);
            b.t.push(t);
            for (int k = 0; k < 3; ++k)
                if (t >= lambdas[k]) ++b.tail[k];
        }
        return b;
    });

    LinearCombStats out;
    out.stats.trials = trials;
    out.stats.seed = seed;
    out.stats.mean = total.t.mean();
    out.stats.variance = total.t.variance();
    out.stats.threshold = lambdas[1];
    out.stats.successes = total.tail[1];
    for (int k = 0; k < 3; ++k)
        out.tails[k] = {lambdas[k],
                        trials ? static_cast<double>(total.tail[k]) / static_cast<double>(trials) : 0.0};
    return out;
}

LogBoundsStats mc_log_bounds(const std::array<double, 4>& covariance, std::uint64_t trials,
                             std::uint64_t seed, unsigned threads) {
    const double a = covariance[0], b = covariance[1], c = covariance[2], d = covariance[3];
    if (std::abs(b - c) > 1e-12 * (std::abs(b) + std::abs(c) + 1.0))
        throw BccError("mc_log_bounds: covariance must be symmetric");
    if (a < 0.0 || d < 0.0 || a * d - b * c < -1e-12 || (a == 0.0 && d == 0.0))
        throw BccError("mc_log_bounds: covariance must be PSD and nonzero");

    // eigendecomposition of the symmetric 2x2, then L = Q sqrt(Lambda)
    const double tr = a + d, det = std::max(0.0, a * d - b * c);
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    const double l1 = tr / 2.0 + disc, l2 = std::max(0.0, tr / 2.0 - disc);
    double q1x, q1y;
    if (std::abs(b) > 1e-300) {
        q1x = l1 - d;
        q1y = b;
    } else if (a >= d) {
        q1x = 1.0;
        q1y = 0.0;
    } else {
        q1x = 0.0;
        q1y = 1.0;
    }
    const double qn = std::hypot(q1x, q1y);
    q1x /= qn;
    q1y /= qn;
    const double s1 = std::sqrt(l1), s2 = std::sqrt(l2);

    struct Batch {
        MomentAccum logv;   // log2 |Z|^2
        MomentAccum sq;     // |Z|^2
        double s3 = 0.0, s4 = 0.0; // higher raw sums of log2 |Z|^2
        void merge(const Batch& o) {
            logv.merge(o.logv);
            sq.merge(o.sq);
            s3 += o.s3;
            s4 += o.s4;
        }
    };
    Batch total = run_batches<Batch>(trials, threads, [&](std::uint64_t lo, std::uint64_t hi) {
        Batch bt;
        for (std::uint64_t i = lo; i < hi; ++i) {
            CounterRng rng(CounterRng::derive_stream(seed, 1 + i));
            const double g1 = rng.normal(), g2 = rng.normal();
            const double re = s1 * g1 * q1x - s2 * g2 * q1y;
            const double im = s1 * g1 * q1y + s2 * g2 * q1x;
            const double z2 = std::max(re * re + im * im, 5e-324);
            const double lv = std::log2(z2);
            bt.logv.push(lv);
            bt.sq.push(z2);
            bt.s3 += lv * lv * lv;
            bt.s4 += lv * lv * lv * lv;
        }
        return bt;
    });

    LogBoundsStats out;
    out.stats.trials = trials;
    out.stats.seed = seed;
    out.stats.mean = total.logv.mean();
    out.stats.variance = total.logv.variance();
    out.delta = std::log2(total.sq.mean()) - total.logv.mean();
    const double n = static_cast<double>(std::max<std::uint64_t>(trials, 1));
    const double se_log_mean = std::sqrt(total.logv.variance() / n);
    const double se_sq_mean = std::sqrt(total.sq.variance() / n);
    out.delta_std_error =
        se_log_mean + se_sq_mean / (std::max(total.sq.mean(), 1e-300) * std::numbers::ln2);
    // standard error of the variance estimate from the central fourth moment
    const double mu = total.logv.mean();
    const double m2 = total.logv.s2 / n - mu * mu;
    const double m4 = total.s4 / n - 4.0 * mu * total.s3 / n + 6.0 * mu * mu * total.logv.s2 / n -
                      3.0 * mu * mu * mu * mu;
    out.variance_std_error = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
    return out;
}

Lemma42Stats mc_lemma42(const ComplexMatrix& forms, std::size_t r, std::uint64_t trials,
                        std::uint64_t seed, unsigned threads) {
    const std::size_t n = forms.rows(), k = forms.cols();
    if (r < 1 || r >= n) throw BccError("mc_lemma42: need 1 <= r < n");

    // Witness subspace: complement of the span of the top n-r left singular
    // vectors; R is the (n-r+1)-th singular value (the rigidity upper bound).
    const SpectralData sv = svd(forms, /*want_factors=*/true);
    const std::size_t rank = numerical_rank(sv);
    ComplexMatrix u_rank(n, rank);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < rank; ++j) u_rank(i, j) = (*sv.u)(i, j);
    const ComplexMatrix frame = complete_orthonormal_basis(u_rank);
    ComplexMatrix basis(n, r);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < r; ++j) basis(i, j) = frame(i, n - r + j);

    const double big_r = n - r < sv.p() ? sv.singular_values[n - r] : 0.0;
    const double threshold = 2.0 * std::sqrt(std::log(4.0 * static_cast<double>(k))) * big_r;
    const ComplexMatrix fstar = conj_transpose(forms);

    struct Batch {
        std::uint64_t succ = 0;
        MomentAccum maxval;
        void merge(const Batch& o) {
            succ += o.succ;
            maxval.merge(o.maxval);
        }
    };
    Batch total = run_batches<Batch>(trials, threads, [&](std::uint64_t lo, std::uint64_t hi) {
        Batch bt;
        std::vector<Complex> zeta(r);
        for (std::uint64_t i = lo; i < hi; ++i) {
            CounterRng rng(CounterRng::derive_stream(seed, 1 + i));
            for (Complex& z : zeta) z = rng.complex_normal();
            const std::vector<Complex> a = matvec(basis, zeta);
            const std::vector<Complex> vals = matvec(fstar, a);
            double mx = 0.0;
            for (const Complex& v : vals) mx = std::max(mx, std::abs(v));
            bt.maxval.push(mx);
            if (mx <= threshold) ++bt.succ;
        }
        return bt;
    });

    Lemma42Stats out;
    out.stats.trials = trials;
    out.stats.seed = seed;
    out.stats.successes = total.succ;
    out.stats.mean = total.maxval.mean();
    out.stats.variance = total.maxval.variance();
    out.stats.threshold = threshold;
    out.rig_upper = big_r;
    return out;
}

Lemma51Stats mc_lemma51(const ComplexMatrix& basis, std::span<const std::size_t> index_set,
                        std::uint64_t trials, std::uint64_t seed, unsigned threads) {
    const std::size_t r = basis.cols();
    if (index_set.size() != r) throw BccError("mc_lemma51: |I| must equal the basis column count");
    if (orthonormality_defect(basis) > 1e-10)
        throw BccError("mc_lemma51: basis columns are not orthonormal");
    for (std::size_t i : index_set)
        if (i >= basis.rows()) throw BccError("mc_lemma51: index out of range");

    ComplexMatrix bi(r, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) bi(i, j) = basis(index_set[i], j);
    const double det_gram = std::norm(determinant(bi));
    // E|zeta_j|^2 = 2, so Sigma = 2 B_I B_I^* and det Sigma = 2^r det_gram.
    const double det_sigma = std::exp2(static_cast<double>(r)) * det_gram;
    const double delta = constants().delta;
    const double log2_threshold =
        static_cast<double>(r) * std::log2(delta) +
        (det_sigma > 0.0 ? std::log2(det_sigma) : -std::numeric_limits<double>::infinity());

    struct Batch {
        std::uint64_t succ = 0;
        MomentAccum prod;
        void merge(const Batch& o) {
            succ += o.succ;
            prod.merge(o.prod);
        }
    };
    Batch total = run_batches<Batch>(trials, threads, [&](std::uint64_t lo, std::uint64_t hi) {
        Batch bt;
        std::vector<Complex> zeta(r), z(r);
        for (std::uint64_t i = lo; i < hi; ++i) {
            CounterRng rng(CounterRng::derive_stream(seed, 1 + i));
            for (Complex& zz : zeta) zz = rng.complex_normal();
            for (std::size_t row = 0; row < r; ++row) {
                Complex acc{};
                for (std::size_t col = 0; col < r; ++col) acc += bi(row, col) * zeta[col];
                z[row] = acc;
            }
            double log2prod = 0.0; // products accumulated in the log domain
            for (const Complex& zz : z) log2prod += std::log2(std::max(std::norm(zz), 5e-324));
            bt.prod.push(std::exp2(log2prod));
            if (log2prod >= log2_threshold) ++bt.succ;
        }
        return bt;
    });

    Lemma51Stats out;
    out.stats.trials = trials;
    out.stats.seed = seed;
    out.stats.successes = total.succ;
    out.stats.mean = total.prod.mean();
    out.stats.variance = total.prod.variance();
    out.stats.threshold = std::exp2(log2_threshold);
    out.det_gram = det_gram;
    out.det_sigma = det_sigma;
    out.log2_threshold = log2_threshold;
    return out;
}

Lemma43Stats mc_lemma43(std::size_t n, std::size_t r, std::uint64_t trials, std::uint64_t seed,
                        unsigned threads) {
    if (n < 1 || n > 512 || (n & (n - 1)) != 0)
        throw BccError("mc_lemma43: n must be a power of two, at most 512");
    if (r < 1 || r > n) throw BccError("mc_lemma43: need 1 <= r <= n");

    // Random r-dimensional coefficient subspace from QR of a Gaussian matrix.
    ComplexMatrix g(n, r);
    {
        CounterRng rng(CounterRng::derive_stream(seed, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < r; ++j) g(i, j) = rng.complex_normal();
    }
    const ComplexMatrix basis = orthonormalize_columns(g);
    if (basis.cols() != r) throw BccError("mc_lemma43: subspace degenerated");

    const DistributionConstants ks = constants();
    const double rd = static_cast<double>(r), nd = static_cast<double>(n);
    const double threshold_msv = rd / 2.0 * std::log2(nd) + rd / 2.0 * std::log2(ks.delta) - nd / 2.0;
    const double threshold_bound = rd / 2.0 * std::log2(nd) - ks.c * nd;

    struct Batch {
        std::uint64_t succ_msv = 0, succ_bound = 0;
        MomentAccum logmsv;
        void merge(const Batch& o) {
            succ_msv += o.succ_msv;
            succ_bound += o.succ_bound;
            logmsv.merge(o.logmsv);
        }
    };
    Batch total = run_batches<Batch>(trials, threads, [&](std::uint64_t lo, std::uint64_t hi) {
        Batch bt;
        std::vector<Complex> zeta(r);
        std::vector<double> log_sq(n);
        for (std::uint64_t i = lo; i < hi; ++i) {
            CounterRng rng(CounterRng::derive_stream(seed, 1 + i));
            for (Complex& z : zeta) z = rng.complex_normal();
            const std::vector<Complex> a = matvec(basis, zeta);
            // singular values of the circulant are |DFT a|
            const std::vector<Complex> lambda = circulant_spectrum(a);
            for (std::size_t j = 0; j < n; ++j)
                log_sq[j] = std::log2(std::max(std::norm(lambda[j]), 5e-324));
            const double log2msv = 0.5 * log2_elementary_symmetric(log_sq, r);
            bt.logmsv.push(log2msv);
            if (log2msv >= threshold_msv) ++bt.succ_msv;
            if (log2msv - nd / 2.0 >= threshold_bound) ++bt.succ_bound;
        }
        return bt;
    });

    Lemma43Stats out;
    out.stats.trials = trials;
    out.stats.seed = seed;
    out.stats.successes = total.succ_msv;
    out.stats.mean = total.logmsv.mean();
    out.stats.variance = total.logmsv.variance();
    out.stats.threshold = threshold_msv;
    out.successes_bound = total.succ_bound;
    out.threshold_bound = threshold_bound;
    return out;
}

Lemma62Stats mc_lemma62(std::span<const double> variances, std::size_t n, double eps,
                        std::uint64_t trials, std::uint64_t seed, bool duplicate_pairs,
                        unsigned threads) {
    if (n < 1) throw BccError("mc_lemma62: n must be at least 1");
    if (variances.size() != 1 && variances.size() != n)
        throw BccError("mc_lemma62: variance list must have one entry or n entries");
    for (double v : variances)
        if (v < 0.0 || v > 1.0) throw BccError("mc_lemma62: variances must lie in [0, 1]");
    std::vector<double> sd(n);
    for (std::size_t i = 0; i < n; ++i)
        sd[i] = std::sqrt(variances.size() == 1 ? variances[0] : variances[i]);

    const double threshold = std::sqrt(2.0 * std::log(static_cast<double>(n))) + eps;

    struct Batch {
        std::uint64_t exceed = 0;
        MomentAccum mx;
        void merge(const Batch& o) {
            exceed += o.exceed;
            mx.merge(o.mx);
        }
    };
    Batch total = run_batches<Batch>(trials, threads, [&](std::uint64_t lo, std::uint64_t hi) {
        Batch bt;
        for (std::uint64_t i = lo; i < hi; ++i) {
            CounterRng rng(CounterRng::derive_stream(seed, 1 + i));
            double mx = 0.0;
            if (!duplicate_pairs) {
                for (std::size_t j = 0; j < n; ++j) mx = std::max(mx, std::abs(sd[j] * rng.normal()));
            } else {
                for (std::size_t j = 0; j < n; j += 2) {
                    const double g = rng.normal();
                    mx = std::max(mx, std::abs(sd[j] * g));
                    if (j + 1 < n) mx = std::max(mx, std::abs(sd[j + 1] * g));
                }
            }
            bt.mx.push(mx);
            if (mx > threshold) ++bt.exceed;
        }
        return bt;
    });

    Lemma62Stats out;
    out.stats.trials = trials;
    out.stats.seed = seed;
    out.stats.successes = total.exceed;
    out.stats.mean = total.mx.mean();
    out.stats.variance = total.mx.variance();
    out.stats.threshold = threshold;
    return out;
}

} // namespace bcc
