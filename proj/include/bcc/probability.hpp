#pragma once

#include "bcc/complex_matrix.hpp"
#include "bcc/spectral.hpp"

#include <array>
#include <cstdint>

namespace bcc {

/// The distribution constants of the lower-bound machinery:
///   gamma = 1 - E[log2 X^2]          for X standard normal,
///   theta = E[log2^2 (X^2 + Y^2)]    for X, Y i.i.d. standard normal,
///   delta = 2^-(gamma + sqrt(2 theta)),
///   c     = (2 + gamma + sqrt(2 theta)) / 2.
struct DistributionConstants {
    double gamma = 0.0;
    double theta = 0.0;
    double delta = 0.0;
    double c = 0.0;
};

/// gamma and theta by adaptive Simpson quadrature of their defining
/// integrals (substitution t = u^2 at the origin); delta and c derived.
/// Throws if the quadrature disagrees with the closed forms by more
/// than 1e-4.
DistributionConstants constants();

/// Closed forms: gamma = (gamma_Euler + ln 2)/ln 2 + 1,
/// theta = (pi^2/6 + (ln 2 - gamma_Euler)^2) / ln^2 2.
DistributionConstants closed_form_constants();

struct GaussianSpec {
    std::size_t dim = 0;                 // ambient dimension n
    std::optional<ComplexMatrix> basis;  // n x r, column-orthonormal to 1e-10
    std::uint64_t seed = 0;
};

/// Batch of standard Gaussian vectors; with a basis B the samples are B zeta
/// with zeta standard Gaussian in C^r. Each complex component has i.i.d.
/// N(0,1) real and imaginary parts (E|z|^2 = 2). Deterministic in
/// (seed, sample index).
std::vector<std::vector<Complex>> sample_gaussian(const GaussianSpec& spec, std::size_t count);

struct TrialStats {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double mean = 0.0;
    double variance = 0.0; // unbiased sample variance
    std::uint64_t seed = 0;
    double threshold = 0.0;

    /// one key:value record, e.g. "trials:1000 successes:812 mean:0.99 ..."
    std::string to_line() const;
    double success_rate() const {
        return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
    }
    /// standard error of the success frequency
    double rate_std_error() const;
    /// standard error of the mean
    double mean_std_error() const;
};

/// T = |sum_i f_i Z_i|^2 / (2 ||f||^2) is Exp(1): mean and variance of T,
/// plus tail frequencies P[T >= lambda] at lambda = 2, 4, 8. successes and
/// threshold record the lambda = 4 tail.
struct LinearCombStats {
    TrialStats stats; // mean/variance of T
    std::array<std::pair<double, double>, 3> tails; // (lambda, empirical P[T >= lambda])
};
LinearCombStats mc_linear_comb(std::span<const Complex> f, std::uint64_t trials,
                               std::uint64_t seed, unsigned threads = 1);

/// Z = X + iY with (X, Y) centered Gaussian of the given 2x2 covariance:
/// checks 0 <= log2 E|Z|^2 - E log2|Z|^2 <= gamma and Var[log2|Z|^2] <= theta.
struct LogBoundsStats {
    TrialStats stats;     // mean/variance of log2 |Z|^2
    double delta = 0.0;   // log2(mean |Z|^2) - mean(log2 |Z|^2)
    double delta_std_error = 0.0;
    double variance_std_error = 0.0; // of the variance estimate
};
LogBoundsStats mc_log_bounds(const std::array<double, 4>& covariance, std::uint64_t trials,
                             std::uint64_t seed, unsigned threads = 1);

/// Forms f_1..f_k are the columns of an n x k matrix. The sampling subspace
/// is the orthogonal complement of the span of the top n-r left singular
/// vectors; the threshold is 2 sqrt(ln(4k)) * sigma_{n-r+1}. A success is a
/// sample with max_i |f_i(a)| below the threshold; the lemma predicts
/// frequency at least 1/2.
struct Lemma42Stats {
    TrialStats stats;
    double rig_upper = 0.0; // sigma_{n-r+1}, the R in the threshold
};
Lemma42Stats mc_lemma42(const ComplexMatrix& forms, std::size_t r, std::uint64_t trials,
                        std::uint64_t seed, unsigned threads = 1);

/// Z = rows I of B zeta for column-orthonormal B. Checks
/// E[prod |Z_i|^2] >= det Sigma and P[prod >= delta^r det Sigma] > 1/2,
/// where Sigma = 2 B_I B_I^* under the E|zeta_j|^2 = 2 convention.
/// Products are accumulated in the log domain.
struct Lemma51Stats {
    TrialStats stats;        // mean/variance of the product, successes vs threshold
    double det_gram = 0.0;   // |det B_I|^2
    double det_sigma = 0.0;  // 2^r det_gram
    double log2_threshold = 0.0; // r log2 delta + log2 det_sigma
};
Lemma51Stats mc_lemma51(const ComplexMatrix& basis, std::span<const std::size_t> index_set,
                        std::uint64_t trials, std::uint64_t seed, unsigned threads = 1);

/// Random circulants from a random r-dimensional coefficient subspace:
/// frequency of log2 MSV_r >= (r/2) log2 n + (r/2) log2 delta - n/2 and of
/// msv_bound >= (r/2) log2 n - c n. Both should exceed 1/2.
struct Lemma43Stats {
    TrialStats stats;               // successes: the MSV inequality; mean of log2 MSV_r
    std::uint64_t successes_bound = 0; // the msv_bound inequality
    double threshold_bound = 0.0;
};
Lemma43Stats mc_lemma43(std::size_t n, std::size_t r, std::uint64_t trials, std::uint64_t seed,
                        unsigned threads = 1);

/// Exceedance of max_i |X_i| over sqrt(2 ln n) + eps for a centered real
/// Gaussian vector with the given per-component variances (size n, or size 1
/// to broadcast; all <= 1). With duplicate_pairs, adjacent components are
/// copies, giving a correlated comparison point. mean reports the average max.
struct Lemma62Stats {
    TrialStats stats; // successes = exceedances
};
Lemma62Stats mc_lemma62(std::span<const double> variances, std::size_t n, double eps,
                        std::uint64_t trials, std::uint64_t seed, bool duplicate_pairs = false,
                        unsigned threads = 1);

} // namespace bcc
