#pragma once

#include "bcc/complex_matrix.hpp"

#include <optional>
#include <utility>

namespace bcc {

/// Singular values of a matrix, sorted nonincreasing, with optional factors
/// satisfying A = U diag(sv) V*.
struct SpectralData {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> singular_values;
    std::optional<ComplexMatrix> u; // rows x p
    std::optional<ComplexMatrix> v; // cols x p

    std::size_t p() const { return singular_values.size(); }
};

/// One-sided Jacobi SVD on columns with complex plane rotations. Converged
/// when every off-diagonal column inner product is at most 1e-13 * ||A||_F^2.
SpectralData svd(const ComplexMatrix& a, bool want_factors = false);

/// Count of singular values above sigma_max * rel_threshold.
std::size_t numerical_rank(const SpectralData& s, double rel_threshold = 1e-9);

/// Eigenvalues of the circulant of `a`: the DFT of `a` with omega = e^{2 pi i/n}.
/// Radix-2 FFT for powers of two, direct transform otherwise.
std::vector<Complex> circulant_spectrum(std::span<const Complex> a);

/// Matrix of the map y -> cyclic_convolution(a, y); entry (j,k) = a[(j-k) mod n],
/// so the first column is `a`.
ComplexMatrix make_circulant(std::span<const Complex> a);

/// log2 of the r-th elementary symmetric polynomial of exp2(log2_values).
/// Entries of -infinity are skipped exactly. Returns -infinity when the
/// polynomial vanishes.
double log2_elementary_symmetric(std::span<const double> log2_values, std::size_t r);

/// log2 of the r-mean-square volume: 0.5 * log2 e_r(sigma_1^2, ..., sigma_p^2).
double log2_msv(const SpectralData& s, std::size_t r);

/// Mean square volume MSV_r(A) = sqrt(e_r(sigma^2)). Computed in the log
/// domain; may overflow to +infinity for very large values.
double msv(const SpectralData& s, std::size_t r);
double msv(const ComplexMatrix& a, std::size_t r);

/// Exact subset sum sqrt(sum over |I|=|J|=r of |det A_{I,J}|^2).
/// Guarded: min(m, n) <= 12 and at most ~2e7 minors.
double msv_bruteforce(const ComplexMatrix& a, std::size_t r);

/// Vol_r(A) = max over r-row subsets I of sqrt(det A_I A_I*). Guarded m <= 20.
double r_volume(const ComplexMatrix& a, std::size_t r);

/// (sigma_{r+1} / sqrt(n), sigma_{r+1}) for 0 <= r < p; n = column count.
std::pair<double, double> rigidity_sandwich(const SpectralData& s, std::size_t r);

struct PerturbationViolation {
    std::size_t r;
    double lhs; // sigma_{r+h}(A)
    double rhs; // sigma_r(A+E)
};

struct PerturbationCheck {
    std::size_t h = 0;     // numerical rank of E
    double slack = 0.0;    // allowed slack, 1e-8 * sigma_1(A)
    std::vector<PerturbationViolation> violations;
    bool ok() const { return violations.empty(); }
};

/// Verifies sigma_{r+h}(A) <= sigma_r(A+E) + 1e-8 * sigma_1(A) for all valid r,
/// where h is the numerical rank of E.
PerturbationCheck check_perturbation(const ComplexMatrix& a, const ComplexMatrix& e);

} // namespace bcc
