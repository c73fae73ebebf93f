#pragma once

#include "bcc/spectral.hpp"

#include <optional>
#include <string>

namespace bcc {

/// A certified quantity in bits. An empty value is minus infinity and
/// serializes as "-inf".
using Bits = std::optional<double>;

std::string bits_to_string(Bits b);
/// max with -infinity as the identity
Bits bits_max(Bits a, Bits b);

/// log2 |det A| = sum of log2 sigma_i for square A; -inf when singular.
Bits morgenstern(const SpectralData& s);

/// log2 MSV_r(A) - m/2.
Bits msv_bound(const SpectralData& s, std::size_t r);

/// log2 Vol_r(A). Brute force over row subsets (guard of r_volume applies).
Bits rvol_bound(const ComplexMatrix& a, std::size_t r);

/// Certified variant r * log2(sigma_{r+1} / sqrt(n)) of the rigidity bound,
/// valid because sigma_{r+1}/sqrt(n) lower-bounds the geometric rigidity.
/// -inf whenever sigma_{r+1} <= 0.
Bits rigidity_bound(const SpectralData& s, std::size_t r);

struct HelpgateBound {
    Bits sum_form;  // sum_{i=h+1}^{h+s} log2 sigma_i - m/2 + h
    Bits weak_form; // s * log2 sigma_{h+s} - m/2 + h
};

/// Lower bound on the complexity with at most h help gates; 1 <= s <= p - h.
HelpgateBound helpgate_bound(const SpectralData& s, std::size_t h, std::size_t r_s);

struct BoundEntry {
    std::string formula;
    std::optional<std::size_t> r, s, h;
    Bits bits;
    std::string trace;
};

struct BoundReport {
    std::string matrix_id;
    std::size_t m = 0, n = 0;
    std::vector<BoundEntry> entries;
    Bits best; // max over entries
    std::optional<std::size_t> upper_size; // measured circuit size, when known

    std::string to_csv() const;
    std::string to_markdown() const;
};

/// Sweeps every formula over its valid parameters and records the maximum.
/// With help_budget = 0 all formulas apply; with a positive budget only the
/// help-gate bound is valid. Volume bounds need the matrix itself and are
/// skipped when it is absent or exceeds the brute-force guard.
BoundReport best_bound(const SpectralData& s, std::size_t help_budget = 0,
                       const ComplexMatrix* matrix = nullptr, std::string matrix_id = "");
BoundReport best_bound(const ComplexMatrix& a, std::size_t help_budget = 0,
                       std::string matrix_id = "");

/// Finite-n right-hand side of the convolution lower-bound chain, with every
/// term exposed: value = (r/2) log2 n - c*n - n*log2(2 sqrt(ln(4k))) - n*log2 R.
struct SurrogateTerms {
    std::size_t n = 0, r = 0;
    double k = 0.0, big_r = 0.0, c = 0.0;
    double term_main = 0.0; // (r/2) log2 n
    double term_c = 0.0;    // c * n
    double term_lnk = 0.0;  // n * log2(2 sqrt(ln(4k)))
    double term_log_r = 0.0; // n * log2 R
    double value = 0.0;
};

SurrogateTerms convolution_theorem_surrogate(std::size_t n, std::size_t r, double k, double big_r,
                                             double c);

/// eps(1-eps) / (2(2-eps)), the n log n coefficient of the convolution bound
/// as a function of eps = r/n.
double theorem_coefficient(double eps);

struct CoefficientMax {
    double eps = 0.0;
    double value = 0.0;
};

/// Maximizes theorem_coefficient over (0, 1) by golden-section search.
CoefficientMax maximize_theorem_coefficient();

} // namespace bcc
