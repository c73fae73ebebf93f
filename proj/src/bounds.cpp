#include "bcc/bounds.hpp"

#include <cmath>
#include <sstream>

namespace bcc {

std::string bits_to_string(Bits b) {
    if (!b) return "-inf";
    return format_double(*b);
}

Bits bits_max(Bits a, Bits b) {
    if (!a) return b;
    if (!b) return a;
    return std::max(*a, *b);
}

Bits morgenstern(const SpectralData& s) {
    if (s.rows != s.cols) throw BccError("morgenstern: matrix not square");
    if (s.p() == 0) return 0.0; // empty determinant is 1
    double sum = 0.0;
    for (double sv : s.singular_values) {
        if (sv <= 0.0) return std::nullopt;
        sum += std::log2(sv);
    }
    return sum;
}

Bits msv_bound(const SpectralData& s, std::size_t r) {
    const double l = log2_msv(s, r);
    if (std::isinf(l)) return std::nullopt;
    return l - static_cast<double>(s.rows) / 2.0;
}

Bits rvol_bound(const ComplexMatrix& a, std::size_t r) {
    const double vol = r_volume(a, r);
    if (vol <= 0.0) return std::nullopt;
    return std::log2(vol);
}

Bits rigidity_bound(const SpectralData& s, std::size_t r) {
    if (r >= s.p()) throw BccError("rigidity_bound: r out of range");
    const double sv = s.singular_values[r];
    if (sv <= 0.0) return std::nullopt;
    return static_cast<double>(r) * std::log2(sv / std::sqrt(static_cast<double>(s.cols)));
}

HelpgateBound helpgate_bound(const SpectralData& spec, std::size_t h, std::size_t s) {
    if (s < 1 || s + h > spec.p()) throw BccError("helpgate_bound: need 1 <= s <= p - h");
    const double base = -static_cast<double>(spec.rows) / 2.0 + static_cast<double>(h);
    HelpgateBound out;
    double sum = 0.0;
    bool finite = true;
    for (std::size_t i = h; i < h + s; ++i) {
        const double sv = spec.singular_values[i];
        if (sv <= 0.0) { finite = false; break; }
        sum += std::log2(sv);
    }
    out.sum_form = finite ? Bits{sum + base} : std::nullopt;
    const double tail = spec.singular_values[h + s - 1];
    out.weak_form =
        tail > 0.0 ? Bits{static_cast<double>(s) * std::log2(tail) + base} : std::nullopt;
    return out;
}

namespace {

std::string opt_to_string(std::optional<std::size_t> v) {
    return v ? std::to_string(*v) : "";
}

} // namespace

std::string BoundReport::to_csv() const {
    std::ostringstream os;
    os << "n,formula,r,s,h,bound_bits,upper_size\n";
    const std::string upper = upper_size ? std::to_string(*upper_size) : "";
    for (const BoundEntry& e : entries)
        os << n << "," << e.formula << "," << opt_to_string(e.r) << "," << opt_to_string(e.s)
           << "," << opt_to_string(e.h) << "," << bits_to_string(e.bits) << "," << upper << "\n";
    os << n << ",best,,,," << bits_to_string(best) << "," << upper << "\n";
    return os.str();
}

std::string BoundReport::to_markdown() const {
    std::ostringstream os;
    os << "### Lower bounds for " << (matrix_id.empty() ? "matrix" : matrix_id) << " (" << m << "x"
       << n << ")\n\n";
    os << "| formula | r | s | h | bound (bits) | trace |\n";
    os << "|---|---|---|---|---|---|\n";
    for (const BoundEntry& e : entries)
        os << "| " << e.formula << " | " << opt_to_string(e.r) << " | " << opt_to_string(e.s)
           << " | " << opt_to_string(e.h) << " | " << bits_to_string(e.bits) << " | " << e.trace
           << " |\n";
    os << "\nbest: " << bits_to_string(best);
    if (upper_size) os << ", measured upper size: " << *upper_size;
    os << "\n";
    return os.str();
}

BoundReport best_bound(const SpectralData& s, std::size_t help_budget, const ComplexMatrix* matrix,
                       std::string matrix_id) {
    BoundReport rep;
    rep.matrix_id = std::move(matrix_id);
    rep.m = s.rows;
    rep.n = s.cols;
    const std::size_t p = s.p();
    auto push = [&](BoundEntry e) {
        rep.best = bits_max(rep.best, e.bits);
        rep.entries.push_back(std::move(e));
    };

    if (help_budget == 0) {
        if (s.rows == s.cols && p > 0)
            push({"morgenstern", {}, {}, {}, morgenstern(s), "sum of log2 sigma_i"});
        for (std::size_t r = 1; r <= p; ++r) {
            std::ostringstream tr;
            const Bits val = msv_bound(s, r);
            tr << "log2 MSV_" << r << " - " << s.rows << "/2";
            push({"msv", r, {}, {}, val, tr.str()});
        }
        if (matrix && matrix->rows() <= 20) {
            for (std::size_t r = 1; r <= p; ++r)
                push({"rvol", r, {}, {}, rvol_bound(*matrix, r), "log2 Vol_r"});
        }
        for (std::size_t r = 0; r < p; ++r) {
            std::ostringstream tr;
            tr << r << " * log2(sigma_" << (r + 1) << "/sqrt(" << s.cols << "))";
            push({"rigidity", r, {}, {}, rigidity_bound(s, r), tr.str()});
        }
    }
    const std::size_t h = help_budget;
    if (h < p) {
        for (std::size_t sw = 1; sw + h <= p; ++sw) {
            const HelpgateBound hb = helpgate_bound(s, h, sw);
            std::ostringstream tr;
            tr << "sum_{i=" << (h + 1) << "}^{" << (h + sw) << "} log2 sigma_i - " << s.rows
               << "/2 + " << h;
            push({"helpgate", {}, sw, h, hb.sum_form, tr.str()});
        }
    }
    return rep;
}

BoundReport best_bound(const ComplexMatrix& a, std::size_t help_budget, std::string matrix_id) {
    return best_bound(svd(a), help_budget, &a, std::move(matrix_id));
}

SurrogateTerms convolution_theorem_surrogate(std::size_t n, std::size_t r, double k, double big_r,
                                             double c) {
    if (r < 1 || r >= n) throw BccError("surrogate: need 1 <= r < n");
    if (!(big_r > 0.0) || !(k >= 1.0)) throw BccError("surrogate: need R > 0 and k >= 1");
    SurrogateTerms t;
    t.n = n;
    t.r = r;
    t.k = k;
    t.big_r = big_r;
    t.c = c;
    const double nd = static_cast<double>(n);
    t.term_main = static_cast<double>(r) / 2.0 * std::log2(nd);
    t.term_c = c * nd;
    t.term_lnk = nd * std::log2(2.0 * std::sqrt(std::log(4.0 * k)));
    t.term_log_r = nd * std::log2(big_r);
    t.value = t.term_main - t.term_c - t.term_lnk - t.term_log_r;
    return t;
}

double theorem_coefficient(double eps) { return eps * (1.0 - eps) / (2.0 * (2.0 - eps)); }

CoefficientMax maximize_theorem_coefficient() {
    // golden-section search on (0, 1); the function is unimodal there
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 1e-9, b = 1.0 - 1e-9;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    for (int it = 0; it < 200; ++it) {
        if (theorem_coefficient(c) > theorem_coefficient(d)) b = d;
        else a = c;
        c = b - gr * (b - a);
        d = a + gr * (b - a);
    }
    CoefficientMax out;
    out.eps = (a + b) / 2.0;
    out.value = theorem_coefficient(out.eps);
    return out;
}

} // namespace bcc
