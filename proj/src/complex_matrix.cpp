#include "bcc/complex_matrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace bcc {

bool ComplexMatrix::all_finite() const {
    for (const Complex& z : data_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw BccError("matrix product: inner dimensions differ");
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw BccError("matrix sum: shape mismatch");
    ComplexMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw BccError("matrix difference: shape mismatch");
    ComplexMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
    return c;
}

ComplexMatrix scale(const ComplexMatrix& a, Complex factor) {
    ComplexMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = factor * a(i, j);
    return c;
}

ComplexMatrix conj_transpose(const ComplexMatrix& a) {
    ComplexMatrix c(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(j, i) = std::conj(a(i, j));
    return c;
}

std::vector<Complex> matvec(const ComplexMatrix& a, std::span<const Complex> x) {
    if (x.size() != a.cols()) throw BccError("matvec: length mismatch");
    std::vector<Complex> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Complex acc{};
        auto r = a.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j) acc += r[j] * x[j];
        y[i] = acc;
    }
    return y;
}

double frobenius_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (const Complex& z : a.flat()) s += std::norm(z);
    return std::sqrt(s);
}

double max_abs_entry(const ComplexMatrix& a) {
    double m = 0.0;
    for (const Complex& z : a.flat()) m = std::max(m, std::abs(z));
    return m;
}

ComplexMatrix submatrix(const ComplexMatrix& a, std::span<const std::size_t> ri,
                        std::span<const std::size_t> ci) {
    ComplexMatrix s(ri.size(), ci.size());
    for (std::size_t i = 0; i < ri.size(); ++i) {
        if (ri[i] >= a.rows()) throw BccError("submatrix: row index out of range");
        for (std::size_t j = 0; j < ci.size(); ++j) {
            if (ci[j] >= a.cols()) throw BccError("submatrix: column index out of range");
            s(i, j) = a(ri[i], ci[j]);
        }
    }
    return s;
}

Complex determinant(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) throw BccError("determinant: matrix not square");
    const std::size_t n = a.rows();
    if (n == 0) return 1.0;
    ComplexMatrix lu = a;
    Complex det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(lu(i, k));
            if (v > best) { best = v; piv = i; }
        }
        if (best == 0.0) return 0.0;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
            det = -det;
        }
        det *= lu(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = lu(i, k) / lu(k, k);
            for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
        }
    }
    return det;
}

namespace {

Complex column_dot(const ComplexMatrix& m, std::size_t ci, std::span<const Complex> v) {
    Complex acc{};
    for (std::size_t i = 0; i < m.rows(); ++i) acc += std::conj(m(i, ci)) * v[i];
    return acc;
}

// Projects v against the first `count` columns of q, in place.
void project_out(const ComplexMatrix& q, std::size_t count, std::vector<Complex>& v) {
    for (std::size_t c = 0; c < count; ++c) {
        const Complex coef = column_dot(q, c, v);
        for (std::size_t i = 0; i < q.rows(); ++i) v[i] -= coef * q(i, c);
    }
}

double vec_norm(std::span<const Complex> v) {
    double s = 0.0;
    for (const Complex& z : v) s += std::norm(z);
    return std::sqrt(s);
}

} // namespace

ComplexMatrix orthonormalize_columns(const ComplexMatrix& a) {
    const std::size_t m = a.rows();
    std::vector<std::vector<Complex>> kept;
    ComplexMatrix q(m, a.cols());
    std::size_t nq = 0;
    const double drop_tol = 1e-12 * (max_abs_entry(a) + 1.0) * static_cast<double>(m);
    for (std::size_t c = 0; c < a.cols(); ++c) {
        std::vector<Complex> v(m);
        for (std::size_t i = 0; i < m; ++i) v[i] = a(i, c);
        project_out(q, nq, v);
        project_out(q, nq, v); // second pass tightens orthogonality
        const double nv = vec_norm(v);
        if (nv <= drop_tol) continue;
        for (std::size_t i = 0; i < m; ++i) q(i, nq) = v[i] / nv;
        ++nq;
    }
    ComplexMatrix out(m, nq);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < nq; ++j) out(i, j) = q(i, j);
    return out;
}

ComplexMatrix complete_orthonormal_basis(const ComplexMatrix& q) {
    const std::size_t n = q.rows();
    if (q.cols() > n) throw BccError("complete_orthonormal_basis: more columns than rows");
    ComplexMatrix full(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < q.cols(); ++j) full(i, j) = q(i, j);
    std::size_t have = q.cols();
    for (std::size_t e = 0; e < n && have < n; ++e) {
        std::vector<Complex> v(n);
        v[e] = 1.0;
        project_out(full, have, v);
        project_out(full, have, v);
        const double nv = vec_norm(v);
        if (nv <= 1e-6) continue; // e_e nearly inside the span; try the next one
        for (std::size_t i = 0; i < n; ++i) full(i, have) = v[i] / nv;
        ++have;
    }
    if (have < n) throw BccError("complete_orthonormal_basis: completion failed");
    return full;
}

double orthonormality_defect(const ComplexMatrix& q) {
    double worst = 0.0;
    for (std::size_t i = 0; i < q.cols(); ++i) {
        for (std::size_t j = i; j < q.cols(); ++j) {
            Complex acc{};
            for (std::size_t k = 0; k < q.rows(); ++k) acc += std::conj(q(k, i)) * q(k, j);
            const double want = (i == j) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(acc - want));
        }
    }
    return worst;
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string format_complex(Complex z) {
    return "(" + format_double(z.real()) + "," + format_double(z.imag()) + ")";
}

namespace {

double parse_double_token(std::string_view sv, const char* what) {
    double x = 0.0;
    auto res = std::from_chars(sv.data(), sv.data() + sv.size(), x);
    if (res.ec != std::errc{} || res.ptr != sv.data() + sv.size())
        throw BccError(std::string("invalid number in ") + what + ": '" + std::string(sv) + "'");
    return x;
}

} // namespace

Complex parse_complex_token(std::string_view tok) {
    if (tok.size() < 5 || tok.front() != '(' || tok.back() != ')')
        throw BccError("invalid complex token: '" + std::string(tok) + "'");
    const auto comma = tok.find(',');
    if (comma == std::string_view::npos)
        throw BccError("invalid complex token: '" + std::string(tok) + "'");
    const double re = parse_double_token(tok.substr(1, comma - 1), "complex token");
    const double im = parse_double_token(tok.substr(comma + 1, tok.size() - comma - 2), "complex token");
    return {re, im};
}

ComplexMatrix read_matrix(std::istream& in) {
    std::size_t m = 0, n = 0;
    if (!(in >> m >> n)) throw BccError("matrix file: missing dimensions");
    ComplexMatrix a(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::string tok;
            if (!(in >> tok)) throw BccError("matrix file: unexpected end of data");
            a(i, j) = parse_complex_token(tok);
        }
    }
    if (!a.all_finite()) throw BccError("matrix file: non-finite entry");
    return a;
}

ComplexMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BccError("cannot open matrix file: " + path);
    return read_matrix(in);
}

void write_matrix(std::ostream& out, const ComplexMatrix& a) {
    out << a.rows() << " " << a.cols() << "\n";
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (j) out << " ";
            out << format_complex(a(i, j));
        }
        out << "\n";
    }
}

void write_matrix_file(const std::string& path, const ComplexMatrix& a) {
    std::ofstream out(path);
    if (!out) throw BccError("cannot open matrix file for writing: " + path);
    write_matrix(out, a);
}

} // namespace bcc
