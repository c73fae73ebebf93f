#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bcc {

using Complex = std::complex<double>;

struct BccError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense m x n complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<Complex> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const Complex> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::span<const Complex> flat() const { return data_; }

    bool all_finite() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(const ComplexMatrix& a, Complex factor);

/// Conjugate transpose A*.
ComplexMatrix conj_transpose(const ComplexMatrix& a);

std::vector<Complex> matvec(const ComplexMatrix& a, std::span<const Complex> x);

double frobenius_norm(const ComplexMatrix& a);
double max_abs_entry(const ComplexMatrix& a);

/// Rows indexed by `ri`, columns by `ci` (0-based, strictly increasing not required).
ComplexMatrix submatrix(const ComplexMatrix& a, std::span<const std::size_t> ri,
                        std::span<const std::size_t> ci);

/// Determinant by LU with partial pivoting.
Complex determinant(const ComplexMatrix& a);

/// Modified Gram-Schmidt with a second orthogonalization pass. Columns that
/// vanish (rank deficiency) are dropped, so the result may have fewer columns.
ComplexMatrix orthonormalize_columns(const ComplexMatrix& a);

/// Extends the orthonormal columns of `q` to a full orthonormal basis of C^n
/// (n = q.rows()) by sweeping standard basis vectors. Appended columns come last.
ComplexMatrix complete_orthonormal_basis(const ComplexMatrix& q);

/// Max deviation of Q*Q from the identity.
double orthonormality_defect(const ComplexMatrix& q);

// Matrix file format: first line "m n", then m lines of n tokens "(re,im)".
// Scalars use shortest round-trip decimal representation.
ComplexMatrix read_matrix(std::istream& in);
ComplexMatrix read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const ComplexMatrix& a);
void write_matrix_file(const std::string& path, const ComplexMatrix& a);

/// Formats a double with the shortest representation that round-trips.
std::string format_double(double x);
/// Formats "(re,im)".
std::string format_complex(Complex z);
/// Parses a "(re,im)" token.
Complex parse_complex_token(std::string_view tok);

} // namespace bcc
