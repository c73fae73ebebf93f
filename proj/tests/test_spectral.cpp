#include "bcc/spectral.hpp"

#include "bcc/generators.hpp"
#include "bcc/circuit.hpp"
#include "bcc/reference.hpp"

#include "test_helpers.hpp"

#include "doctest.h"

#include <cmath>
#include <limits>

using namespace bcc;
using namespace bcc::testing;

namespace {

ComplexMatrix diag_matrix(std::initializer_list<double> values) {
    ComplexMatrix a(values.size(), values.size());
    std::size_t i = 0;
    for (double v : values) {
        a(i, i) = v;
        ++i;
    }
    return a;
}

} // namespace

TEST_SUITE("spectral") {

TEST_CASE("svd: diagonal matrix") {
    const SpectralData s = svd(diag_matrix({2.0, 1.0}));
    REQUIRE(s.p() == 2);
    CHECK(s.singular_values[0] == doctest::Approx(2.0));
    CHECK(s.singular_values[1] == doctest::Approx(1.0));
}

TEST_CASE("svd: every singular value of DFT_n is sqrt(n)") {
    for (std::size_t n : {2, 4, 8, 16}) {
        const ComplexMatrix a = extract_linear_matrix(gen_dft(n));
        const SpectralData s = svd(a);
        for (double sv : s.singular_values)
            CHECK(sv == doctest::Approx(std::sqrt(static_cast<double>(n))).epsilon(1e-10));
    }
}

TEST_CASE("svd: matches the characteristic-polynomial oracle on random 5x3") {
    CounterRng rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix a = random_complex_matrix(5, 3, rng);
        const ComplexMatrix aa = conj_transpose(a) * a; // 3x3 Hermitian
        const std::vector<double> eig = hermitian_eigenvalues_charpoly(aa);
        const SpectralData s = svd(a);
        REQUIRE(s.p() == 3);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(s.singular_values[i] ==
                  doctest::Approx(std::sqrt(std::max(0.0, eig[i]))).epsilon(1e-8));
    }
}

TEST_CASE("svd: reconstruction with factors") {
    CounterRng rng(22);
    for (auto [m, n] : std::vector<std::pair<std::size_t, std::size_t>>{{6, 4}, {4, 6}, {5, 5}}) {
        const ComplexMatrix a = random_complex_matrix(m, n, rng);
        const SpectralData s = svd(a, true);
        REQUIRE(s.u.has_value());
        REQUIRE(s.v.has_value());
        ComplexMatrix us(m, s.p());
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < s.p(); ++j) us(i, j) = (*s.u)(i, j) * s.singular_values[j];
        const ComplexMatrix recon = us * conj_transpose(*s.v);
        CHECK(frobenius_norm(a - recon) <= 1e-9 * frobenius_norm(a));
    }
}

TEST_CASE("svd: zero matrix") {
    const SpectralData s = svd(ComplexMatrix(3, 2));
    for (double sv : s.singular_values) CHECK(sv == 0.0);
}

TEST_CASE("svd: Frobenius identity") {
    CounterRng rng(23);
    const ComplexMatrix a = random_complex_matrix(7, 5, rng);
    const SpectralData s = svd(a);
    double sum = 0.0;
    for (double sv : s.singular_values) sum += sv * sv;
    const double f = frobenius_norm(a);
    CHECK(sum == doctest::Approx(f * f).epsilon(1e-8));
}

TEST_CASE("circulant_spectrum: identity circulant") {
    std::vector<Complex> a(5);
    a[0] = 1.0;
    for (const Complex& l : circulant_spectrum(a)) CHECK(std::abs(l - Complex{1.0}) < 1e-12);
}

TEST_CASE("circulant_spectrum: shift circulant gives the fourth roots of unity") {
    std::vector<Complex> a(4);
    a[1] = 1.0;
    const std::vector<Complex> l = circulant_spectrum(a);
    CHECK(std::abs(l[0] - Complex{1.0, 0.0}) < 1e-12);
    CHECK(std::abs(l[1] - Complex{0.0, 1.0}) < 1e-12);
    CHECK(std::abs(l[2] - Complex{-1.0, 0.0}) < 1e-12);
    CHECK(std::abs(l[3] - Complex{0.0, -1.0}) < 1e-12);
}

TEST_CASE("circulant_spectrum: all-ones circulant is rank one") {
    std::vector<Complex> a(8, Complex{1.0});
    const std::vector<Complex> l = circulant_spectrum(a);
    CHECK(std::abs(l[0] - Complex{8.0}) < 1e-10);
    for (std::size_t k = 1; k < 8; ++k) CHECK(std::abs(l[k]) < 1e-10);
}

TEST_CASE("circulant_spectrum: |lambda| sorted equals the singular values of Circ(a)") {
    CounterRng rng(24);
    for (std::size_t n : {4, 6, 8}) { // includes a non-power-of-two
        const std::vector<Complex> a = random_complex_vector(n, rng);
        std::vector<double> mags;
        for (const Complex& l : circulant_spectrum(a)) mags.push_back(std::abs(l));
        std::sort(mags.begin(), mags.end(), std::greater<>());
        const SpectralData s = svd(make_circulant(a));
        for (std::size_t i = 0; i < n; ++i)
            CHECK(mags[i] == doctest::Approx(s.singular_values[i]).epsilon(1e-8));
    }
}

TEST_CASE("make_circulant acts as cyclic convolution") {
    CounterRng rng(25);
    const std::vector<Complex> a = random_complex_vector(6, rng);
    const std::vector<Complex> y = random_complex_vector(6, rng);
    const std::vector<Complex> via_matrix = matvec(make_circulant(a), y);
    const std::vector<Complex> via_formula = reference::cyclic_convolution(a, y);
    CHECK(max_rel_error(via_matrix, via_formula) < 1e-12);
}

TEST_CASE("msv: diag(2,1)") {
    const ComplexMatrix a = diag_matrix({2.0, 1.0});
    CHECK(msv(a, 1) == doctest::Approx(std::sqrt(5.0)));
    CHECK(msv(a, 2) == doctest::Approx(2.0));
}

TEST_CASE("msv: identity gives binomial coefficients") {
    const ComplexMatrix a = ComplexMatrix::identity(6);
    const SpectralData s = svd(a);
    CHECK(msv(s, 1) == doctest::Approx(std::sqrt(6.0)));
    CHECK(msv(s, 3) == doctest::Approx(std::sqrt(20.0)));
    CHECK(msv(s, 6) == doctest::Approx(1.0));
}

TEST_CASE("msv: full-rank value for the DFT scaling") {
    // all sigma = sqrt(n): MSV_n = n^{n/2}
    const std::size_t n = 4;
    const ComplexMatrix a = extract_linear_matrix(gen_dft(n));
    const SpectralData s = svd(a);
    CHECK(log2_msv(s, n) == doctest::Approx(static_cast<double>(n) / 2.0 *
                                            std::log2(static_cast<double>(n)))
                                .epsilon(1e-10));
}

TEST_CASE("msv agrees with msv_bruteforce on random matrices") {
    CounterRng rng(26);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t m = 2 + rng.next_u64() % 5; // 2..6
        const std::size_t n = 2 + rng.next_u64() % 5;
        const ComplexMatrix a = random_complex_matrix(m, n, rng);
        const SpectralData s = svd(a);
        for (std::size_t r = 1; r <= std::min(m, n); ++r)
            CHECK(msv(s, r) == doctest::Approx(msv_bruteforce(a, r)).epsilon(1e-8));
    }
}

TEST_CASE("msv_bruteforce: unitary invariance") {
    CounterRng rng(27);
    const ComplexMatrix a = random_complex_matrix(4, 5, rng);
    const ComplexMatrix u = random_unitary(4, rng);
    const ComplexMatrix v = random_unitary(5, rng);
    const ComplexMatrix rotated = u * a * v;
    for (std::size_t r = 1; r <= 4; ++r)
        CHECK(msv_bruteforce(rotated, r) == doctest::Approx(msv_bruteforce(a, r)).epsilon(1e-8));
}

TEST_CASE("msv guards") {
    const ComplexMatrix a(13, 13);
    CHECK_THROWS_AS(msv_bruteforce(a, 2), BccError);
    CHECK_THROWS_AS(msv(diag_matrix({1.0}), 2), BccError);
    const ComplexMatrix b(21, 21);
    CHECK_THROWS_AS(r_volume(b, 1), BccError);
}

TEST_CASE("log2_elementary_symmetric skips zeros exactly") {
    const double ninf = -std::numeric_limits<double>::infinity();
    const std::vector<double> logs = {2.0, ninf, 0.0}; // values 4, 0, 1
    CHECK(log2_elementary_symmetric(logs, 1) == doctest::Approx(std::log2(5.0)));
    CHECK(log2_elementary_symmetric(logs, 2) == doctest::Approx(2.0)); // only 4*1 survives
    CHECK(log2_elementary_symmetric(logs, 3) == ninf);
}

TEST_CASE("msv identities: MSV_n = |det|, top-product lower bound") {
    CounterRng rng(28);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 3 + rng.next_u64() % 4;
        const ComplexMatrix a = random_complex_matrix(n, n, rng);
        const SpectralData s = svd(a);
        CHECK(msv(s, n) == doctest::Approx(std::abs(determinant(a))).epsilon(1e-8));
        for (std::size_t r = 1; r <= n; ++r) {
            double top = 0.0;
            for (std::size_t i = 0; i < r; ++i) top += 2.0 * std::log2(s.singular_values[i]);
            CHECK(2.0 * log2_msv(s, r) >= top - 1e-9);
        }
    }
}

TEST_CASE("r_volume: examples and sandwich") {
    CHECK(r_volume(diag_matrix({2.0, 1.0}), 1) == doctest::Approx(2.0));
    CHECK(r_volume(ComplexMatrix::identity(5), 3) == doctest::Approx(1.0));
    CounterRng rng(29);
    const ComplexMatrix a = random_complex_matrix(6, 4, rng);
    const SpectralData s = svd(a);
    for (std::size_t r = 1; r <= 4; ++r) {
        const double vol = r_volume(a, r);
        const double ms = msv(s, r);
        double comb = 1.0;
        for (std::size_t i = 0; i < r; ++i)
            comb = comb * static_cast<double>(6 - i) / static_cast<double>(i + 1);
        CHECK(vol <= ms * (1.0 + 1e-10));
        CHECK(ms <= std::sqrt(comb) * vol * (1.0 + 1e-10));
    }
}

TEST_CASE("binet-cauchy: orthonormal columns have unit minor mass") {
    CounterRng rng(30);
    for (std::size_t r : {2, 3}) {
        const ComplexMatrix b = orthonormalize_columns(random_complex_matrix(6, r, rng));
        REQUIRE(b.cols() == r);
        // sum over |I|=r of |det B_I|^2 equals MSV_r(B)^2 = 1
        CHECK(msv_bruteforce(b, r) == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("rigidity_sandwich") {
    const SpectralData si = svd(ComplexMatrix::identity(4));
    const auto [lo, hi] = rigidity_sandwich(si, 0);
    CHECK(lo == doctest::Approx(0.5));
    CHECK(hi == doctest::Approx(1.0));
    const SpectralData sd = svd(diag_matrix({3.0, 2.0, 1.0}));
    const auto [lo2, hi2] = rigidity_sandwich(sd, 1);
    CHECK(lo2 == doctest::Approx(2.0 / std::sqrt(3.0)));
    CHECK(hi2 == doctest::Approx(2.0));
    // rank-deficient: sigma_{r+1} = 0 at r = rank
    ComplexMatrix low(3, 3);
    low(0, 0) = 1.0;
    const auto [lo3, hi3] = rigidity_sandwich(svd(low), 1);
    CHECK(lo3 == doctest::Approx(0.0));
    CHECK(hi3 == doctest::Approx(0.0));
}

TEST_CASE("unitary invariance of the singular value list") {
    CounterRng rng(31);
    const ComplexMatrix a = random_complex_matrix(6, 6, rng);
    const ComplexMatrix u = random_unitary(6, rng);
    const ComplexMatrix v = random_unitary(6, rng);
    const SpectralData s1 = svd(a), s2 = svd(u * a * v);
    for (std::size_t i = 0; i < 6; ++i)
        CHECK(s1.singular_values[i] == doctest::Approx(s2.singular_values[i]).epsilon(1e-8));
}

TEST_CASE("check_perturbation: zero perturbation") {
    CounterRng rng(32);
    const ComplexMatrix a = random_complex_matrix(5, 4, rng);
    const PerturbationCheck pc = check_perturbation(a, ComplexMatrix(5, 4));
    CHECK(pc.h == 0);
    CHECK(pc.ok());
}

TEST_CASE("check_perturbation: rank-one update killing the top direction") {
    CounterRng rng(33);
    const ComplexMatrix a = random_complex_matrix(5, 5, rng);
    const SpectralData s = svd(a, true);
    // E = -sigma_1 u_1 v_1^*
    ComplexMatrix e(5, 5);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j)
            e(i, j) = -s.singular_values[0] * (*s.u)(i, 0) * std::conj((*s.v)(j, 0));
    const PerturbationCheck pc = check_perturbation(a, e);
    CHECK(pc.h == 1);
    CHECK(pc.ok());
}

TEST_CASE("check_perturbation: random rank-2 perturbations hold") {
    CounterRng rng(34);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix a = random_complex_matrix(8, 6, rng);
        const ComplexMatrix e =
            random_complex_matrix(8, 2, rng) * random_complex_matrix(2, 6, rng);
        const PerturbationCheck pc = check_perturbation(a, e);
        CHECK(pc.h == 2);
        CHECK(pc.ok());
    }
}

TEST_CASE("check_perturbation: shape mismatch") {
    CHECK_THROWS_AS(check_perturbation(ComplexMatrix(2, 2), ComplexMatrix(3, 2)), BccError);
}

} // TEST_SUITE
