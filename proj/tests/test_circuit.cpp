#include "bcc/circuit.hpp"
#include "bcc/circuit_io.hpp"
#include "bcc/generators.hpp"
#include "bcc/reference.hpp"

#include "test_helpers.hpp"

#include "doctest.h"

using namespace bcc;
using namespace bcc::testing;

namespace {

Circuit single_product() {
    CircuitBuilder b(CircuitKind::Bilinear, 1, 1);
    b.declare_output(b.mul(b.input_x(0), b.input_y(0), Section::Prod), Section::Out);
    return b.take();
}

} // namespace

TEST_SUITE("circuit") {

TEST_CASE("evaluate: single product") {
    const Circuit c = single_product();
    const std::vector<Complex> out = evaluate(c, std::vector<Complex>{3.0}, std::vector<Complex>{5.0});
    REQUIRE(out.size() == 1);
    CHECK(std::abs(out[0] - Complex{15.0, 0.0}) < 1e-15);
}

TEST_CASE("evaluate: single addition with complex entries") {
    CircuitBuilder b(CircuitKind::Linear, 2);
    b.declare_output(b.add(b.input_x(0), b.input_x(1)));
    const Circuit c = b.take();
    const std::vector<Complex> out = evaluate(c, std::vector<Complex>{{1.0, 2.0}, {3.0, 0.0}});
    CHECK(std::abs(out[0] - Complex{4.0, 2.0}) < 1e-15);
}

TEST_CASE("evaluate: convolution with the unit vector is the identity") {
    const Circuit c = gen_convolution_fft(4);
    CounterRng rng(7);
    const std::vector<Complex> y = random_complex_vector(4, rng);
    std::vector<Complex> e0(4);
    e0[0] = 1.0;
    const std::vector<Complex> out = evaluate(c, e0, y);
    CHECK(max_rel_error(out, y) < 1e-12);
}

TEST_CASE("evaluate: errors") {
    const Circuit c = single_product();
    CHECK_THROWS_AS(evaluate(c, std::vector<Complex>{1.0, 2.0}, std::vector<Complex>{1.0}),
                    BccError);
    // y reference in a non-bilinear circuit
    Circuit bad;
    bad.kind = CircuitKind::General;
    bad.n_inputs_x = 1;
    bad.instructions.push_back({OpCode::Add, Section::General, NodeRef::input_x(0),
                                NodeRef::input_y(0), {}});
    bad.outputs.push_back(NodeRef::instr(0));
    CHECK_THROWS_AS(evaluate(bad, std::vector<Complex>{1.0}), BccError);
}

TEST_CASE("extract_linear_matrix: DFT_2 butterfly") {
    CircuitBuilder b(CircuitKind::Linear, 2);
    b.declare_output(b.add(b.input_x(0), b.input_x(1)));
    b.declare_output(b.sub(b.input_x(0), b.input_x(1)));
    const ComplexMatrix a = extract_linear_matrix(b.take());
    CHECK(std::abs(a(0, 0) - Complex{1.0}) < 1e-15);
    CHECK(std::abs(a(0, 1) - Complex{1.0}) < 1e-15);
    CHECK(std::abs(a(1, 0) - Complex{1.0}) < 1e-15);
    CHECK(std::abs(a(1, 1) - Complex{-1.0}) < 1e-15);
}

TEST_CASE("extract_linear_matrix: gen_dft(4) matches the omega^{jk} table") {
    const ComplexMatrix a = extract_linear_matrix(gen_dft(4));
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t k = 0; k < 4; ++k) {
            const Complex want = std::polar(1.0, 2.0 * 3.14159265358979323846 *
                                                     static_cast<double>(j * k % 4) / 4.0);
            CHECK(std::abs(a(j, k) - want) < 1e-12);
        }
}

TEST_CASE("extract_linear_matrix: passthrough circuit gives the identity") {
    Circuit c;
    c.kind = CircuitKind::Linear;
    c.n_inputs_x = 3;
    for (std::size_t i = 0; i < 3; ++i) c.outputs.push_back(NodeRef::input_x(i));
    const ComplexMatrix a = extract_linear_matrix(c);
    CHECK(frobenius_norm(a - ComplexMatrix::identity(3)) < 1e-15);
}

TEST_CASE("extract_linear_matrix rejects non-linear circuits") {
    CHECK_THROWS_AS(extract_linear_matrix(gen_convolution_fft(2)), BccError);
}

TEST_CASE("validate_structure: generator output is valid bilinear") {
    const ValidationReport rep = validate_structure(gen_convolution_fft(8));
    CHECK(rep.ok());
}

TEST_CASE("validate_structure: product of two x-side nodes violates condition 3") {
    Circuit c;
    c.kind = CircuitKind::Bilinear;
    c.n_inputs_x = 2;
    c.n_inputs_y = 1;
    c.instructions.push_back({OpCode::Add, Section::LinX, NodeRef::input_x(0),
                              NodeRef::input_x(1), {}});
    c.instructions.push_back({OpCode::Mul, Section::Prod, NodeRef::instr(0), NodeRef::instr(0), {}});
    c.outputs.push_back(NodeRef::instr(1));
    const ValidationReport rep = validate_structure(c);
    REQUIRE(!rep.ok());
    bool found = false;
    for (const ValidationIssue& is : rep.issues)
        if (is.instruction == 1 && is.message.find("condition 3") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("validate_structure: mul inside a linear circuit") {
    Circuit c;
    c.kind = CircuitKind::Linear;
    c.n_inputs_x = 2;
    c.instructions.push_back({OpCode::Mul, Section::General, NodeRef::input_x(0),
                              NodeRef::input_x(1), {}});
    c.outputs.push_back(NodeRef::instr(0));
    CHECK(!validate_structure(c).ok());
}

TEST_CASE("validate_structure: section order violations are reported") {
    Circuit c;
    c.kind = CircuitKind::Bilinear;
    c.n_inputs_x = 1;
    c.n_inputs_y = 1;
    c.instructions.push_back({OpCode::Mul, Section::Prod, NodeRef::input_x(0),
                              NodeRef::input_y(0), {}});
    c.instructions.push_back({OpCode::Add, Section::LinX, NodeRef::input_x(0),
                              NodeRef::input_x(0), {}});
    c.outputs.push_back(NodeRef::instr(0));
    CHECK(!validate_structure(c).ok());
}

TEST_CASE("audit_coefficients: gen_dft(16) is bounded with unit twiddles") {
    const CoefficientAudit audit = audit_coefficients(gen_dft(16));
    CHECK(audit.help_count == 0);
    CHECK(audit.max_abs_scalar == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("audit_coefficients: a scale by 5 is a help gate") {
    CircuitBuilder b(CircuitKind::Linear, 1);
    b.declare_output(b.scale(Complex{5.0, 0.0}, b.input_x(0)));
    const CoefficientAudit audit = audit_coefficients(b.take());
    CHECK(audit.help_count == 1);
    CHECK(audit.max_abs_scalar == doctest::Approx(5.0));
    REQUIRE(audit.help_span_dim.has_value());
    CHECK(*audit.help_span_dim == 1);
}

TEST_CASE("audit_coefficients: proportional help-gate forms span one dimension") {
    CircuitBuilder b(CircuitKind::Linear, 2);
    const auto s = b.add(b.input_x(0), b.input_x(1));
    const auto d = b.add(s, s); // proportional to s
    b.declare_output(b.scale(Complex{10.0, 0.0}, s));
    b.declare_output(b.scale(Complex{-8.0, 0.0}, d));
    const CoefficientAudit audit = audit_coefficients(b.take());
    CHECK(audit.help_count == 2);
    REQUIRE(audit.help_span_dim.has_value());
    CHECK(*audit.help_span_dim == 1);
}

TEST_CASE("property: linear circuits evaluate linearly") {
    CounterRng rng(11);
    const Circuit c = gen_dft(8);
    for (int trial = 0; trial < 20; ++trial) {
        const std::vector<Complex> x1 = random_complex_vector(8, rng);
        const std::vector<Complex> x2 = random_complex_vector(8, rng);
        const Complex alpha = rng.complex_normal(), beta = rng.complex_normal();
        std::vector<Complex> mix(8);
        for (std::size_t i = 0; i < 8; ++i) mix[i] = alpha * x1[i] + beta * x2[i];
        const std::vector<Complex> lhs = evaluate(c, mix);
        const std::vector<Complex> o1 = evaluate(c, x1), o2 = evaluate(c, x2);
        std::vector<Complex> rhs(8);
        for (std::size_t i = 0; i < 8; ++i) rhs[i] = alpha * o1[i] + beta * o2[i];
        CHECK(max_rel_error(lhs, rhs) < 1e-10);
    }
}

TEST_CASE("property: bilinear circuits are linear in each argument") {
    CounterRng rng(12);
    const Circuit c = gen_convolution_fft(8);
    for (int trial = 0; trial < 10; ++trial) {
        const std::vector<Complex> x1 = random_complex_vector(8, rng);
        const std::vector<Complex> x2 = random_complex_vector(8, rng);
        const std::vector<Complex> y = random_complex_vector(8, rng);
        const Complex alpha = rng.complex_normal(), beta = rng.complex_normal();
        std::vector<Complex> mix(8);
        for (std::size_t i = 0; i < 8; ++i) mix[i] = alpha * x1[i] + beta * x2[i];
        const std::vector<Complex> lhs = evaluate(c, mix, y);
        const std::vector<Complex> o1 = evaluate(c, x1, y), o2 = evaluate(c, x2, y);
        std::vector<Complex> rhs(8);
        for (std::size_t i = 0; i < 8; ++i) rhs[i] = alpha * o1[i] + beta * o2[i];
        CHECK(max_rel_error(lhs, rhs) < 1e-10);
        // and in y for fixed x
        const std::vector<Complex> y2 = random_complex_vector(8, rng);
        std::vector<Complex> ymix(8);
        for (std::size_t i = 0; i < 8; ++i) ymix[i] = alpha * y[i] + beta * y2[i];
        const std::vector<Complex> lhs2 = evaluate(c, x1, ymix);
        const std::vector<Complex> p1 = evaluate(c, x1, y), p2 = evaluate(c, x1, y2);
        std::vector<Complex> rhs2(8);
        for (std::size_t i = 0; i < 8; ++i) rhs2[i] = alpha * p1[i] + beta * p2[i];
        CHECK(max_rel_error(lhs2, rhs2) < 1e-10);
    }
}

TEST_CASE("property: parse(serialize(c)) evaluates identically") {
    CounterRng rng(13);
    const std::vector<Circuit> subjects = {gen_dft(8), gen_dft(4, true), gen_convolution_fft(4),
                                           gen_polymul(3), gen_power_series_inv(5),
                                           gen_division(4, 2)};
    for (const Circuit& c : subjects) {
        const Circuit back = parse_circuit(serialize(c));
        REQUIRE(back.size() == c.size());
        REQUIRE(back.kind == c.kind);
        for (int trial = 0; trial < 5; ++trial) {
            const std::vector<Complex> x = random_complex_vector(c.n_inputs_x, rng);
            const std::vector<Complex> y = random_complex_vector(c.n_inputs_y, rng);
            const std::vector<Complex> a = evaluate(c, x, y);
            const std::vector<Complex> b = evaluate(back, x, y);
            for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]); // bit-stable scalars
        }
    }
}

TEST_CASE("property: extracted matrix reproduces evaluation") {
    CounterRng rng(14);
    const Circuit c = gen_dft(16, true);
    const ComplexMatrix a = extract_linear_matrix(c);
    for (int trial = 0; trial < 10; ++trial) {
        const std::vector<Complex> x = random_complex_vector(16, rng);
        const std::vector<Complex> via_matrix = matvec(a, x);
        const std::vector<Complex> via_circuit = evaluate(c, x);
        CHECK(max_rel_error(via_circuit, via_matrix) < 1e-10);
    }
}

TEST_CASE("parser: rejects malformed inputs") {
    CHECK_THROWS_AS(parse_circuit(std::string("nonsense")), ParseError);
    CHECK_THROWS_AS(parse_circuit(std::string("bcc v1\nkind linear\ninputs x 1\nt0 = add x0 x1\noutputs t0\n")),
                    ParseError); // x1 out of range
    CHECK_THROWS_AS(parse_circuit(std::string("bcc v1\nkind linear\ninputs x 2\nt1 = add x0 x1\noutputs t1\n")),
                    ParseError); // label out of order
    CHECK_THROWS_AS(parse_circuit(std::string("bcc v1\nkind linear\ninputs x 2\nt0 = add x0 t0\noutputs t0\n")),
                    ParseError); // forward reference
    CHECK_THROWS_AS(parse_circuit(std::string("bcc v1\nkind linear\ninputs x 2\nt0 = add x0 x1\n")),
                    ParseError); // missing outputs
    CHECK_THROWS_AS(parse_circuit(std::string("bcc v1\nkind general\ninputs x 1\nt0 = scale (1,0 x0\noutputs t0\n")),
                    ParseError); // bad scalar token
}

TEST_CASE("parser: comments and blank lines are ignored") {
    const Circuit c = parse_circuit(std::string("# header comment\nbcc v1\nkind linear\n\n"
                                                "inputs x 2  # two inputs\n"
                                                "t0 = add x0 x1\noutputs t0\n"));
    CHECK(c.size() == 1);
    const std::vector<Complex> out = evaluate(c, std::vector<Complex>{1.0, 2.0});
    CHECK(std::abs(out[0] - Complex{3.0}) < 1e-15);
}

} // TEST_SUITE
