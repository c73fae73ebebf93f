#pragma once

#include "bcc/complex_matrix.hpp"

#include <cstdint>
#include <optional>

namespace bcc {

enum class OpCode : std::uint8_t { Add, Sub, Mul, Scale };
enum class Section : std::uint8_t { LinX, LinY, Prod, Out, General };
enum class CircuitKind : std::uint8_t { Linear, Bilinear, General };

const char* to_string(OpCode op);
const char* to_string(Section s);
const char* to_string(CircuitKind k);

/// Reference to an input or to the result of an earlier instruction.
/// Instruction references must point strictly backwards.
struct NodeRef {
    enum class Kind : std::uint8_t { InputX, InputY, Instr };

    Kind kind = Kind::InputX;
    std::size_t index = 0;

    static NodeRef input_x(std::size_t i) { return {Kind::InputX, i}; }
    static NodeRef input_y(std::size_t i) { return {Kind::InputY, i}; }
    static NodeRef instr(std::size_t i) { return {Kind::Instr, i}; }

    bool operator==(const NodeRef&) const = default;
};

struct Instruction {
    OpCode op = OpCode::Add;
    Section section = Section::General;
    NodeRef lhs{};
    NodeRef rhs{};    // unused for Scale
    Complex scalar{}; // used only for Scale
};

/// A straight-line program over C. Instructions reference the two input
/// vectors and earlier results; declared outputs are read off the result
/// sequence. Size is the number of instructions. Immutable by convention
/// after construction; all operations on circuits are pure.
struct Circuit {
    CircuitKind kind = CircuitKind::General;
    std::size_t n_inputs_x = 0;
    std::size_t n_inputs_y = 0; // zero unless bilinear
    std::vector<Instruction> instructions;
    std::vector<NodeRef> outputs;

    std::size_t size() const { return instructions.size(); }
};

/// Runs the result sequence and returns the declared outputs in order.
/// Throws on input length mismatch, on a y-reference in a non-bilinear
/// circuit, and on malformed references.
std::vector<Complex> evaluate(const Circuit& c, std::span<const Complex> x,
                              std::span<const Complex> y = {});

/// Matrix of a linear circuit, column j = circuit(e_j). Evaluates on the
/// standard basis. Throws for non-linear circuits.
ComplexMatrix extract_linear_matrix(const Circuit& c);

struct ValidationIssue {
    // size() marks issues that are not tied to one instruction (e.g. outputs).
    std::size_t instruction;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
    std::string summary() const;
};

/// Structural checks. All kinds: references well formed, outputs resolvable,
/// scalars finite, mul only in the prod section. Linear: no mul, no y.
/// Bilinear: every instruction tagged lin-x/lin-y/prod/out in that order;
/// lin-x touches only x-inputs and lin-x results (same for lin-y); prod
/// multiplies an x-side node by a y-side node (inputs count as trivial linear
/// forms); out combines only prod and out results; outputs are prod/out nodes.
ValidationReport validate_structure(const Circuit& c);

struct CoefficientAudit {
    double max_abs_scalar = 0.0; // 0 when the circuit has no scale instruction
    double bound = 2.0;
    std::vector<std::size_t> help_gates; // scale instructions with |scalar| > bound
    std::size_t help_count = 0;
    // Linear circuits only: numerical rank of the linear forms at the
    // help-gate operands (SVD threshold sigma_max * 1e-9).
    std::optional<std::size_t> help_span_dim;

    bool bounded() const { return help_count == 0; }
};

CoefficientAudit audit_coefficients(const Circuit& c, double bound = 2.0);

/// Linear forms (as vectors over the x-inputs) computed at every node of a
/// linear circuit. Row i of the result is the form at instruction i.
ComplexMatrix linear_forms_at_instructions(const Circuit& c);

/// Incremental circuit construction with structural-zero propagation.
/// A Wire is either a node of the circuit or a known zero; arithmetic on
/// zeros collapses without emitting instructions, which keeps generated
/// circuits free of padding junk.
class CircuitBuilder {
public:
    struct Wire {
        bool is_zero = true;
        NodeRef ref{};
    };

    explicit CircuitBuilder(CircuitKind kind, std::size_t n_x, std::size_t n_y = 0) {
        c_.kind = kind;
        c_.n_inputs_x = n_x;
        c_.n_inputs_y = n_y;
    }

    static Wire zero() { return {}; }
    Wire input_x(std::size_t i) const { return {false, NodeRef::input_x(i)}; }
    Wire input_y(std::size_t i) const { return {false, NodeRef::input_y(i)}; }

    Wire add(Wire a, Wire b, Section sec = Section::General);
    Wire sub(Wire a, Wire b, Section sec = Section::General);
    Wire mul(Wire a, Wire b, Section sec = Section::General);
    Wire scale(Complex factor, Wire a, Section sec = Section::General);

    /// Declares an output; a zero wire is materialized as one scale-by-zero.
    void declare_output(Wire w, Section sec = Section::General);

    std::size_t size() const { return c_.instructions.size(); }
    Circuit take() { return std::move(c_); }

private:
    Wire emit(OpCode op, Section sec, NodeRef lhs, NodeRef rhs, Complex scalar = {});
    Circuit c_;
};

} // namespace bcc
