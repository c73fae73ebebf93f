#include "bcc/circuit.hpp"

#include "bcc/spectral.hpp"

#include <cmath>
#include <sstream>

namespace bcc {

const char* to_string(OpCode op) {
    switch (op) {
        case OpCode::Add: return "add";
        case OpCode::Sub: return "sub";
        case OpCode::Mul: return "mul";
        case OpCode::Scale: return "scale";
    }
    return "?";
}

const char* to_string(Section s) {
    switch (s) {
        case Section::LinX: return "lin-x";
        case Section::LinY: return "lin-y";
        case Section::Prod: return "prod";
        case Section::Out: return "out";
        case Section::General: return "general";
    }
    return "?";
}

const char* to_string(CircuitKind k) {
    switch (k) {
        case CircuitKind::Linear: return "linear";
        case CircuitKind::Bilinear: return "bilinear";
        case CircuitKind::General: return "general";
    }
    return "?";
}

namespace {

// Resolves a reference against the value table; `pos` is the index of the
// referring instruction (or the instruction count for output references).
Complex resolve(const Circuit& c, NodeRef ref, std::size_t pos, std::span<const Complex> x,
                std::span<const Complex> y, std::span<const Complex> results) {
    switch (ref.kind) {
        case NodeRef::Kind::InputX:
            if (ref.index >= x.size()) throw BccError("evaluate: x-input reference out of range");
            return x[ref.index];
        case NodeRef::Kind::InputY:
            if (c.kind != CircuitKind::Bilinear)
                throw BccError("evaluate: y-input reference in a non-bilinear circuit");
            if (ref.index >= y.size()) throw BccError("evaluate: y-input reference out of range");
            return y[ref.index];
        case NodeRef::Kind::Instr:
            if (ref.index >= pos) throw BccError("evaluate: forward instruction reference");
            return results[ref.index];
    }
    throw BccError("evaluate: bad reference");
}

} // namespace

std::vector<Complex> evaluate(const Circuit& c, std::span<const Complex> x,
                              std::span<const Complex> y) {
    if (x.size() != c.n_inputs_x) throw BccError("evaluate: x length mismatch");
    if (y.size() != c.n_inputs_y) throw BccError("evaluate: y length mismatch");

    std::vector<Complex> results(c.instructions.size());
    for (std::size_t s = 0; s < c.instructions.size(); ++s) {
        const Instruction& ins = c.instructions[s];
        const Complex a = resolve(c, ins.lhs, s, x, y, results);
        switch (ins.op) {
            case OpCode::Add: results[s] = a + resolve(c, ins.rhs, s, x, y, results); break;
            case OpCode::Sub: results[s] = a - resolve(c, ins.rhs, s, x, y, results); break;
            case OpCode::Mul: results[s] = a * resolve(c, ins.rhs, s, x, y, results); break;
            case OpCode::Scale: results[s] = ins.scalar * a; break;
        }
    }

    std::vector<Complex> out;
    out.reserve(c.outputs.size());
    for (NodeRef ref : c.outputs)
        out.push_back(resolve(c, ref, c.instructions.size(), x, y, results));
    return out;
}

ComplexMatrix extract_linear_matrix(const Circuit& c) {
    if (c.kind != CircuitKind::Linear)
        throw BccError("extract_linear_matrix: circuit is not linear");
    const std::size_t n = c.n_inputs_x;
    ComplexMatrix a(c.outputs.size(), n);
    std::vector<Complex> e(n, Complex{});
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        const std::vector<Complex> col = evaluate(c, e);
        for (std::size_t i = 0; i < col.size(); ++i) a(i, j) = col[i];
        e[j] = 0.0;
    }
    return a;
}

std::string ValidationReport::summary() const {
    if (ok()) return "valid";
    std::ostringstream os;
    os << issues.size() << " issue(s):";
    for (const ValidationIssue& is : issues) {
        os << "\n  ";
        if (is.instruction != static_cast<std::size_t>(-1)) os << "t" << is.instruction << ": ";
        os << is.message;
    }
    return os.str();
}

namespace {

enum class NodeSide { X, Y, Prod, Out, Neutral };

bool ref_well_formed(const Circuit& c, NodeRef r, std::size_t pos) {
    switch (r.kind) {
        case NodeRef::Kind::InputX: return r.index < c.n_inputs_x;
        case NodeRef::Kind::InputY: return c.kind == CircuitKind::Bilinear && r.index < c.n_inputs_y;
        case NodeRef::Kind::Instr: return r.index < pos;
    }
    return false;
}

} // namespace

ValidationReport validate_structure(const Circuit& c) {
    ValidationReport rep;
    auto issue = [&](std::size_t i, std::string msg) { rep.issues.push_back({i, std::move(msg)}); };
    constexpr std::size_t kNoInstr = static_cast<std::size_t>(-1);

    const bool bilinear = c.kind == CircuitKind::Bilinear;
    if (!bilinear && c.n_inputs_y != 0)
        issue(kNoInstr, "y inputs declared on a non-bilinear circuit");

    // Side of each instruction result, used for the bilinear partition checks.
    std::vector<NodeSide> side(c.instructions.size(), NodeSide::Neutral);
    auto side_of = [&](NodeRef r) {
        switch (r.kind) {
            case NodeRef::Kind::InputX: return NodeSide::X;
            case NodeRef::Kind::InputY: return NodeSide::Y;
            case NodeRef::Kind::Instr: return side[r.index];
        }
        return NodeSide::Neutral;
    };

    int last_section = -1;
    for (std::size_t i = 0; i < c.instructions.size(); ++i) {
        const Instruction& ins = c.instructions[i];
        const bool has_rhs = ins.op != OpCode::Scale;
        if (!ref_well_formed(c, ins.lhs, i)) issue(i, "malformed lhs reference");
        if (has_rhs && !ref_well_formed(c, ins.rhs, i)) issue(i, "malformed rhs reference");
        if (ins.op == OpCode::Scale &&
            (!std::isfinite(ins.scalar.real()) || !std::isfinite(ins.scalar.imag())))
            issue(i, "non-finite scalar");

        if (c.kind == CircuitKind::Linear) {
            if (ins.op == OpCode::Mul) issue(i, "mul instruction in a linear circuit");
            continue;
        }
        if (!bilinear) continue;

        // Partition order lin-x, lin-y, prod, out; every instruction tagged.
        const Section sec = ins.section;
        if (sec == Section::General) {
            issue(i, "untagged instruction in a bilinear circuit");
            continue;
        }
        if (static_cast<int>(sec) < last_section)
            issue(i, std::string("section ") + to_string(sec) + " after " +
                         to_string(static_cast<Section>(last_section)) +
                         " (condition 1-4 ordering)");
        last_section = std::max(last_section, static_cast<int>(sec));

        if (ins.op == OpCode::Mul && sec != Section::Prod)
            issue(i, "mul instruction outside the prod section");
        if (ins.op != OpCode::Mul && sec == Section::Prod)
            issue(i, "non-mul instruction in the prod section");

        switch (sec) {
            case Section::LinX: {
                const bool lhs_ok = side_of(ins.lhs) == NodeSide::X;
                const bool rhs_ok = !has_rhs || side_of(ins.rhs) == NodeSide::X;
                if (!lhs_ok || !rhs_ok) issue(i, "lin-x instruction touching a non-x node (condition 1)");
                side[i] = NodeSide::X;
                break;
            }
            case Section::LinY: {
                const bool lhs_ok = side_of(ins.lhs) == NodeSide::Y;
                const bool rhs_ok = !has_rhs || side_of(ins.rhs) == NodeSide::Y;
                if (!lhs_ok || !rhs_ok) issue(i, "lin-y instruction touching a non-y node (condition 2)");
                side[i] = NodeSide::Y;
                break;
            }
            case Section::Prod: {
                if (side_of(ins.lhs) != NodeSide::X)
                    issue(i, "prod lhs is not an x-side linear form (condition 3)");
                if (side_of(ins.rhs) != NodeSide::Y)
                    issue(i, "prod rhs is not a y-side linear form (condition 3)");
                side[i] = NodeSide::Prod;
                break;
            }
            case Section::Out: {
                auto out_ok = [&](NodeRef r) {
                    const NodeSide s = side_of(r);
                    return r.kind == NodeRef::Kind::Instr && (s == NodeSide::Prod || s == NodeSide::Out);
                };
                if (!out_ok(ins.lhs) || (has_rhs && !out_ok(ins.rhs)))
                    issue(i, "out instruction touching a non-product node (condition 4)");
                side[i] = NodeSide::Out;
                break;
            }
            case Section::General: break;
        }
    }

    for (std::size_t k = 0; k < c.outputs.size(); ++k) {
        const NodeRef r = c.outputs[k];
        if (!ref_well_formed(c, r, c.instructions.size())) {
            issue(kNoInstr, "output " + std::to_string(k) + " is unresolvable");
            continue;
        }
        if (bilinear) {
            const bool node_ok = r.kind == NodeRef::Kind::Instr &&
                                 (side[r.index] == NodeSide::Prod || side[r.index] == NodeSide::Out);
            if (!node_ok) issue(kNoInstr, "output " + std::to_string(k) + " is not a prod/out node");
        }
    }
    return rep;
}

ComplexMatrix linear_forms_at_instructions(const Circuit& c) {
    if (c.kind != CircuitKind::Linear)
        throw BccError("linear_forms_at_instructions: circuit is not linear");
    const std::size_t n = c.n_inputs_x;
    ComplexMatrix forms(c.instructions.size(), n);
    auto form_of = [&](NodeRef r, std::size_t pos) {
        std::vector<Complex> f(n, Complex{});
        if (r.kind == NodeRef::Kind::InputX) {
            if (r.index >= n) throw BccError("linear_forms: malformed reference");
            f[r.index] = 1.0;
        } else if (r.kind == NodeRef::Kind::Instr) {
            if (r.index >= pos) throw BccError("linear_forms: forward reference");
            for (std::size_t j = 0; j < n; ++j) f[j] = forms(r.index, j);
        } else {
            throw BccError("linear_forms: y reference in a linear circuit");
        }
        return f;
    };
    for (std::size_t i = 0; i < c.instructions.size(); ++i) {
        const Instruction& ins = c.instructions[i];
        std::vector<Complex> f = form_of(ins.lhs, i);
        switch (ins.op) {
            case OpCode::Add: {
                const std::vector<Complex> g = form_of(ins.rhs, i);
                for (std::size_t j = 0; j < n; ++j) f[j] += g[j];
                break;
            }
            case OpCode::Sub: {
                const std::vector<Complex> g = form_of(ins.rhs, i);
                for (std::size_t j = 0; j < n; ++j) f[j] -= g[j];
                break;
            }
            case OpCode::Scale:
                for (std::size_t j = 0; j < n; ++j) f[j] *= ins.scalar;
                break;
            case OpCode::Mul: throw BccError("linear_forms: mul in a linear circuit");
        }
        for (std::size_t j = 0; j < n; ++j) forms(i, j) = f[j];
    }
    return forms;
}

CoefficientAudit audit_coefficients(const Circuit& c, double bound) {
    if (!(bound > 0.0)) throw BccError("audit_coefficients: bound must be positive");
    CoefficientAudit audit;
    audit.bound = bound;
    for (std::size_t i = 0; i < c.instructions.size(); ++i) {
        const Instruction& ins = c.instructions[i];
        if (ins.op != OpCode::Scale) continue;
        const double mag = std::abs(ins.scalar);
        audit.max_abs_scalar = std::max(audit.max_abs_scalar, mag);
        if (mag > bound) audit.help_gates.push_back(i);
    }
    audit.help_count = audit.help_gates.size();

    if (c.kind == CircuitKind::Linear) {
        if (audit.help_gates.empty()) {
            audit.help_span_dim = 0;
        } else {
            // Rank of the forms at the help-gate operands; the operand form is
            // a scalar multiple of the form at the gate, so spans agree.
            const ComplexMatrix forms = linear_forms_at_instructions(c);
            ComplexMatrix rows(audit.help_gates.size(), c.n_inputs_x);
            for (std::size_t k = 0; k < audit.help_gates.size(); ++k) {
                const NodeRef operand = c.instructions[audit.help_gates[k]].lhs;
                for (std::size_t j = 0; j < c.n_inputs_x; ++j) {
                    if (operand.kind == NodeRef::Kind::InputX)
                        rows(k, j) = (j == operand.index) ? 1.0 : 0.0;
                    else
                        rows(k, j) = forms(operand.index, j);
                }
            }
            audit.help_span_dim = numerical_rank(svd(rows), 1e-9);
        }
    }
    return audit;
}

CircuitBuilder::Wire CircuitBuilder::emit(OpCode op, Section sec, NodeRef lhs, NodeRef rhs,
                                          Complex scalar) {
    c_.instructions.push_back({op, c_.kind == CircuitKind::Bilinear ? sec : Section::General, lhs,
                               rhs, scalar});
    return {false, NodeRef::instr(c_.instructions.size() - 1)};
}

CircuitBuilder::Wire CircuitBuilder::add(Wire a, Wire b, Section sec) {
    if (a.is_zero && b.is_zero) return zero();
    if (a.is_zero) return b;
    if (b.is_zero) return a;
    return emit(OpCode::Add, sec, a.ref, b.ref);
}

CircuitBuilder::Wire CircuitBuilder::sub(Wire a, Wire b, Section sec) {
    if (b.is_zero) return a;
    if (a.is_zero) return emit(OpCode::Scale, sec, b.ref, {}, Complex{-1.0, 0.0});
    return emit(OpCode::Sub, sec, a.ref, b.ref);
}

CircuitBuilder::Wire CircuitBuilder::mul(Wire a, Wire b, Section sec) {
    if (a.is_zero || b.is_zero) return zero();
    return emit(OpCode::Mul, sec, a.ref, b.ref);
}

CircuitBuilder::Wire CircuitBuilder::scale(Complex factor, Wire a, Section sec) {
    if (a.is_zero || factor == Complex{}) return zero();
    return emit(OpCode::Scale, sec, a.ref, {}, factor);
}

void CircuitBuilder::declare_output(Wire w, Section sec) {
    if (w.is_zero) {
        // Materialize: multiply the first available input by zero.
        const NodeRef src =
            c_.n_inputs_x > 0 ? NodeRef::input_x(0)
                              : (c_.n_inputs_y > 0 ? NodeRef::input_y(0) : NodeRef::instr(0));
        if (c_.n_inputs_x == 0 && c_.n_inputs_y == 0 && c_.instructions.empty())
            throw BccError("CircuitBuilder: cannot materialize a zero output in an empty circuit");
        w = emit(OpCode::Scale, sec, src, {}, Complex{});
    }
    c_.outputs.push_back(w.ref);
}

} // namespace bcc
