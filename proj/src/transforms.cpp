#include "bcc/transforms.hpp"

#include "bcc/spectral.hpp"

#include <cmath>

namespace bcc {

ScalarDecomposition decompose_scalar(Complex lambda) {
    ScalarDecomposition d;
    if (lambda == Complex{}) {
        d.zero_flag = true;
        d.final_scale = Complex{};
        return d;
    }
    const double mag = std::abs(lambda);
    const double k = std::ceil(std::log2(mag) - 1.0);
    d.doublings = k > 0.0 ? static_cast<std::size_t>(k) : 0;
    d.final_scale = lambda / std::exp2(static_cast<double>(d.doublings));
    return d;
}

Circuit bc_normalize(const Circuit& c) {
    bool needed = false;
    for (const Instruction& ins : c.instructions)
        if (ins.op == OpCode::Scale && std::abs(ins.scalar) > 2.0) needed = true;
    if (!needed) return c;

    Circuit out;
    out.kind = c.kind;
    out.n_inputs_x = c.n_inputs_x;
    out.n_inputs_y = c.n_inputs_y;
    std::vector<std::size_t> remap(c.instructions.size());
    auto map_ref = [&](NodeRef r) {
        if (r.kind == NodeRef::Kind::Instr) r.index = remap[r.index];
        return r;
    };
    for (std::size_t i = 0; i < c.instructions.size(); ++i) {
        Instruction ins = c.instructions[i];
        ins.lhs = map_ref(ins.lhs);
        if (ins.op != OpCode::Scale) ins.rhs = map_ref(ins.rhs);
        if (ins.op == OpCode::Scale && std::abs(ins.scalar) > 2.0) {
            const ScalarDecomposition d = decompose_scalar(ins.scalar);
            NodeRef cur = ins.lhs;
            for (std::size_t t = 0; t < d.doublings; ++t) {
                out.instructions.push_back({OpCode::Add, ins.section, cur, cur, {}});
                cur = NodeRef::instr(out.instructions.size() - 1);
            }
            out.instructions.push_back({OpCode::Scale, ins.section, cur, {}, d.final_scale});
        } else {
            out.instructions.push_back(ins);
        }
        remap[i] = out.instructions.size() - 1;
    }
    for (NodeRef r : c.outputs) out.outputs.push_back(map_ref(r));
    return out;
}

FixFirstResult fix_first_argument(const Circuit& bilinear, std::span<const Complex> a) {
    if (bilinear.kind != CircuitKind::Bilinear)
        throw BccError("fix_first_argument: circuit is not bilinear");
    {
        const ValidationReport rep = validate_structure(bilinear);
        if (!rep.ok()) throw BccError("fix_first_argument: invalid bilinear circuit: " + rep.summary());
    }
    if (a.size() != bilinear.n_inputs_x) throw BccError("fix_first_argument: length mismatch");

    // Evaluate the x side at a. Only lin-x instructions can be reached from
    // product lhs operands, so other slots stay unused.
    std::vector<Complex> xval(bilinear.instructions.size());
    for (std::size_t i = 0; i < bilinear.instructions.size(); ++i) {
        const Instruction& ins = bilinear.instructions[i];
        if (ins.section != Section::LinX) continue;
        auto value = [&](NodeRef r) {
            return r.kind == NodeRef::Kind::InputX ? a[r.index] : xval[r.index];
        };
        switch (ins.op) {
            case OpCode::Add: xval[i] = value(ins.lhs) + value(ins.rhs); break;
            case OpCode::Sub: xval[i] = value(ins.lhs) - value(ins.rhs); break;
            case OpCode::Scale: xval[i] = ins.scalar * value(ins.lhs); break;
            case OpCode::Mul: throw BccError("fix_first_argument: mul in lin-x");
        }
    }

    double gamma = 0.0;
    for (const Instruction& ins : bilinear.instructions) {
        if (ins.section != Section::Prod) continue;
        const Complex fa =
            ins.lhs.kind == NodeRef::Kind::InputX ? a[ins.lhs.index] : xval[ins.lhs.index];
        gamma = std::max(gamma, std::abs(fa));
    }

    FixFirstResult res;
    res.gamma = gamma;
    const std::size_t p = bilinear.outputs.size();

    if (gamma == 0.0) {
        // Every product vanishes at a: the specialized map is zero.
        res.zero_map = true;
        CircuitBuilder b(CircuitKind::Linear, bilinear.n_inputs_y);
        for (std::size_t i = 0; i < p; ++i) b.declare_output(CircuitBuilder::zero());
        res.circuit = b.take();
        return res;
    }

    Circuit out;
    out.kind = CircuitKind::Linear;
    out.n_inputs_x = bilinear.n_inputs_y;
    std::vector<std::size_t> remap(bilinear.instructions.size(), static_cast<std::size_t>(-1));
    auto map_ref = [&](NodeRef r) {
        if (r.kind == NodeRef::Kind::InputY) return NodeRef::input_x(r.index);
        if (r.kind == NodeRef::Kind::Instr) {
            if (remap[r.index] == static_cast<std::size_t>(-1))
                throw BccError("fix_first_argument: reference into the dropped lin-x stage");
            return NodeRef::instr(remap[r.index]);
        }
        return r;
    };

    for (std::size_t i = 0; i < bilinear.instructions.size(); ++i) {
        const Instruction& ins = bilinear.instructions[i];
        switch (ins.section) {
            case Section::LinX: break; // dropped; folded into the product scales
            case Section::LinY:
            case Section::Out: {
                Instruction copy = ins;
                copy.section = Section::General;
                copy.lhs = map_ref(ins.lhs);
                if (ins.op != OpCode::Scale) copy.rhs = map_ref(ins.rhs);
                out.instructions.push_back(copy);
                remap[i] = out.instructions.size() - 1;
                break;
            }
            case Section::Prod: {
                const Complex fa =
                    ins.lhs.kind == NodeRef::Kind::InputX ? a[ins.lhs.index] : xval[ins.lhs.index];
                out.instructions.push_back(
                    {OpCode::Scale, Section::General, map_ref(ins.rhs), {}, 2.0 / gamma * fa});
                remap[i] = out.instructions.size() - 1;
                break;
            }
            case Section::General:
                throw BccError("fix_first_argument: untagged instruction");
        }
    }

    // Undo the 2/gamma normalization: multiply each output by gamma/2 with
    // doublings plus one bounded scale.
    const ScalarDecomposition d = decompose_scalar(Complex{gamma / 2.0, 0.0});
    for (NodeRef r : bilinear.outputs) {
        NodeRef cur = map_ref(r);
        for (std::size_t t = 0; t < d.doublings; ++t) {
            out.instructions.push_back({OpCode::Add, Section::General, cur, cur, {}});
            cur = NodeRef::instr(out.instructions.size() - 1);
        }
        out.instructions.push_back({OpCode::Scale, Section::General, cur, {}, d.final_scale});
        out.outputs.push_back(NodeRef::instr(out.instructions.size() - 1));
    }
    res.circuit = std::move(out);
    return res;
}

std::pair<Circuit, HelpGateZeroing> zero_help_gates(const Circuit& linear, double bound) {
    if (linear.kind != CircuitKind::Linear) throw BccError("zero_help_gates: circuit is not linear");
    HelpGateZeroing rec;
    rec.size_in = linear.size();

    Circuit out = linear;
    for (Instruction& ins : out.instructions) {
        if (ins.op == OpCode::Scale && std::abs(ins.scalar) > bound) {
            ins.scalar = Complex{};
            ++rec.help_count;
        }
    }
    rec.size_ledger = rec.size_in - rec.help_count;

    const ComplexMatrix a = extract_linear_matrix(linear);
    const ComplexMatrix b = extract_linear_matrix(out);
    rec.perturbation = b - a;
    rec.perturbation_rank = numerical_rank(svd(rec.perturbation));
    return {std::move(out), std::move(rec)};
}

} // namespace bcc
