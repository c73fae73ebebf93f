#include "bcc/circuit_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace bcc {

namespace {

std::string ref_to_string(NodeRef r) {
    switch (r.kind) {
        case NodeRef::Kind::InputX: return "x" + std::to_string(r.index);
        case NodeRef::Kind::InputY: return "y" + std::to_string(r.index);
        case NodeRef::Kind::Instr: return "t" + std::to_string(r.index);
    }
    return "?";
}

} // namespace

void write_circuit(std::ostream& out, const Circuit& c) {
    out << "bcc v1\n";
    out << "kind " << to_string(c.kind) << "\n";
    out << "inputs x " << c.n_inputs_x;
    if (c.kind == CircuitKind::Bilinear) out << " y " << c.n_inputs_y;
    out << "\n";
    const bool sections = c.kind == CircuitKind::Bilinear;
    Section current = Section::General;
    for (std::size_t i = 0; i < c.instructions.size(); ++i) {
        const Instruction& ins = c.instructions[i];
        if (sections && ins.section != current) {
            current = ins.section;
            out << ".section " << to_string(current) << "\n";
        }
        out << "t" << i << " = " << to_string(ins.op) << " ";
        if (ins.op == OpCode::Scale)
            out << format_complex(ins.scalar) << " " << ref_to_string(ins.lhs);
        else
            out << ref_to_string(ins.lhs) << " " << ref_to_string(ins.rhs);
        out << "\n";
    }
    out << "outputs";
    for (NodeRef r : c.outputs) out << " " << ref_to_string(r);
    out << "\n";
}

std::string serialize(const Circuit& c) {
    std::ostringstream os;
    write_circuit(os, c);
    return os.str();
}

void write_circuit_file(const std::string& path, const Circuit& c) {
    std::ofstream out(path);
    if (!out) throw BccError("cannot open circuit file for writing: " + path);
    write_circuit(out, c);
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::string cur;
    for (char ch : line) {
        if (ch == '#') break;
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) {
                toks.push_back(std::move(cur));
                cur.clear();
            }
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) toks.push_back(std::move(cur));
    return toks;
}

std::size_t parse_index(std::string_view sv, std::size_t line, const char* what) {
    std::size_t v = 0;
    auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (res.ec != std::errc{} || res.ptr != sv.data() + sv.size())
        throw ParseError(line, std::string("invalid ") + what + ": '" + std::string(sv) + "'");
    return v;
}

struct Parser {
    std::size_t line_no = 0;
    Circuit c;
    bool saw_kind = false, saw_inputs = false, saw_outputs = false;
    Section current_section = Section::General;
    bool in_section = false;

    NodeRef parse_ref(const std::string& tok, std::size_t next_instr) {
        if (tok.empty()) throw ParseError(line_no, "empty reference");
        const char head = tok[0];
        const std::size_t idx = parse_index(std::string_view(tok).substr(1), line_no, "reference index");
        switch (head) {
            case 'x':
                if (idx >= c.n_inputs_x) throw ParseError(line_no, "x-input index out of range: " + tok);
                return NodeRef::input_x(idx);
            case 'y':
                if (c.kind != CircuitKind::Bilinear)
                    throw ParseError(line_no, "y reference in a non-bilinear circuit");
                if (idx >= c.n_inputs_y) throw ParseError(line_no, "y-input index out of range: " + tok);
                return NodeRef::input_y(idx);
            case 't':
                if (idx >= next_instr)
                    throw ParseError(line_no, "reference to a later instruction: " + tok);
                return NodeRef::instr(idx);
            default: throw ParseError(line_no, "bad reference: " + tok);
        }
    }

    void handle(const std::vector<std::string>& t) {
        if (saw_outputs) throw ParseError(line_no, "content after the outputs line");
        if (!saw_kind) {
            if (t[0] != "kind" || t.size() != 2) throw ParseError(line_no, "expected 'kind <kind>'");
            if (t[1] == "linear") c.kind = CircuitKind::Linear;
            else if (t[1] == "bilinear") c.kind = CircuitKind::Bilinear;
            else if (t[1] == "general") c.kind = CircuitKind::General;
            else throw ParseError(line_no, "unknown kind: " + t[1]);
            saw_kind = true;
            return;
        }
        if (!saw_inputs) {
            if (t[0] != "inputs" || t.size() < 3 || t[1] != "x")
                throw ParseError(line_no, "expected 'inputs x <m> [y <n>]'");
            c.n_inputs_x = parse_index(t[2], line_no, "input count");
            if (t.size() == 5 && t[3] == "y") {
                if (c.kind != CircuitKind::Bilinear)
                    throw ParseError(line_no, "y inputs on a non-bilinear circuit");
                c.n_inputs_y = parse_index(t[4], line_no, "input count");
            } else if (t.size() != 3) {
                throw ParseError(line_no, "expected 'inputs x <m> [y <n>]'");
            }
            saw_inputs = true;
            return;
        }
        if (t[0] == ".section") {
            if (t.size() != 2) throw ParseError(line_no, "expected '.section <name>'");
            if (t[1] == "lin-x") current_section = Section::LinX;
            else if (t[1] == "lin-y") current_section = Section::LinY;
            else if (t[1] == "prod") current_section = Section::Prod;
            else if (t[1] == "out") current_section = Section::Out;
            else throw ParseError(line_no, "unknown section: " + t[1]);
            in_section = true;
            return;
        }
        if (t[0] == "outputs") {
            for (std::size_t i = 1; i < t.size(); ++i)
                c.outputs.push_back(parse_ref(t[i], c.instructions.size()));
            saw_outputs = true;
            return;
        }
        // instruction: t<k> = op ...
        if (t.size() < 4 || t[0].empty() || t[0][0] != 't' || t[1] != "=")
            throw ParseError(line_no, "expected 't<k> = <op> ...'");
        const std::size_t k = parse_index(std::string_view(t[0]).substr(1), line_no, "instruction label");
        if (k != c.instructions.size())
            throw ParseError(line_no, "instruction label t" + std::to_string(k) +
                                          " out of order (expected t" +
                                          std::to_string(c.instructions.size()) + ")");
        if (c.kind == CircuitKind::Bilinear && !in_section)
            throw ParseError(line_no, "instruction before any .section marker in a bilinear circuit");

        Instruction ins;
        ins.section = c.kind == CircuitKind::Bilinear ? current_section : Section::General;
        const std::string& op = t[2];
        const std::size_t pos = c.instructions.size();
        if (op == "add" || op == "sub" || op == "mul") {
            if (t.size() != 5) throw ParseError(line_no, op + " takes two references");
            ins.op = op == "add" ? OpCode::Add : op == "sub" ? OpCode::Sub : OpCode::Mul;
            ins.lhs = parse_ref(t[3], pos);
            ins.rhs = parse_ref(t[4], pos);
        } else if (op == "scale") {
            if (t.size() != 5) throw ParseError(line_no, "scale takes a scalar and one reference");
            try {
                ins.scalar = parse_complex_token(t[3]);
            } catch (const BccError& e) {
                throw ParseError(line_no, e.what());
            }
            if (!std::isfinite(ins.scalar.real()) || !std::isfinite(ins.scalar.imag()))
                throw ParseError(line_no, "non-finite scalar");
            ins.op = OpCode::Scale;
            ins.lhs = parse_ref(t[4], pos);
        } else {
            throw ParseError(line_no, "unknown op: " + op);
        }
        c.instructions.push_back(ins);
    }
};

} // namespace

Circuit parse_circuit(std::istream& in) {
    Parser p;
    std::string line;
    bool saw_magic = false;
    while (std::getline(in, line)) {
        ++p.line_no;
        const std::vector<std::string> toks = tokenize(line);
        if (toks.empty()) continue;
        if (!saw_magic) {
            if (toks.size() != 2 || toks[0] != "bcc" || toks[1] != "v1")
                throw ParseError(p.line_no, "expected header 'bcc v1'");
            saw_magic = true;
            continue;
        }
        p.handle(toks);
    }
    if (!saw_magic) throw ParseError(p.line_no, "empty circuit file");
    if (!p.saw_outputs) throw ParseError(p.line_no, "missing outputs line");
    return std::move(p.c);
}

Circuit parse_circuit(const std::string& text) {
    std::istringstream is(text);
    return parse_circuit(is);
}

Circuit read_circuit_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BccError("cannot open circuit file: " + path);
    return parse_circuit(in);
}

} // namespace bcc
