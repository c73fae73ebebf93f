#pragma once

#include "bcc/circuit.hpp"

#include <iosfwd>

namespace bcc {

struct ParseError : BccError {
    ParseError(std::size_t line, const std::string& msg)
        : BccError("line " + std::to_string(line) + ": " + msg), line_number(line) {}
    std::size_t line_number;
};

// Circuit text format ("bcc v1"):
//   bcc v1
//   kind linear|bilinear|general
//   inputs x <m> [y <n>]
//   .section lin-x|lin-y|prod|out        (bilinear only)
//   t<k> = add|sub|mul <ref> <ref>
//   t<k> = scale (<re>,<im>) <ref>
//   outputs <ref> ...
// <ref> is x<i>, y<i>, or t<j> with j < k; '#' starts a comment. Instruction
// labels t<k> must number consecutively from 0. Scalars round-trip exactly.
std::string serialize(const Circuit& c);
void write_circuit(std::ostream& out, const Circuit& c);
void write_circuit_file(const std::string& path, const Circuit& c);

Circuit parse_circuit(std::istream& in);
Circuit parse_circuit(const std::string& text);
Circuit read_circuit_file(const std::string& path);

} // namespace bcc
