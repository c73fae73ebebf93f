#pragma once

#include "bcc/circuit.hpp"

#include <utility>

namespace bcc {

/// Multiplication by an arbitrary scalar as repeated doublings followed by
/// one bounded scale: lambda = 2^doublings * final_scale, |final_scale| <= 2.
struct ScalarDecomposition {
    std::size_t doublings = 0;
    Complex final_scale{};
    bool zero_flag = false; // lambda was zero; a single scale-by-zero stands in
};

ScalarDecomposition decompose_scalar(Complex lambda);

/// Rewrites every scale of modulus > 2 through decompose_scalar. Doubling is
/// emitted as add(node, node). The result computes the same map.
Circuit bc_normalize(const Circuit& c);

struct FixFirstResult {
    Circuit circuit; // bounded-coefficient linear circuit in y
    double gamma = 0.0;
    bool zero_map = false; // all x-side products vanished at `a`
};

/// Specializes a bilinear circuit at x = a: the lin-x stage is evaluated, each
/// product becomes a scale by 2 * f_i(a) / gamma with gamma = max_j |f_j(a)|,
/// and each output is rescaled by gamma/2 via doublings plus one bounded
/// scale. The result is a bounded-coefficient linear circuit computing
/// y -> circuit(a, y).
FixFirstResult fix_first_argument(const Circuit& bilinear, std::span<const Complex> a);

struct HelpGateZeroing {
    std::size_t help_count = 0;   // h
    std::size_t size_in = 0;
    std::size_t size_ledger = 0;  // size_in - h: zeroed gates count as removed
    ComplexMatrix perturbation;   // E = B - A
    std::size_t perturbation_rank = 0;
};

/// Replaces each help gate of a linear circuit by a multiplication with zero.
/// The record carries E = B - A between the old and new matrices; rank(E) is
/// at most the help-gate span dimension.
std::pair<Circuit, HelpGateZeroing> zero_help_gates(const Circuit& linear, double bound = 2.0);

} // namespace bcc
