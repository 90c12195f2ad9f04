// SPDX-License-Identifier: Apache-2.0
#include "chipforge/verilog/netlist.hpp"

#include <cassert>

namespace chipforge::verilog {

const char* gate_kind_name(GateKind k) {
    switch (k) {
    case GateKind::Not: return "NOT";
    case GateKind::And2: return "AND2";
    case GateKind::Or2: return "OR2";
    case GateKind::Xor2: return "XOR2";
    }
    return "?";
}

std::vector<BitVec> simulate_netlist(const GateNetlist& n,
                                     const std::vector<BitVec>& input_values) {
    assert(input_values.size() == n.inputs.size());
    std::vector<std::uint8_t> val(n.value_count(), 0);
    val[kConst1] = 1;

    std::size_t off = 2;
    for (std::size_t pi = 0; pi < n.inputs.size(); ++pi) {
        assert(input_values[pi].width() == n.inputs[pi].width);
        for (std::size_t b = 0; b < n.inputs[pi].width; ++b)
            val[off + b] = input_values[pi].bit(b) ? 1 : 0;
        off += n.inputs[pi].width;
    }

    const std::size_t gate_base = 2 + n.input_bit_count();
    for (std::size_t g = 0; g < n.gates.size(); ++g) {
        const Gate& gate = n.gates[g];
        const std::uint8_t a = val[gate.a];
        switch (gate.kind) {
        case GateKind::Not: val[gate_base + g] = a ^ 1; break;
        case GateKind::And2: val[gate_base + g] = a & val[gate.b]; break;
        case GateKind::Or2: val[gate_base + g] = a | val[gate.b]; break;
        case GateKind::Xor2: val[gate_base + g] = a ^ val[gate.b]; break;
        }
    }

    std::vector<BitVec> out;
    out.reserve(n.outputs.size());
    std::size_t bit_i = 0;
    for (const auto& port : n.outputs) {
        BitVec v(port.width);
        for (std::size_t b = 0; b < port.width; ++b) v.set_bit(b, val[n.output_bits[bit_i++]]);
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace chipforge::verilog
