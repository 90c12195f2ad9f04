// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chipforge/bitvec.hpp"

namespace chipforge::verilog {

/// Reference to one bit value in a netlist:
/// 0 = constant 0, 1 = constant 1, 2..2+I-1 = input bits (declared port
/// order, LSB first within a port), 2+I+g = output of gate g.
using BitRef = std::uint32_t;

inline constexpr BitRef kConst0 = 0;
inline constexpr BitRef kConst1 = 1;

enum class GateKind : std::uint8_t { Not, And2, Or2, Xor2 };

const char* gate_kind_name(GateKind k);

struct Gate {
    GateKind kind = GateKind::Not;
    BitRef a = kConst0;
    BitRef b = kConst0; // unused for Not
};

struct NetlistPort {
    std::string name;
    std::size_t width = 1;
};

/// Gate-level form of a module. Gates are stored in construction order,
/// which is topological: a gate's fanins always precede it.
struct GateNetlist {
    std::vector<NetlistPort> inputs;
    std::vector<NetlistPort> outputs;
    std::vector<Gate> gates;
    std::vector<BitRef> output_bits; // all output ports concatenated, LSB first per port

    std::size_t input_bit_count() const {
        std::size_t n = 0;
        for (const auto& p : inputs) n += p.width;
        return n;
    }
    std::size_t output_bit_count() const {
        std::size_t n = 0;
        for (const auto& p : outputs) n += p.width;
        return n;
    }
    std::size_t value_count() const { return 2 + input_bit_count() + gates.size(); }

    std::size_t gate_count(GateKind k) const {
        std::size_t n = 0;
        for (const auto& g : gates)
            if (g.kind == k) ++n;
        return n;
    }
};

/// Evaluate the netlist for one input vector. `input_values` aligns with
/// `n.inputs` (same order, matching widths); the result aligns with
/// `n.outputs`.
std::vector<BitVec> simulate_netlist(const GateNetlist& n, const std::vector<BitVec>& input_values);

} // namespace chipforge::verilog
