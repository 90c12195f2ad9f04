// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "chipforge/verilog/ast.hpp"
#include "chipforge/verilog/netlist.hpp"

namespace chipforge::verilog {

struct ElaborationError {
    SourceLoc loc;
    std::string message;

    std::string str() const {
        return "line " + std::to_string(loc.line) + ", col " + std::to_string(loc.col) + ": " +
               message;
    }
};

struct ElaborateOptions {
    std::size_t max_gates = 2'000'000;
};

/// Lower a validated module to a 2-input gate netlist.
///
/// Lowering rules: +/- become ripple-carry full adders (per non-degenerate
/// bit: 2 XOR2, 2 AND2, 1 OR2, with the a^b term shared between sum and
/// carry); chained + terms are flattened and one 1-bit addend is absorbed
/// as the ripple carry-in; * becomes an array multiplier; shifts and ?:
/// become 2:1 mux trees (MUX2 = 2 AND2 + 1 OR2 + 1 NOT); < <= > >= become
/// a borrow chain (subtract-and-inspect); == becomes per-bit XOR2 + NOT
/// with a balanced AND tree, != the XOR2 bits under a balanced OR tree.
/// Constant bits fold through every gate; structurally identical gates are
/// reused within a single assign.
Expected<GateNetlist, ElaborationError> elaborate(const MiniModule& m,
                                                  const ElaborateOptions& opts = {});

} // namespace chipforge::verilog
