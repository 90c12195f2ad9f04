// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "chipforge/verilog/ast.hpp"
#include "chipforge/verilog/vector_table.hpp"

namespace chipforge::verilog {

struct SimError {
    enum class Kind { PortMismatch, Elaboration };
    Kind kind = Kind::PortMismatch;
    std::string message;
};

struct FunctionalResult {
    bool pass = false;
    std::vector<bool> row_pass; // aligned with the table's rows
    std::string diagnostics;    // one line per failing check
};

/// Run every table row against the elaborated netlist of `m`. The table's
/// port sets must match the module's ports (same names and widths, order
/// free); a disagreement is a PortMismatch error, not a failed run.
Expected<FunctionalResult, SimError> simulate_vectors(const MiniModule& m, const VectorTable& tb);

} // namespace chipforge::verilog
