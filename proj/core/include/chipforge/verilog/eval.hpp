// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <unordered_map>

#include "chipforge/verilog/ast.hpp"

namespace chipforge::verilog {

/// Evaluate one expression over concrete signal values. Width semantics
/// match expr_width exactly, so this is an independent oracle for the
/// gate-level route: it never touches GateNetlist.
BitVec eval_expr(const Expr& e, const std::unordered_map<std::string, BitVec>& env);

struct EvalError {
    std::string message;
};

/// Evaluate every assign in dependency order. `inputs` must provide every
/// input port at its declared width. Returns the final value of every
/// signal (inputs, wires, outputs).
Expected<std::unordered_map<std::string, BitVec>, EvalError>
eval_module(const MiniModule& m, const std::unordered_map<std::string, BitVec>& inputs);

} // namespace chipforge::verilog
