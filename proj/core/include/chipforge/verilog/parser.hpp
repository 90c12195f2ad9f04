// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "chipforge/verilog/ast.hpp"

namespace chipforge::verilog {

/// Parse one module in the combinational subset and run semantic
/// validation. Any construct outside the subset, and any semantic
/// violation (undeclared name, multiple drivers, combinational cycle),
/// is reported as a SyntaxError carrying a source position.
Expected<MiniModule, SyntaxError> parse_mini(const std::string& source);

} // namespace chipforge::verilog
