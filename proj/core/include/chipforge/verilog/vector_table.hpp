// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "chipforge/bitvec.hpp"
#include "chipforge/expected.hpp"

namespace chipforge::verilog {

struct VtPort {
    std::string name;
    std::size_t width = 1;
};

struct VtRow {
    std::vector<BitVec> in_values;  // aligned with VectorTable::in_ports
    std::vector<BitVec> out_values; // aligned with VectorTable::out_ports
    std::size_t line = 0;           // source line, for diagnostics
};

/// Text testbench: a header naming the ports, then one stimulus/expectation
/// row per line.
///
///   ports: in a[8] b[8] -> out s[8] cout[1]
///   # full row of comments allowed
///   a=0x0F b=0x01 -> s=0x10 cout=0
///
/// Values are hex (0x...), binary (0b...), or decimal, and must fit the
/// declared width.
struct VectorTable {
    std::vector<VtPort> in_ports;
    std::vector<VtPort> out_ports;
    std::vector<VtRow> rows;

    std::size_t case_count() const { return rows.size(); }
};

struct TableParseError {
    std::size_t line = 0;
    std::string message;

    std::string str() const { return "line " + std::to_string(line) + ": " + message; }
};

Expected<VectorTable, TableParseError> parse_vector_table(const std::string& text);

/// Canonical rendering: parse_vector_table(render_vector_table(t))
/// reproduces t exactly.
std::string render_vector_table(const VectorTable& t);

/// Self-checking Verilog testbench for external simulators. Prints one
/// "MISMATCH" line per failing check and a final PASS/FAIL summary, so the
/// failure-marker scan works with simulators that always exit 0.
std::string to_verilog_testbench(const VectorTable& t, const std::string& module_name);

} // namespace chipforge::verilog
