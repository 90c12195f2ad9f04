// SPDX-License-Identifier: Apache-2.0
#include "chipforge/toolchain/mock_backend.hpp"

#include "chipforge/verilog/parser.hpp"
#include "chipforge/verilog/simulate.hpp"
#include "chipforge/verilog/vector_table.hpp"

namespace chipforge {

const char* testbench_kind_name(Testbench::Kind k) {
    return k == Testbench::Kind::VectorTable ? "vector_table" : "verilog_source";
}

std::optional<Testbench::Kind> parse_testbench_kind(const std::string& name) {
    if (name == "vector_table") return Testbench::Kind::VectorTable;
    if (name == "verilog_source") return Testbench::Kind::VerilogSource;
    return std::nullopt;
}

Expected<StageOutcome, ToolError> MockBackend::check_compile(const std::string& code,
                                                             const Workspace&, double) const {
    auto parsed = verilog::parse_mini(code);
    if (!parsed.ok()) return StageOutcome{false, "SyntaxError: " + parsed.error().str()};
    return StageOutcome{true, "compiled module '" + parsed.value().name + "'"};
}

Expected<StageOutcome, ToolError> MockBackend::run_testbench(const std::string& code,
                                                             const Testbench& tb,
                                                             const Workspace&, double) const {
    if (tb.kind == Testbench::Kind::VerilogSource) {
        return StageOutcome{
            false, "the mock backend only executes vector_table testbenches; "
                   "run verilog_source testbenches on the external backend"};
    }
    auto parsed = verilog::parse_mini(code);
    if (!parsed.ok()) return StageOutcome{false, "SyntaxError: " + parsed.error().str()};
    auto table = verilog::parse_vector_table(tb.body);
    if (!table.ok()) return StageOutcome{false, "bad vector table: " + table.error().str()};
    auto result = verilog::simulate_vectors(parsed.value(), table.value());
    if (!result.ok()) return StageOutcome{false, result.error().message};
    if (!result.value().pass) {
        std::size_t failed = 0;
        for (bool ok : result.value().row_pass)
            if (!ok) ++failed;
        return StageOutcome{false, std::to_string(failed) + " of " +
                                       std::to_string(result.value().row_pass.size()) +
                                       " rows failed\n" + result.value().diagnostics};
    }
    return StageOutcome{true,
                        "all " + std::to_string(result.value().row_pass.size()) + " rows pass"};
}

Expected<SynOutcome, ToolError> MockBackend::synthesize_and_ppa(const std::string& code,
                                                                const Workspace&, double) const {
    auto parsed = verilog::parse_mini(code);
    if (!parsed.ok()) return SynOutcome{false, std::nullopt, "SyntaxError: " + parsed.error().str()};
    auto netlist = verilog::elaborate(parsed.value(), elab_);
    if (!netlist.ok())
        return SynOutcome{false, std::nullopt, "ElaborationError: " + netlist.error().str()};
    const PpaMetrics ppa = verilog::estimate_ppa(netlist.value(), cost_);
    if (!ppa.all_positive())
        return SynOutcome{false, std::nullopt, "cost model produced a non-positive metric"};
    const auto& nl = netlist.value();
    return SynOutcome{true, ppa,
                      "netlist: " + std::to_string(nl.gates.size()) + " gates (" +
                          std::to_string(nl.gate_count(verilog::GateKind::And2)) + " AND2, " +
                          std::to_string(nl.gate_count(verilog::GateKind::Or2)) + " OR2, " +
                          std::to_string(nl.gate_count(verilog::GateKind::Xor2)) + " XOR2, " +
                          std::to_string(nl.gate_count(verilog::GateKind::Not)) + " NOT)"};
}

} // namespace chipforge
