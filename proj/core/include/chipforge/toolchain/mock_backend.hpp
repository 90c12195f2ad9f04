// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "chipforge/toolchain/backend.hpp"
#include "chipforge/verilog/elaborate.hpp"
#include "chipforge/verilog/ppa.hpp"

namespace chipforge {

/// Self-contained backend over the mini-Verilog engine: compile = parse,
/// functional = vector-table simulation on the elaborated netlist,
/// synthesis = elaboration + unit-cost PPA. Deterministic and pure; the
/// workspace and timeouts are accepted but not needed.
class MockBackend : public Backend {
public:
    MockBackend() = default;
    MockBackend(verilog::ElaborateOptions elab, verilog::CostModel cost)
        : elab_(elab), cost_(cost) {}

    std::string name() const override { return "mock"; }

    Expected<StageOutcome, ToolError> check_compile(const std::string& code, const Workspace& ws,
                                                    double timeout_s) const override;
    Expected<StageOutcome, ToolError> run_testbench(const std::string& code, const Testbench& tb,
                                                    const Workspace& ws,
                                                    double timeout_s) const override;
    Expected<SynOutcome, ToolError> synthesize_and_ppa(const std::string& code,
                                                       const Workspace& ws,
                                                       double timeout_s) const override;

private:
    verilog::ElaborateOptions elab_;
    verilog::CostModel cost_;
};

} // namespace chipforge
