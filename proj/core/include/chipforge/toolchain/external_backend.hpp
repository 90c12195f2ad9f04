// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "chipforge/toolchain/backend.hpp"

namespace chipforge {

/// Tool paths and report conventions for the real-EDA adapter. The
/// physical flow is a user-supplied command (run inside the workspace
/// after synthesis) whose report must contain the three metric keys; the
/// placeholders {design} and {workspace} in its arguments are substituted
/// before execution.
struct ExternalToolConfig {
    std::string iverilog = "iverilog";
    std::string vvp = "vvp";
    std::string yosys = "yosys";
    std::vector<std::string> physical_flow;

    std::vector<std::string> failure_markers = {"FAIL", "Error", "MISMATCH"};

    std::string delay_key = "delay_ns";
    std::string area_key = "area_um2";
    std::string power_key = "power_w";
};

struct ReportParseError {
    std::string message;
};

/// Scan report text for the three metric keys and take the first number on
/// each key's line. All three must parse and be strictly positive.
Expected<PpaMetrics, ReportParseError> parse_ppa_report(const std::string& text,
                                                        const ExternalToolConfig& cfg = {});

/// First output line containing any failure marker, if any. Supplements
/// exit codes for simulators that exit 0 after printing assertion failures.
std::optional<std::string> scan_failure_markers(const std::string& output,
                                                const std::vector<std::string>& markers);

class ExternalBackend : public Backend {
public:
    ExternalBackend() = default;
    explicit ExternalBackend(ExternalToolConfig cfg) : cfg_(std::move(cfg)) {}

    std::string name() const override { return "external"; }

    Expected<StageOutcome, ToolError> check_compile(const std::string& code, const Workspace& ws,
                                                    double timeout_s) const override;
    Expected<StageOutcome, ToolError> run_testbench(const std::string& code, const Testbench& tb,
                                                    const Workspace& ws,
                                                    double timeout_s) const override;
    Expected<SynOutcome, ToolError> synthesize_and_ppa(const std::string& code,
                                                       const Workspace& ws,
                                                       double timeout_s) const override;

    const ExternalToolConfig& config() const { return cfg_; }

private:
    ExternalToolConfig cfg_;
};

} // namespace chipforge
