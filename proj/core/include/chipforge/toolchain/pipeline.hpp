// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <vector>

#include "chipforge/toolchain/backend.hpp"
#include "chipforge/toolchain/report.hpp"

namespace chipforge {

struct EvalRequest {
    std::string code;
    std::optional<Testbench> testbench;
    std::optional<PpaMetrics> reference_ppa;
    StageTimeouts timeouts;
};

/// Staged evaluation driver: compile, simulate, synthesize + PPA, with
/// early exit at the first failing stage. Each stage runs in a fresh
/// scratch workspace so candidates can never observe each other's files.
class Toolchain {
public:
    explicit Toolchain(std::shared_ptr<const Backend> backend, std::string workspace_root = "")
        : backend_(std::move(backend)), workspace_root_(std::move(workspace_root)) {}

    /// The only error that escapes is a missing tool; every other failure
    /// mode is recorded in the report's stage flags and logs.
    Expected<ToolchainReport, ToolError> evaluate(const EvalRequest& req) const;

    /// Index-aligned parallel evaluation over a transient worker pool.
    std::vector<Expected<ToolchainReport, ToolError>> evaluate_batch(
        const std::vector<EvalRequest>& requests, int jobs) const;

    const Backend& backend() const { return *backend_; }

private:
    std::shared_ptr<const Backend> backend_;
    std::string workspace_root_;
};

} // namespace chipforge
