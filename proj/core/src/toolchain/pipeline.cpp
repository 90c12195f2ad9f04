// SPDX-License-Identifier: Apache-2.0
#include "chipforge/toolchain/pipeline.hpp"

#include <chrono>

#include "chipforge/worker_pool.hpp"

namespace chipforge {

namespace {

class StageClock {
public:
    StageClock() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void note_workspace(ToolchainReport& report, const Workspace& ws) {
    if (!report.workspace_ids.empty()) report.workspace_ids += ",";
    report.workspace_ids += ws.id();
}

/// Failing to provision scratch space means the environment, not the
/// candidate, is broken; treat it like a missing tool.
ToolError workspace_error(const WorkspaceError& err) {
    return ToolError{ToolErrorKind::ToolUnavailable, "scratch workspace: " + err.message};
}

} // namespace

Expected<ToolchainReport, ToolError> Toolchain::evaluate(const EvalRequest& req) const {
    ToolchainReport report;

    {
        auto ws = Workspace::create(workspace_root_);
        if (!ws.ok()) return workspace_error(ws.error());
        note_workspace(report, ws.value());
        StageClock clock;
        auto outcome = backend_->check_compile(req.code, ws.value(), req.timeouts.compile_s);
        report.compile_seconds = clock.seconds();
        if (!outcome.ok()) return outcome.error();
        report.compile_ok = outcome.value().ok;
        report.compile_log = outcome.value().log;
    }
    if (!report.compile_ok) {
        report.stage_reached = Stage::None;
        return report;
    }
    report.stage_reached = Stage::Compiled;

    if (!req.testbench.has_value()) {
        report.func_log = "no testbench provided";
        return report;
    }
    {
        auto ws = Workspace::create(workspace_root_);
        if (!ws.ok()) return workspace_error(ws.error());
        note_workspace(report, ws.value());
        StageClock clock;
        auto outcome = backend_->run_testbench(req.code, *req.testbench, ws.value(),
                                               req.timeouts.simulate_s);
        report.func_seconds = clock.seconds();
        if (!outcome.ok()) return outcome.error();
        report.func_ok = outcome.value().ok;
        report.func_log = outcome.value().log;
    }
    if (!report.func_ok) return report;
    report.stage_reached = Stage::Functional;

    {
        auto ws = Workspace::create(workspace_root_);
        if (!ws.ok()) return workspace_error(ws.error());
        note_workspace(report, ws.value());
        StageClock clock;
        auto outcome =
            backend_->synthesize_and_ppa(req.code, ws.value(), req.timeouts.synthesis_s);
        report.syn_seconds = clock.seconds();
        if (!outcome.ok()) return outcome.error();
        report.syn_ok = outcome.value().ok;
        report.syn_log = outcome.value().log;
        if (report.syn_ok) {
            report.stage_reached = Stage::Synthesized;
            if (outcome.value().ppa.has_value()) {
                report.ppa = outcome.value().ppa;
                report.stage_reached = Stage::PpaMeasured;
            }
        }
    }
    return report;
}

std::vector<Expected<ToolchainReport, ToolError>> Toolchain::evaluate_batch(
    const std::vector<EvalRequest>& requests, int jobs) const {
    std::vector<Expected<ToolchainReport, ToolError>> results(
        requests.size(), Expected<ToolchainReport, ToolError>(ToolchainReport{}));
    parallel_for_indexed(requests.size(), jobs,
                         [&](std::size_t i) { results[i] = evaluate(requests[i]); });
    return results;
}

} // namespace chipforge
