// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "chipforge/expected.hpp"
#include "chipforge/ppa_metrics.hpp"
#include "chipforge/toolchain/workspace.hpp"

namespace chipforge {

struct Testbench {
    enum class Kind { VectorTable, VerilogSource };
    Kind kind = Kind::VectorTable;
    std::string body;
};

const char* testbench_kind_name(Testbench::Kind k);
std::optional<Testbench::Kind> parse_testbench_kind(const std::string& name);

struct StageTimeouts {
    double compile_s = 10.0;
    double simulate_s = 30.0;
    double synthesis_s = 120.0;

    bool valid() const { return compile_s > 0 && simulate_s > 0 && synthesis_s > 0; }
};

/// Infrastructure errors that escape a stage. Ordinary stage failures
/// (bad code, failing testbench, unparsable reports, timeouts) are carried
/// in the stage outcome instead, with the reason in the log.
enum class ToolErrorKind { ToolUnavailable };

struct ToolError {
    ToolErrorKind kind = ToolErrorKind::ToolUnavailable;
    std::string message;
};

struct StageOutcome {
    bool ok = false;
    std::string log;
};

struct SynOutcome {
    bool ok = false;
    std::optional<PpaMetrics> ppa;
    std::string log;
};

class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string name() const = 0;

    virtual Expected<StageOutcome, ToolError>
    check_compile(const std::string& code, const Workspace& ws, double timeout_s) const = 0;

    virtual Expected<StageOutcome, ToolError> run_testbench(const std::string& code,
                                                            const Testbench& tb,
                                                            const Workspace& ws,
                                                            double timeout_s) const = 0;

    virtual Expected<SynOutcome, ToolError>
    synthesize_and_ppa(const std::string& code, const Workspace& ws, double timeout_s) const = 0;
};

} // namespace chipforge
