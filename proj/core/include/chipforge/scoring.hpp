// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "chipforge/response_format.hpp"
#include "chipforge/reward.hpp"
#include "chipforge/toolchain/pipeline.hpp"

namespace chipforge {

struct ScoringOptions {
    RewardWeights weights{};
    GatingMode gating = GatingMode::ProseStrict;
    std::optional<double> ppa_cap;
    FormatOptions format{};
};

struct ScoreRequest {
    std::string response_text;
    std::optional<Testbench> testbench;
    std::optional<PpaMetrics> reference_ppa;
    StageTimeouts timeouts{};
};

struct ScoreResult {
    ParsedResponse parsed;
    ToolchainReport report;
    RewardBreakdown reward;
};

/// End-to-end response scoring: parse tags, extract code, run the staged
/// toolchain, fold the outcome into the hierarchical reward. Under the
/// equation-only gating mode code extraction is forced lenient, since that
/// mode rewards compilable code regardless of prose formatting.
class Scorer {
public:
    Scorer(Toolchain toolchain, ScoringOptions opts)
        : chain_(std::move(toolchain)), opts_(std::move(opts)) {}

    Expected<ScoreResult, ToolError> score(const ScoreRequest& req) const;
    std::vector<Expected<ScoreResult, ToolError>> score_batch(
        const std::vector<ScoreRequest>& requests, int jobs) const;

    const ScoringOptions& options() const { return opts_; }
    const Toolchain& toolchain() const { return chain_; }

private:
    Toolchain chain_;
    ScoringOptions opts_;
};

/// Single-line JSON for one scored response. Keys are sorted and volatile
/// fields (timings, workspace ids) are omitted, so identical evaluations
/// serialize byte-identically.
std::string score_result_json(const ScoreResult& result, bool include_logs = false);

} // namespace chipforge
