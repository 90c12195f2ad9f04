// SPDX-License-Identifier: Apache-2.0
#include "chipforge/scoring.hpp"

#include <nlohmann/json.hpp>

#include "chipforge/worker_pool.hpp"

namespace chipforge {

Expected<ScoreResult, ToolError> Scorer::score(const ScoreRequest& req) const {
    ScoreResult out;
    FormatOptions fmt = opts_.format;
    if (opts_.gating == GatingMode::EquationOnly) fmt.lenient_extraction = true;
    out.parsed = parse_response(req.response_text, fmt);

    // Under prose_strict a format violation zeroes everything downstream,
    // so the toolchain stages are not worth running.
    bool gate_open = opts_.gating == GatingMode::EquationOnly || out.parsed.format_ok;
    if (!out.parsed.code.has_value()) {
        out.report.compile_log = "no Verilog module found in the response";
    } else if (!gate_open) {
        out.report.compile_log = "format gate failed; staged evaluation skipped";
    } else {
        EvalRequest ereq;
        ereq.code = *out.parsed.code;
        ereq.testbench = req.testbench;
        ereq.reference_ppa = req.reference_ppa;
        ereq.timeouts = req.timeouts;
        auto rep = chain_.evaluate(ereq);
        if (!rep.ok()) return rep.error();
        out.report = rep.value();
    }
    out.reward = hierarchical_reward(out.parsed.format_ok, out.report, req.reference_ppa,
                                     opts_.weights, opts_.gating, opts_.ppa_cap);
    return out;
}

std::vector<Expected<ScoreResult, ToolError>> Scorer::score_batch(
    const std::vector<ScoreRequest>& requests, int jobs) const {
    std::vector<Expected<ScoreResult, ToolError>> results(
        requests.size(), Expected<ScoreResult, ToolError>(ScoreResult{}));
    parallel_for_indexed(requests.size(), jobs,
                         [&](std::size_t i) { results[i] = score(requests[i]); });
    return results;
}

std::string score_result_json(const ScoreResult& result, bool include_logs) {
    nlohmann::json j;
    j["format_ok"] = result.parsed.format_ok;
    j["code_found"] = result.parsed.code.has_value();
    j["compile_ok"] = result.report.compile_ok;
    j["func_ok"] = result.report.func_ok;
    j["syn_ok"] = result.report.syn_ok;
    j["stage_reached"] = stage_name(result.report.stage_reached);
    if (result.report.ppa.has_value()) {
        j["ppa"] = {{"delay_ns", result.report.ppa->delay_ns},
                    {"area_um2", result.report.ppa->area_um2},
                    {"power_w", result.report.ppa->power_w}};
    }
    j["reward"] = {{"r_format", result.reward.r_format}, {"r_comp", result.reward.r_comp},
                   {"r_func", result.reward.r_func},     {"r_syn", result.reward.r_syn},
                   {"r_ppa", result.reward.r_ppa},       {"total", result.reward.total},
                   {"gating_mode", gating_mode_name(result.reward.gating_mode)}};
    if (include_logs) {
        j["logs"] = {{"compile", result.report.compile_log},
                     {"functional", result.report.func_log},
                     {"synthesis", result.report.syn_log}};
    }
    return j.dump();
}

} // namespace chipforge
