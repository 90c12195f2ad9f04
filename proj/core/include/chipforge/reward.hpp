// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "chipforge/expected.hpp"
#include "chipforge/ppa_metrics.hpp"
#include "chipforge/toolchain/report.hpp"

namespace chipforge {

struct RewardWeights {
    double w_format = 0.1;
    double w_comp = 0.2;
    double w_func = 1.0;
    double w_syn = 0.1;
    double w_ppa = 1.0;
};

/// prose_strict: format gates compile, then compile -> func -> syn -> ppa.
/// equation_only: the same chain except format does not gate compile.
enum class GatingMode { ProseStrict, EquationOnly };

const char* gating_mode_name(GatingMode m);
std::optional<GatingMode> parse_gating_mode(const std::string& name);

struct RewardBreakdown {
    double r_format = 0.0;
    double r_comp = 0.0;
    double r_func = 0.0;
    double r_syn = 0.0;
    double r_ppa = 0.0;
    double total = 0.0;
    GatingMode gating_mode = GatingMode::ProseStrict;
};

struct NonPositiveMetric {
    std::string message;
};

/// 1 / (power * area * delay); every field must be strictly positive.
Expected<double, NonPositiveMetric> ppa_score(const PpaMetrics& m);

/// ppa_score(gen) / ppa_score(ref); 0 when the reference is absent or has
/// no defined score. The generated metrics must be valid.
Expected<double, NonPositiveMetric> ppa_reward(const PpaMetrics& gen,
                                               const std::optional<PpaMetrics>& ref);

/// Combine the format flag and a toolchain report into the five-component
/// reward. The gating chain is re-applied here, so inconsistent flag
/// combinations still produce a well-formed breakdown. ppa_cap, when set,
/// clips r_ppa from above.
RewardBreakdown hierarchical_reward(bool format_ok, const ToolchainReport& report,
                                    const std::optional<PpaMetrics>& reference,
                                    const RewardWeights& weights = RewardWeights(),
                                    GatingMode mode = GatingMode::ProseStrict,
                                    std::optional<double> ppa_cap = std::nullopt);

} // namespace chipforge
