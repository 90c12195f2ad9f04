// SPDX-License-Identifier: Apache-2.0
#include "chipforge/reward.hpp"

#include <algorithm>
#include <cmath>

namespace chipforge {

const char* gating_mode_name(GatingMode m) {
    return m == GatingMode::ProseStrict ? "prose_strict" : "equation_only";
}

std::optional<GatingMode> parse_gating_mode(const std::string& name) {
    if (name == "prose_strict") return GatingMode::ProseStrict;
    if (name == "equation_only") return GatingMode::EquationOnly;
    return std::nullopt;
}

Expected<double, NonPositiveMetric> ppa_score(const PpaMetrics& m) {
    if (!m.all_positive())
        return NonPositiveMetric{"ppa_score requires strictly positive delay, area, and power"};
    return 1.0 / (m.power_w * m.area_um2 * m.delay_ns);
}

Expected<double, NonPositiveMetric> ppa_reward(const PpaMetrics& gen,
                                               const std::optional<PpaMetrics>& ref) {
    auto gen_score = ppa_score(gen);
    if (!gen_score.ok()) return gen_score.error();
    if (!ref || !ref->all_positive()) return 0.0;
    return gen_score.value() * (ref->power_w * ref->area_um2 * ref->delay_ns);
}

RewardBreakdown hierarchical_reward(bool format_ok, const ToolchainReport& report,
                                    const std::optional<PpaMetrics>& reference,
                                    const RewardWeights& weights, GatingMode mode,
                                    std::optional<double> ppa_cap) {
    RewardBreakdown b;
    b.gating_mode = mode;
    b.r_format = format_ok ? 1.0 : 0.0;

    const bool comp_base =
        mode == GatingMode::ProseStrict ? (format_ok && report.compile_ok) : report.compile_ok;
    b.r_comp = comp_base ? 1.0 : 0.0;
    b.r_func = (comp_base && report.func_ok) ? 1.0 : 0.0;
    b.r_syn = (b.r_func > 0.0 && report.syn_ok) ? 1.0 : 0.0;

    if (b.r_syn > 0.0 && report.ppa.has_value()) {
        auto r = ppa_reward(*report.ppa, reference);
        b.r_ppa = r.ok() ? r.value() : 0.0;
        if (ppa_cap) b.r_ppa = std::min(b.r_ppa, *ppa_cap);
    }

    // Neumaier-compensated sum: naive left-to-right accumulation lands one
    // rounding ulp above 2.4 on the default-weight full pass, and the total
    // must hit such decimal anchors exactly.
    const double terms[5] = {weights.w_format * b.r_format, weights.w_comp * b.r_comp,
                             weights.w_func * b.r_func, weights.w_syn * b.r_syn,
                             weights.w_ppa * b.r_ppa};
    double sum = 0.0;
    double comp = 0.0;
    for (double t : terms) {
        const double u = sum + t;
        comp += std::abs(sum) >= std::abs(t) ? (sum - u) + t : (t - u) + sum;
        sum = u;
    }
    b.total = sum + comp;
    return b;
}

} // namespace chipforge
