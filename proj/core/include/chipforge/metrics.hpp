// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chipforge/expected.hpp"
#include "chipforge/reward.hpp"
#include "chipforge/toolchain/report.hpp"

namespace chipforge {

struct DomainError {
    std::string message;
};

struct MissingReference {
    std::string design;
};

/// Unbiased estimator 1 - C(n-c, k)/C(n, k), evaluated as a running product
/// of ratios so it never forms a large binomial.
Expected<double, DomainError> pass_at_k(std::uint64_t n, std::uint64_t c, std::uint64_t k);

/// Energy-delay-area product, the inverse of ppa_score.
Expected<double, NonPositiveMetric> edap(const PpaMetrics& m);

struct BestCandidate {
    std::size_t index = 0;
    PpaMetrics ppa;
};

/// Highest-ppa_score candidate among those carrying positive PPA; ties keep
/// the lowest index (first generated); absent when none qualify.
std::optional<BestCandidate> select_best(const std::vector<ToolchainReport>& candidates);

/// One benchmark design: the human reference plus every generated candidate.
struct DesignResult {
    std::string design;
    std::optional<PpaMetrics> reference_ppa;
    std::vector<ToolchainReport> candidates;
};

enum class Wtl { Win, Tie, Loss };

inline const char* wtl_name(Wtl w) {
    switch (w) {
    case Wtl::Win: return "win";
    case Wtl::Tie: return "tie";
    case Wtl::Loss: return "loss";
    }
    return "?";
}

struct DesignOutcome {
    std::string design;
    Wtl outcome = Wtl::Loss;
    std::optional<BestCandidate> best;
};

struct WtlOutcome {
    std::vector<DesignOutcome> per_design;
    std::size_t wins = 0;
    std::size_t ties = 0;
    std::size_t losses = 0;
    std::size_t evaluable = 0; // designs with a PPA-bearing best candidate
};

/// Pairwise classification against the reference score: a design with no
/// qualifying candidate is a loss; otherwise win/tie/loss by relative
/// score margin.
Expected<WtlOutcome, MissingReference> win_tie_loss(const std::vector<DesignResult>& results,
                                                    double tolerance = 1e-9);

struct EdapDropResult {
    double mean_drop_percent = 0.0;
    std::size_t evaluated = 0;
    std::size_t total = 0;
};

/// Arithmetic mean of per-design relative EDAP drops, taken over designs
/// whose best candidate carries PPA (testbench-passing designs).
Expected<EdapDropResult, MissingReference> edap_drop(const std::vector<DesignResult>& results);

/// The same aggregate under the alternative averaging conventions, for
/// comparing against a headline number whose convention is unstated.
struct EdapDropConventions {
    EdapDropResult arithmetic;
    double ratio_of_sums_percent = 0.0;
    double geometric_percent = 0.0;
    double wins_only_percent = 0.0;
    std::size_t wins = 0;
};

Expected<EdapDropConventions, MissingReference> edap_drop_conventions(
    const std::vector<DesignResult>& results, double tolerance = 1e-9);

/// One row of the bundled benchmark table: reference triple plus the three
/// model triples, any of which may be absent (NA).
struct Table3Row {
    std::string design;
    std::optional<PpaMetrics> reference;
    std::optional<PpaMetrics> rtlcoder;
    std::optional<PpaMetrics> gpt4o;
    std::optional<PpaMetrics> chipseek;

    const std::optional<PpaMetrics>* model(const std::string& name) const {
        if (name == "rtlcoder") return &rtlcoder;
        if (name == "gpt4o") return &gpt4o;
        if (name == "chipseek") return &chipseek;
        return nullptr;
    }
};

/// Parse the bundled tab-separated table: design, reference triple, then
/// delay/area/power triples per model, NA for unavailable entries.
Expected<std::vector<Table3Row>, DomainError> parse_table3(const std::string& text);

/// View table rows as DesignResults for one model column; an absent triple
/// becomes a design with no candidates (cannot pass the testbench).
Expected<std::vector<DesignResult>, DomainError> design_results_from_table(
    const std::vector<Table3Row>& rows, const std::string& model);

} // namespace chipforge
