// SPDX-License-Identifier: Apache-2.0
#include "chipforge/metrics.hpp"

#include <cmath>
#include <sstream>

namespace chipforge {

Expected<double, DomainError> pass_at_k(std::uint64_t n, std::uint64_t c, std::uint64_t k) {
    if (c > n) return DomainError{"pass@k requires c <= n"};
    if (k < 1 || k > n) return DomainError{"pass@k requires 1 <= k <= n"};
    if (c == 0) return 0.0;
    if (c + k > n) return 1.0; // every k-subset contains a passing sample
    // Exact integer falling factorials while they fit 128 bits; the single
    // final division then matches subset enumeration bit for bit.
    unsigned __int128 num = 1, den = 1;
    const unsigned __int128 lim = (unsigned __int128)1 << 100;
    bool exact = true;
    for (std::uint64_t i = 0; i < k && exact; ++i) {
        num *= n - c - i;
        den *= n - i;
        if (den >= lim || num >= lim) exact = false;
    }
    if (exact) return 1.0 - static_cast<double>(num) / static_cast<double>(den);
    double miss = 1.0;
    for (std::uint64_t i = 0; i < k; ++i) {
        miss *= static_cast<double>(n - c - i) / static_cast<double>(n - i);
    }
    return 1.0 - miss;
}

Expected<double, NonPositiveMetric> edap(const PpaMetrics& m) {
    if (!m.all_positive()) {
        return NonPositiveMetric{"EDAP requires strictly positive delay, area, and power"};
    }
    return m.area_um2 * m.delay_ns * m.power_w;
}

std::optional<BestCandidate> select_best(const std::vector<ToolchainReport>& candidates) {
    std::optional<BestCandidate> best;
    double best_score = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const auto& r = candidates[i];
        if (!r.ppa.has_value() || !r.ppa->all_positive()) continue;
        auto score = ppa_score(*r.ppa);
        if (!score.ok()) continue;
        if (!best.has_value() || score.value() > best_score) {
            best = BestCandidate{i, *r.ppa};
            best_score = score.value();
        }
    }
    return best;
}

Expected<WtlOutcome, MissingReference> win_tie_loss(const std::vector<DesignResult>& results,
                                                    double tolerance) {
    WtlOutcome out;
    for (const auto& d : results) {
        if (!d.reference_ppa.has_value() || !d.reference_ppa->all_positive()) {
            return MissingReference{d.design};
        }
        DesignOutcome oc;
        oc.design = d.design;
        oc.best = select_best(d.candidates);
        if (!oc.best.has_value()) {
            oc.outcome = Wtl::Loss;
        } else {
            ++out.evaluable;
            double gen = ppa_score(oc.best->ppa).value();
            double ref = ppa_score(*d.reference_ppa).value();
            if (gen > ref * (1.0 + tolerance)) {
                oc.outcome = Wtl::Win;
            } else if (gen < ref * (1.0 - tolerance)) {
                oc.outcome = Wtl::Loss;
            } else {
                oc.outcome = Wtl::Tie;
            }
        }
        switch (oc.outcome) {
        case Wtl::Win: ++out.wins; break;
        case Wtl::Tie: ++out.ties; break;
        case Wtl::Loss: ++out.losses; break;
        }
        out.per_design.push_back(std::move(oc));
    }
    return out;
}

Expected<EdapDropResult, MissingReference> edap_drop(const std::vector<DesignResult>& results) {
    EdapDropResult out;
    out.total = results.size();
    double sum = 0.0;
    for (const auto& d : results) {
        if (!d.reference_ppa.has_value() || !d.reference_ppa->all_positive()) {
            return MissingReference{d.design};
        }
        auto best = select_best(d.candidates);
        if (!best.has_value()) continue;
        double e_best = edap(best->ppa).value();
        double e_ref = edap(*d.reference_ppa).value();
        sum += (1.0 - e_best / e_ref) * 100.0;
        ++out.evaluated;
    }
    if (out.evaluated > 0) out.mean_drop_percent = sum / static_cast<double>(out.evaluated);
    return out;
}

Expected<EdapDropConventions, MissingReference> edap_drop_conventions(
    const std::vector<DesignResult>& results, double tolerance) {
    EdapDropConventions out;
    auto arith = edap_drop(results);
    if (!arith.ok()) return arith.error();
    out.arithmetic = arith.value();

    auto wtl = win_tie_loss(results, tolerance);
    if (!wtl.ok()) return wtl.error();
    out.wins = wtl.value().wins;

    double sum_best = 0.0;
    double sum_ref = 0.0;
    double log_sum = 0.0;
    double win_sum = 0.0;
    std::size_t evaluated = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& d = results[i];
        auto best = select_best(d.candidates);
        if (!best.has_value()) continue;
        double e_best = edap(best->ppa).value();
        double e_ref = edap(*d.reference_ppa).value();
        sum_best += e_best;
        sum_ref += e_ref;
        log_sum += std::log(e_best / e_ref);
        if (wtl.value().per_design[i].outcome == Wtl::Win) {
            win_sum += (1.0 - e_best / e_ref) * 100.0;
        }
        ++evaluated;
    }
    if (evaluated > 0) {
        out.ratio_of_sums_percent = (1.0 - sum_best / sum_ref) * 100.0;
        out.geometric_percent =
            (1.0 - std::exp(log_sum / static_cast<double>(evaluated))) * 100.0;
    }
    if (out.wins > 0) out.wins_only_percent = win_sum / static_cast<double>(out.wins);
    return out;
}

namespace {

Expected<std::optional<PpaMetrics>, DomainError> parse_triple(const std::vector<std::string>& f,
                                                              std::size_t at,
                                                              const std::string& design) {
    int na = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        if (f[at + i] == "NA") ++na;
    }
    if (na == 3) return std::optional<PpaMetrics>{};
    if (na != 0) {
        return DomainError{"design '" + design + "': partially NA metric triple"};
    }
    PpaMetrics m{};
    double* slots[3] = {&m.delay_ns, &m.area_um2, &m.power_w};
    for (std::size_t i = 0; i < 3; ++i) {
        try {
            std::size_t used = 0;
            *slots[i] = std::stod(f[at + i], &used);
            if (used != f[at + i].size()) throw std::invalid_argument("trailing text");
        } catch (const std::exception&) {
            return DomainError{"design '" + design + "': bad number '" + f[at + i] + "'"};
        }
    }
    return std::optional<PpaMetrics>{m};
}

} // namespace

Expected<std::vector<Table3Row>, DomainError> parse_table3(const std::string& text) {
    std::vector<Table3Row> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;

        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            std::size_t tab = line.find('\t', start);
            fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos
                                                                         : tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (fields[0] == "design") continue; // header row
        if (fields.size() != 13) {
            return DomainError{"line " + std::to_string(lineno) + ": expected 13 columns, got " +
                               std::to_string(fields.size())};
        }
        Table3Row row;
        row.design = fields[0];
        struct Col {
            std::optional<PpaMetrics>* slot;
            std::size_t at;
        } cols[] = {{&row.reference, 1}, {&row.rtlcoder, 4}, {&row.gpt4o, 7}, {&row.chipseek, 10}};
        for (const auto& c : cols) {
            auto triple = parse_triple(fields, c.at, row.design);
            if (!triple.ok()) return triple.error();
            *c.slot = triple.value();
        }
        if (!row.reference.has_value()) {
            return DomainError{"design '" + row.design + "': reference triple cannot be NA"};
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Expected<std::vector<DesignResult>, DomainError> design_results_from_table(
    const std::vector<Table3Row>& rows, const std::string& model) {
    std::vector<DesignResult> out;
    for (const auto& row : rows) {
        const std::optional<PpaMetrics>* m = row.model(model);
        if (m == nullptr) {
            return DomainError{"unknown model '" + model +
                               "' (expected rtlcoder, gpt4o, or chipseek)"};
        }
        DesignResult d;
        d.design = row.design;
        d.reference_ppa = row.reference;
        if (m->has_value()) {
            ToolchainReport r;
            r.compile_ok = r.func_ok = r.syn_ok = true;
            r.stage_reached = Stage::PpaMeasured;
            r.ppa = **m;
            d.candidates.push_back(std::move(r));
        }
        out.push_back(std::move(d));
    }
    return out;
}

} // namespace chipforge
