// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "chipforge/ppa_metrics.hpp"

namespace chipforge {

enum class Stage { None, Compiled, Functional, Synthesized, PpaMeasured };

inline const char* stage_name(Stage s) {
    switch (s) {
    case Stage::None: return "none";
    case Stage::Compiled: return "compiled";
    case Stage::Functional: return "functional";
    case Stage::Synthesized: return "synthesized";
    case Stage::PpaMeasured: return "ppa_measured";
    }
    return "?";
}

/// Outcome of one staged evaluation. Invariants: func_ok implies
/// compile_ok; syn_ok implies func_ok; ppa present implies syn_ok;
/// stage_reached agrees with the flags.
struct ToolchainReport {
    bool compile_ok = false;
    bool func_ok = false;
    bool syn_ok = false;
    std::optional<PpaMetrics> ppa;
    Stage stage_reached = Stage::None;

    std::string compile_log;
    std::string func_log;
    std::string syn_log;

    double compile_seconds = 0.0;
    double func_seconds = 0.0;
    double syn_seconds = 0.0;

    /// Comma-joined scratch directory ids, one per stage that ran. Kept out
    /// of serialized reports so repeated runs stay byte-identical.
    std::string workspace_ids;

    bool gating_consistent() const {
        if (func_ok && !compile_ok) return false;
        if (syn_ok && !func_ok) return false;
        if (ppa.has_value() && !syn_ok) return false;
        switch (stage_reached) {
        case Stage::None: return !compile_ok;
        case Stage::Compiled: return compile_ok && !func_ok;
        case Stage::Functional: return func_ok && !syn_ok;
        case Stage::Synthesized: return syn_ok && !ppa.has_value();
        case Stage::PpaMeasured: return syn_ok && ppa.has_value();
        }
        return false;
    }
};

} // namespace chipforge
