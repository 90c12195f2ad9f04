// SPDX-License-Identifier: Apache-2.0
#include "chipforge/toolchain/external_backend.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

#include "chipforge/dataset/records.hpp"
#include "chipforge/toolchain/subprocess.hpp"
#include "chipforge/verilog/vector_table.hpp"

namespace chipforge {

namespace {

std::optional<double> first_number_after(const std::string& line, std::size_t from) {
    for (std::size_t i = from; i < line.size(); ++i) {
        char c = line[i];
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            ((c == '-' || c == '+' || c == '.') && i + 1 < line.size() &&
             std::isdigit(static_cast<unsigned char>(line[i + 1])))) {
            const char* start = line.c_str() + i;
            char* end = nullptr;
            double v = std::strtod(start, &end);
            if (end != start) return v;
        }
    }
    return std::nullopt;
}

std::optional<double> find_metric(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::size_t pos = line.find(key);
        if (pos == std::string::npos) continue;
        if (auto v = first_number_after(line, pos + key.size())) return v;
    }
    return std::nullopt;
}

std::string substitute(std::string arg, const std::string& design, const std::string& ws) {
    auto replace_all = [](std::string& s, const std::string& from, const std::string& to) {
        std::size_t pos = 0;
        while ((pos = s.find(from, pos)) != std::string::npos) {
            s.replace(pos, from.size(), to);
            pos += to.size();
        }
    };
    replace_all(arg, "{design}", design);
    replace_all(arg, "{workspace}", ws);
    return arg;
}

struct ToolRun {
    bool ok = false;
    std::string log;
    std::optional<ToolError> unavailable;
};

/// Run one external command. Spawn failure is the only condition promoted
/// to ToolError; timeouts and nonzero exits fold into the stage log.
ToolRun run_tool(const std::vector<std::string>& argv, const Workspace& ws, double timeout_s,
                 const std::string& what) {
    ToolRun out;
    RunResult r = run_command(argv, ws.path(), timeout_s);
    if (r.spawn_failed) {
        out.unavailable = ToolError{ToolErrorKind::ToolUnavailable,
                                    what + ": cannot launch '" + argv.front() + "': " + r.error};
        return out;
    }
    out.log = r.output;
    if (r.timed_out) {
        out.log += "\nTIMEOUT: " + what + " exceeded the stage time limit";
        return out;
    }
    if (r.exit_code != 0) {
        out.log += "\n" + what + " exited with code " + std::to_string(r.exit_code);
        return out;
    }
    out.ok = true;
    return out;
}

} // namespace

namespace {

/// Scratch-space write failures are environment breakage, like a missing
/// tool binary.
std::optional<ToolError> write_or_unavailable(const Workspace& ws, const std::string& name,
                                              const std::string& contents,
                                              std::string* path_out = nullptr) {
    auto r = ws.write_file(name, contents);
    if (!r.ok()) {
        return ToolError{ToolErrorKind::ToolUnavailable,
                         "scratch workspace: " + r.error().message};
    }
    if (path_out != nullptr) *path_out = r.value();
    return std::nullopt;
}

} // namespace

std::optional<std::string> scan_failure_markers(const std::string& output,
                                                const std::vector<std::string>& markers) {
    std::istringstream in(output);
    std::string line;
    while (std::getline(in, line)) {
        for (const auto& m : markers) {
            if (!m.empty() && line.find(m) != std::string::npos) return line;
        }
    }
    return std::nullopt;
}

Expected<PpaMetrics, ReportParseError> parse_ppa_report(const std::string& text,
                                                        const ExternalToolConfig& cfg) {
    PpaMetrics m{};
    struct Want {
        const std::string& key;
        double* slot;
    } wants[] = {{cfg.delay_key, &m.delay_ns}, {cfg.area_key, &m.area_um2},
                 {cfg.power_key, &m.power_w}};
    for (auto& w : wants) {
        auto v = find_metric(text, w.key);
        if (!v) return ReportParseError{"no parsable value for '" + w.key + "' in report"};
        *w.slot = *v;
    }
    if (!m.all_positive()) {
        return ReportParseError{"report metrics must be strictly positive (delay_ns=" +
                                std::to_string(m.delay_ns) + ", area_um2=" +
                                std::to_string(m.area_um2) + ", power_w=" +
                                std::to_string(m.power_w) + ")"};
    }
    return m;
}

Expected<StageOutcome, ToolError> ExternalBackend::check_compile(const std::string& code,
                                                                 const Workspace& ws,
                                                                 double timeout_s) const {
    if (auto err = write_or_unavailable(ws, "design.v", code)) return *err;
    ToolRun r = run_tool({cfg_.iverilog, "-o", "design.out", "design.v"}, ws, timeout_s,
                         "compile");
    if (r.unavailable) return *r.unavailable;
    return StageOutcome{r.ok, r.log.empty() ? "compile ok" : r.log};
}

Expected<StageOutcome, ToolError> ExternalBackend::run_testbench(const std::string& code,
                                                                 const Testbench& tb,
                                                                 const Workspace& ws,
                                                                 double timeout_s) const {
    std::string tb_source;
    if (tb.kind == Testbench::Kind::VectorTable) {
        auto table = verilog::parse_vector_table(tb.body);
        if (!table.ok()) {
            return StageOutcome{false, "vector table rejected: " + table.error().str()};
        }
        auto dut = first_module_name(code);
        if (!dut) {
            return StageOutcome{false, "no module declaration found in design under test"};
        }
        tb_source = verilog::to_verilog_testbench(table.value(), *dut);
    } else {
        tb_source = tb.body;
    }

    if (auto err = write_or_unavailable(ws, "design.v", code)) return *err;
    if (auto err = write_or_unavailable(ws, "tb.v", tb_source)) return *err;
    ToolRun build = run_tool({cfg_.iverilog, "-o", "sim.out", "design.v", "tb.v"}, ws, timeout_s,
                             "testbench compile");
    if (build.unavailable) return *build.unavailable;
    if (!build.ok) return StageOutcome{false, build.log};

    ToolRun sim = run_tool({cfg_.vvp, "sim.out"}, ws, timeout_s, "simulation");
    if (sim.unavailable) return *sim.unavailable;
    std::string log = build.log.empty() ? sim.log : build.log + "\n" + sim.log;
    if (!sim.ok) return StageOutcome{false, log};
    if (auto hit = scan_failure_markers(sim.log, cfg_.failure_markers)) {
        return StageOutcome{false, log + "\nfailure marker matched: " + *hit};
    }
    return StageOutcome{true, log};
}

Expected<SynOutcome, ToolError> ExternalBackend::synthesize_and_ppa(const std::string& code,
                                                                    const Workspace& ws,
                                                                    double timeout_s) const {
    if (cfg_.physical_flow.empty()) {
        return ToolError{ToolErrorKind::ToolUnavailable,
                         "no physical flow command configured for PPA measurement"};
    }
    std::string design;
    if (auto err = write_or_unavailable(ws, "design.v", code, &design)) return *err;
    if (auto err = write_or_unavailable(ws, "synth.ys", "read_verilog design.v\nsynth\nstat\n")) {
        return *err;
    }
    ToolRun syn = run_tool({cfg_.yosys, "-q", "-s", "synth.ys"}, ws, timeout_s, "synthesis");
    if (syn.unavailable) return *syn.unavailable;
    if (!syn.ok) return SynOutcome{false, std::nullopt, syn.log};

    std::vector<std::string> argv;
    argv.reserve(cfg_.physical_flow.size());
    for (const auto& a : cfg_.physical_flow) argv.push_back(substitute(a, design, ws.path()));
    ToolRun flow = run_tool(argv, ws, timeout_s, "physical flow");
    if (flow.unavailable) return *flow.unavailable;
    std::string log = syn.log.empty() ? flow.log : syn.log + "\n" + flow.log;
    if (!flow.ok) return SynOutcome{false, std::nullopt, log};

    auto metrics = parse_ppa_report(flow.log, cfg_);
    if (!metrics.ok()) {
        return SynOutcome{false, std::nullopt, log + "\nreport parse: " + metrics.error().message};
    }
    return SynOutcome{true, metrics.value(), log};
}

} // namespace chipforge
