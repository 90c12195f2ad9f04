// SPDX-License-Identifier: Apache-2.0
#include "chipforge/dataset/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include "chipforge/response_format.hpp"
#include "chipforge/verilog/vector_table.hpp"
#include "chipforge/worker_pool.hpp"

namespace chipforge {

namespace {

namespace fs = std::filesystem;

enum class ItemStatus { Skipped, Keep, Reject };

struct Item {
    ItemStatus status = ItemStatus::Skipped;
    DataRecord record;
    Rejection rejection;
};

/// Shared abort latch: the first tool/generator unavailability wins and
/// later work items are skipped instead of started.
class AbortLatch {
public:
    bool armed() const { return flag_.load(std::memory_order_relaxed); }
    void arm(const std::string& reason) {
        std::lock_guard<std::mutex> lock(mu_);
        if (!flag_.exchange(true)) reason_ = reason;
    }
    const std::string& reason() const { return reason_; }

private:
    std::atomic<bool> flag_{false};
    mutable std::mutex mu_;
    std::string reason_;
};

StageResult assemble(std::vector<Item>&& items, const AbortLatch& abort) {
    StageResult out;
    for (auto& item : items) {
        if (item.status == ItemStatus::Keep) {
            out.records.push_back(std::move(item.record));
        } else if (item.status == ItemStatus::Reject) {
            out.rejections.push_back(std::move(item.rejection));
        }
    }
    out.aborted = abort.armed();
    out.abort_reason = abort.reason();
    return out;
}

std::string first_line(const std::string& s) {
    std::size_t nl = s.find('\n');
    return nl == std::string::npos ? s : s.substr(0, nl);
}

std::optional<std::string> read_file(const fs::path& p, std::string& error) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        error = "cannot open file";
        return std::nullopt;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        error = "read error";
        return std::nullopt;
    }
    return buf.str();
}

} // namespace

StageResult DatasetPipeline::ingest_corpus(const std::vector<std::string>& sources) const {
    StageResult out;

    std::vector<fs::path> files;
    for (const auto& src : sources) {
        std::error_code ec;
        fs::path p(src);
        if (fs::is_directory(p, ec)) {
            std::vector<fs::path> found;
            for (auto it = fs::recursive_directory_iterator(p, ec);
                 !ec && it != fs::recursive_directory_iterator(); it.increment(ec)) {
                if (it->is_regular_file(ec) && it->path().extension() == ".v") {
                    found.push_back(it->path());
                }
            }
            if (ec) {
                out.rejections.push_back({src, "cannot read directory: " + ec.message()});
                continue;
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else if (fs::is_regular_file(p, ec)) {
            files.push_back(p);
        } else {
            out.rejections.push_back({src, "not a readable file or directory"});
        }
    }

    struct Loaded {
        fs::path path;
        std::string code;
        std::string instruction;
    };
    std::vector<Loaded> loaded;
    for (const auto& f : files) {
        std::string err;
        auto code = read_file(f, err);
        if (!code) {
            out.rejections.push_back({f.string(), err});
            continue;
        }
        std::string instruction;
        fs::path sidecar = f;
        sidecar.replace_extension(".txt");
        std::error_code ec;
        if (fs::is_regular_file(sidecar, ec)) {
            std::string side_err;
            if (auto text = read_file(sidecar, side_err)) {
                instruction = *text;
                while (!instruction.empty() &&
                       (instruction.back() == '\n' || instruction.back() == '\r')) {
                    instruction.pop_back();
                }
            }
        }
        if (instruction.empty()) {
            std::string name = first_module_name(*code).value_or(f.stem().string());
            instruction =
                "Implement the Verilog module '" + name + "' with the documented interface.";
        }
        loaded.push_back({f, std::move(*code), std::move(instruction)});
    }

    std::vector<Item> items(loaded.size());
    AbortLatch abort;
    parallel_for_indexed(loaded.size(), jobs_, [&](std::size_t i) {
        if (abort.armed()) return;
        EvalRequest req;
        req.code = loaded[i].code;
        req.timeouts = timeouts_;
        auto rep = chain_.evaluate(req);
        if (!rep.ok()) {
            abort.arm(rep.error().message);
            return;
        }
        if (!rep.value().compile_ok) {
            items[i].status = ItemStatus::Reject;
            items[i].rejection = {loaded[i].path.string(),
                                  "compile check failed: " + first_line(rep.value().compile_log)};
            return;
        }
        DataRecord r;
        r.code = loaded[i].code;
        r.instruction = loaded[i].instruction;
        r.id = content_hash_id(normalize_code(loaded[i].code));
        items[i].record = std::move(r);
        items[i].status = ItemStatus::Keep;
    });

    StageResult compiled = assemble(std::move(items), abort);
    out.aborted = compiled.aborted;
    out.abort_reason = compiled.abort_reason;
    for (auto& rej : compiled.rejections) out.rejections.push_back(std::move(rej));

    std::vector<std::pair<std::string, std::size_t>> seen; // normalized code -> kept index
    for (auto& rec : compiled.records) {
        std::string norm = normalize_code(rec.code);
        auto dup = std::find_if(seen.begin(), seen.end(),
                                [&](const auto& s) { return s.first == norm; });
        if (dup != seen.end()) {
            out.rejections.push_back(
                {rec.id, "duplicate of record " + out.records[dup->second].id});
            continue;
        }
        seen.emplace_back(std::move(norm), out.records.size());
        out.records.push_back(std::move(rec));
    }
    return out;
}

StageResult DatasetPipeline::generate_cold_start(const std::vector<DataRecord>& base,
                                                 TextGenerator& gen) const {
    std::vector<Item> items(base.size());
    AbortLatch abort;
    parallel_for_indexed(base.size(), jobs_, [&](std::size_t i) {
        if (abort.armed()) return;
        const DataRecord& rec = base[i];
        std::string prompt = make_reasoning_prompt(rec.instruction, rec.code);

        // One retry with a marked prompt before dropping the record.
        for (int attempt = 0; attempt < 2; ++attempt) {
            auto text = gen.generate(attempt == 0 ? prompt : prompt + kRetryPromptSuffix);
            if (!text.ok()) {
                abort.arm("generator unavailable: " + text.error().message);
                return;
            }
            std::string rendered =
                render_response(text.value(), "```verilog\n" + rec.code + "\n```");
            ParsedResponse parsed = parse_response(rendered);
            if (parsed.format_ok && !text.value().empty()) {
                items[i].record = rec;
                items[i].record.reasoning = text.value();
                items[i].status = ItemStatus::Keep;
                return;
            }
        }
        items[i].status = ItemStatus::Reject;
        items[i].rejection = {rec.id, "reasoning failed the response format check after retry"};
    });
    return assemble(std::move(items), abort);
}

StageResult DatasetPipeline::pair_testbenches(const std::vector<DataRecord>& records,
                                              TextGenerator& gen) const {
    std::vector<Item> items(records.size());
    AbortLatch abort;
    parallel_for_indexed(records.size(), jobs_, [&](std::size_t i) {
        if (abort.armed()) return;
        const DataRecord& rec = records[i];
        auto text = gen.generate(make_testbench_prompt(rec.code));
        if (!text.ok()) {
            abort.arm("generator unavailable: " + text.error().message);
            return;
        }
        auto table = verilog::parse_vector_table(text.value());
        if (!table.ok()) {
            items[i].status = ItemStatus::Reject;
            items[i].rejection = {rec.id,
                                  "generated testbench rejected: " + table.error().str()};
            return;
        }
        std::size_t cases = table.value().case_count();
        if (cases < 3 || cases > 20) {
            items[i].status = ItemStatus::Reject;
            items[i].rejection = {rec.id, "testbench case count " + std::to_string(cases) +
                                              " outside [3, 20]"};
            return;
        }
        EvalRequest req;
        req.code = rec.code;
        req.testbench = Testbench{Testbench::Kind::VectorTable, text.value()};
        req.timeouts = timeouts_;
        auto rep = chain_.evaluate(req);
        if (!rep.ok()) {
            abort.arm(rep.error().message);
            return;
        }
        if (!rep.value().func_ok) {
            const auto& r = rep.value();
            items[i].status = ItemStatus::Reject;
            items[i].rejection = {
                rec.id, "code fails its own generated testbench: " +
                            first_line(r.compile_ok ? r.func_log : r.compile_log)};
            return;
        }
        items[i].record = rec;
        items[i].record.testbench = std::move(*req.testbench);
        items[i].record.validation_level = "statistical";
        items[i].status = ItemStatus::Keep;
    });
    return assemble(std::move(items), abort);
}

StageResult DatasetPipeline::annotate_ppa(const std::vector<DataRecord>& records) const {
    std::vector<Item> items(records.size());
    AbortLatch abort;
    parallel_for_indexed(records.size(), jobs_, [&](std::size_t i) {
        if (abort.armed()) return;
        const DataRecord& rec = records[i];
        if (!rec.testbench.has_value()) {
            items[i].status = ItemStatus::Reject;
            items[i].rejection = {rec.id, "record carries no validated testbench"};
            return;
        }
        EvalRequest req;
        req.code = rec.code;
        req.testbench = rec.testbench;
        req.timeouts = timeouts_;
        auto rep = chain_.evaluate(req);
        if (!rep.ok()) {
            abort.arm(rep.error().message);
            return;
        }
        const ToolchainReport& r = rep.value();
        if (!r.syn_ok || !r.ppa.has_value() || !r.ppa->all_positive()) {
            std::string detail;
            if (!r.func_ok) {
                detail = "testbench re-validation failed";
            } else if (r.syn_log.find("TIMEOUT") != std::string::npos) {
                detail = "synthesis timeout";
            } else if (!r.syn_ok) {
                detail = first_line(r.syn_log);
            } else {
                detail = "non-positive metric";
            }
            items[i].status = ItemStatus::Reject;
            items[i].rejection = {
                rec.id, "incompatibility of synthesis and physical design: " + detail};
            return;
        }
        items[i].record = rec;
        items[i].record.ppa_ref = r.ppa;
        items[i].status = ItemStatus::Keep;
    });
    return assemble(std::move(items), abort);
}

} // namespace chipforge
