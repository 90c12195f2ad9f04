// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chipforge/expected.hpp"
#include "chipforge/ppa_metrics.hpp"
#include "chipforge/toolchain/backend.hpp"

namespace chipforge {

/// One dataset record at any pipeline stage. Stages fill fields as they
/// go: ingest sets id/instruction/code, cold start adds reasoning,
/// testbench pairing adds the testbench, PPA annotation adds ppa_ref.
struct DataRecord {
    std::string id;
    std::string instruction;
    std::string code;
    std::string reasoning;
    std::optional<Testbench> testbench;
    std::optional<PpaMetrics> ppa_ref;
    /// Present on testbench-carrying records: generated testbenches cannot
    /// prove functional correctness, only sample it.
    std::string validation_level;
};

struct Rejection {
    std::string id;
    std::string reason;
};

struct RecordParseError {
    std::size_t line = 0;
    std::string message;

    std::string str() const { return "line " + std::to_string(line) + ": " + message; }
};

/// One JSON object per record, flat dotted keys, sorted; absent optional
/// fields are omitted entirely.
std::string record_to_json(const DataRecord& r);
Expected<DataRecord, RecordParseError> record_from_json(const std::string& text,
                                                        std::size_t line = 0);

std::string render_records(const std::vector<DataRecord>& records);
Expected<std::vector<DataRecord>, RecordParseError> parse_records(const std::string& text);

std::string render_rejections(const std::vector<Rejection>& rejections);

/// FNV-1a 64-bit over the text, as 16 hex digits; stable content ids.
std::string content_hash_id(const std::string& text);

/// Comment-stripped, whitespace-collapsed code text; the dedup key.
std::string normalize_code(const std::string& code);

/// Name of the first module declaration, by lexical scan with comments
/// stripped. Works on any Verilog text, not just the combinational subset.
std::optional<std::string> first_module_name(const std::string& code);

} // namespace chipforge
