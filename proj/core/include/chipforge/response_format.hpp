// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

namespace chipforge {

struct FormatOptions {
    /// Require the exact template layout: each tag alone on its line with
    /// no surrounding horizontal whitespace. Off by default because
    /// generators vary in emitted whitespace.
    bool strict_newline = false;

    /// Accept non-whitespace text before the <think> block.
    bool allow_preamble = false;

    /// When the format check fails, let extract_verilog fall back to
    /// searching the raw response text.
    bool lenient_extraction = false;
};

struct ParsedResponse {
    std::string raw_text;
    std::optional<std::string> think_text;
    std::optional<std::string> answer_text;
    std::optional<std::string> code;
    bool format_ok = false;
};

/// Total and deterministic: any input yields a ParsedResponse, never an
/// error. format_ok is true iff the text is exactly one <think> block
/// followed by one <answer> block, every tag on its own line, both blocks
/// non-empty, and nothing but whitespace outside them.
ParsedResponse parse_response(const std::string& raw, const FormatOptions& opts = {});

/// First fenced code block inside the answer, else the first
/// module...endmodule span, else nothing. With opts.lenient_extraction and
/// format_ok = false the same search runs over the raw text.
std::optional<std::string> extract_verilog(const ParsedResponse& parsed,
                                           const FormatOptions& opts = {});

inline double format_reward(const ParsedResponse& parsed) { return parsed.format_ok ? 1.0 : 0.0; }

/// Render (think, answer) into the response template. Re-parsing the
/// result recovers both texts exactly as long as they contain no tag
/// substrings.
std::string render_response(const std::string& think, const std::string& answer);

} // namespace chipforge
