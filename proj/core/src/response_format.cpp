// SPDX-License-Identifier: Apache-2.0
#include "chipforge/response_format.hpp"

#include <array>
#include <cctype>

namespace chipforge {

namespace {

constexpr const char* kThinkOpen = "<think>";
constexpr const char* kThinkClose = "</think>";
constexpr const char* kAnswerOpen = "<answer>";
constexpr const char* kAnswerClose = "</answer>";

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
        ++n;
    return n;
}

bool horizontal_ws(char c) { return c == ' ' || c == '\t' || c == '\r'; }

bool all_whitespace(const std::string& text, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
        if (!std::isspace((unsigned char)text[i])) return false;
    return true;
}

// The tag at [pos, pos+len) sits on a line of its own. In strict mode the
// line is exactly the tag (a trailing \r is tolerated before \n).
bool on_own_line(const std::string& text, std::size_t pos, std::size_t len, bool strict) {
    std::size_t i = pos;
    while (i > 0 && text[i - 1] != '\n') {
        if (strict || !horizontal_ws(text[i - 1])) return false;
        --i;
    }
    std::size_t j = pos + len;
    while (j < text.size() && text[j] != '\n') {
        if (text[j] == '\r' && j + 1 == text.size()) return true;
        if (text[j] == '\r' && text[j + 1] == '\n') return true;
        if (strict || !horizontal_ws(text[j])) return false;
        ++j;
    }
    return true;
}

// Content between an opening tag's line and a closing tag's line: skip the
// opening tag's line terminator, stop before the newline that precedes the
// closing tag.
std::string block_content(const std::string& text, std::size_t open_pos, std::size_t open_len,
                          std::size_t close_pos) {
    std::size_t begin = open_pos + open_len;
    while (begin < text.size() && text[begin] != '\n') ++begin; // rest of the tag line
    if (begin < text.size()) ++begin;                           // the newline itself
    std::size_t end = close_pos;
    while (end > begin && text[end - 1] != '\n') --end; // back to the closing tag's line start
    if (end > begin) --end;                             // the newline before the closing line
    if (end > begin && text[end - 1] == '\r') --end;
    return text.substr(begin, end - begin);
}

std::optional<std::string> find_block(const std::string& text, const char* open,
                                      const char* close) {
    const std::size_t p1 = text.find(open);
    if (p1 == std::string::npos) return std::nullopt;
    const std::size_t p2 = text.find(close, p1 + std::string(open).size());
    if (p2 == std::string::npos) return std::nullopt;
    return block_content(text, p1, std::string(open).size(), p2);
}

bool word_boundary_before(const std::string& text, std::size_t pos) {
    if (pos == 0) return true;
    const char c = text[pos - 1];
    return !(std::isalnum((unsigned char)c) || c == '_' || c == '$');
}

bool word_boundary_after(const std::string& text, std::size_t end) {
    if (end >= text.size()) return true;
    const char c = text[end];
    return !(std::isalnum((unsigned char)c) || c == '_' || c == '$');
}

std::size_t find_word(const std::string& text, const std::string& word, std::size_t from) {
    for (std::size_t pos = text.find(word, from); pos != std::string::npos;
         pos = text.find(word, pos + 1)) {
        if (word_boundary_before(text, pos) && word_boundary_after(text, pos + word.size()))
            return pos;
    }
    return std::string::npos;
}

std::optional<std::string> find_fenced_block(const std::string& text) {
    std::size_t fence = text.find("```");
    while (fence != std::string::npos) {
        std::size_t body = text.find('\n', fence);
        if (body == std::string::npos) return std::nullopt;
        ++body;
        // Closing fence: a line whose first non-blank characters are ```.
        std::size_t scan = body;
        while (scan <= text.size()) {
            std::size_t line_end = text.find('\n', scan);
            if (line_end == std::string::npos) line_end = text.size();
            std::size_t k = scan;
            while (k < line_end && horizontal_ws(text[k])) ++k;
            if (text.compare(k, 3, "```") == 0) {
                std::string content = text.substr(body, scan - body);
                while (!content.empty() && (content.back() == '\n' || content.back() == '\r'))
                    content.pop_back();
                return content;
            }
            if (line_end == text.size()) break;
            scan = line_end + 1;
        }
        fence = text.find("```", fence + 3);
    }
    return std::nullopt;
}

std::optional<std::string> find_module_span(const std::string& text) {
    const std::size_t start = find_word(text, "module", 0);
    if (start == std::string::npos) return std::nullopt;
    const std::size_t end = find_word(text, "endmodule", start);
    if (end == std::string::npos) return std::nullopt;
    return text.substr(start, end + std::string("endmodule").size() - start);
}

std::optional<std::string> search_code(const std::string& text) {
    if (auto fenced = find_fenced_block(text)) return fenced;
    return find_module_span(text);
}

} // namespace

ParsedResponse parse_response(const std::string& raw, const FormatOptions& opts) {
    ParsedResponse out;
    out.raw_text = raw;
    out.think_text = find_block(raw, kThinkOpen, kThinkClose);
    out.answer_text = find_block(raw, kAnswerOpen, kAnswerClose);

    const std::array<const char*, 4> tags = {kThinkOpen, kThinkClose, kAnswerOpen, kAnswerClose};
    bool ok = true;
    for (const char* tag : tags) ok = ok && count_occurrences(raw, tag) == 1;

    std::array<std::size_t, 4> pos{};
    if (ok) {
        for (std::size_t i = 0; i < tags.size(); ++i) pos[i] = raw.find(tags[i]);
        ok = pos[0] < pos[1] && pos[1] < pos[2] && pos[2] < pos[3];
    }
    if (ok) {
        for (std::size_t i = 0; i < tags.size(); ++i)
            ok = ok && on_own_line(raw, pos[i], std::string(tags[i]).size(), opts.strict_newline);
    }
    if (ok) {
        if (!opts.allow_preamble) ok = all_whitespace(raw, 0, pos[0]);
        const std::size_t think_close_end = pos[1] + std::string(kThinkClose).size();
        ok = ok && all_whitespace(raw, think_close_end, pos[2]);
        const std::size_t answer_close_end = pos[3] + std::string(kAnswerClose).size();
        ok = ok && all_whitespace(raw, answer_close_end, raw.size());
    }
    if (ok)
        ok = out.think_text && !out.think_text->empty() && out.answer_text &&
             !out.answer_text->empty();

    out.format_ok = ok;
    out.code = extract_verilog(out, opts);
    return out;
}

std::optional<std::string> extract_verilog(const ParsedResponse& parsed,
                                           const FormatOptions& opts) {
    if (parsed.answer_text) {
        if (auto code = search_code(*parsed.answer_text)) return code;
    }
    if (!parsed.format_ok && opts.lenient_extraction) return search_code(parsed.raw_text);
    return std::nullopt;
}

std::string render_response(const std::string& think, const std::string& answer) {
    return std::string(kThinkOpen) + "\n" + think + "\n" + kThinkClose + "\n" + kAnswerOpen +
           "\n" + answer + "\n" + kAnswerClose;
}

} // namespace chipforge
