// SPDX-License-Identifier: Apache-2.0
#include "chipforge/dataset/records.hpp"

#include <cctype>
#include <cstdint>
#include <sstream>

#include <nlohmann/json.hpp>

namespace chipforge {

std::string content_hash_id(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = hex[h & 0xF];
        h >>= 4;
    }
    return out;
}

std::string normalize_code(const std::string& code) {
    std::string out;
    out.reserve(code.size());
    bool in_space = true;
    for (std::size_t i = 0; i < code.size();) {
        if (code.compare(i, 2, "//") == 0) {
            while (i < code.size() && code[i] != '\n') ++i;
        } else if (code.compare(i, 2, "/*") == 0) {
            i += 2;
            while (i + 1 < code.size() && code.compare(i, 2, "*/") != 0) ++i;
            i = (i + 1 < code.size()) ? i + 2 : code.size();
            // A comment separates tokens just like whitespace.
            if (!in_space) out.push_back(' ');
            in_space = true;
        } else if (std::isspace(static_cast<unsigned char>(code[i]))) {
            if (!in_space) out.push_back(' ');
            in_space = true;
            ++i;
        } else {
            out.push_back(code[i]);
            in_space = false;
            ++i;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::optional<std::string> first_module_name(const std::string& code) {
    std::string text = normalize_code(code);
    auto is_ident = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
    };
    std::size_t pos = 0;
    while ((pos = text.find("module", pos)) != std::string::npos) {
        bool left_ok = pos == 0 || !is_ident(text[pos - 1]);
        std::size_t after = pos + 6;
        bool right_ok = after >= text.size() || !is_ident(text[after]);
        if (!left_ok || !right_ok) {
            pos = after;
            continue;
        }
        std::size_t i = after;
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < text.size() && is_ident(text[i])) ++i;
        if (i > start) return text.substr(start, i - start);
        pos = after;
    }
    return std::nullopt;
}

std::string record_to_json(const DataRecord& r) {
    nlohmann::json j;
    j["id"] = r.id;
    j["instruction"] = r.instruction;
    if (!r.code.empty()) j["code"] = r.code;
    if (!r.reasoning.empty()) j["reasoning"] = r.reasoning;
    if (r.testbench.has_value()) {
        j["testbench_kind"] = testbench_kind_name(r.testbench->kind);
        j["testbench"] = r.testbench->body;
    }
    if (r.ppa_ref.has_value()) {
        j["ppa_ref.delay_ns"] = r.ppa_ref->delay_ns;
        j["ppa_ref.area_um2"] = r.ppa_ref->area_um2;
        j["ppa_ref.power_w"] = r.ppa_ref->power_w;
    }
    if (!r.validation_level.empty()) j["validation_level"] = r.validation_level;
    return j.dump();
}

Expected<DataRecord, RecordParseError> record_from_json(const std::string& text,
                                                        std::size_t line) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        return RecordParseError{line, "not a JSON object"};
    }
    DataRecord r;
    auto take_string = [&](const char* key, std::string& slot) -> bool {
        auto it = j.find(key);
        if (it == j.end()) return true;
        if (!it->is_string()) return false;
        slot = it->get<std::string>();
        return true;
    };
    if (!take_string("id", r.id) || !take_string("instruction", r.instruction) ||
        !take_string("code", r.code) || !take_string("reasoning", r.reasoning) ||
        !take_string("validation_level", r.validation_level)) {
        return RecordParseError{line, "record text fields must be strings"};
    }
    if (j.contains("testbench") || j.contains("testbench_kind")) {
        std::string kind_name;
        std::string body;
        if (!take_string("testbench_kind", kind_name) || !take_string("testbench", body) ||
            kind_name.empty()) {
            return RecordParseError{line, "testbench requires testbench_kind and testbench"};
        }
        auto kind = parse_testbench_kind(kind_name);
        if (!kind.has_value()) {
            return RecordParseError{line, "unknown testbench_kind '" + kind_name + "'"};
        }
        r.testbench = Testbench{*kind, body};
    }
    const char* ppa_keys[] = {"ppa_ref.delay_ns", "ppa_ref.area_um2", "ppa_ref.power_w"};
    bool any_ppa = false;
    bool all_ppa = true;
    for (const char* k : ppa_keys) {
        if (j.contains(k)) {
            any_ppa = true;
            if (!j[k].is_number()) return RecordParseError{line, std::string(k) + " must be a number"};
        } else {
            all_ppa = false;
        }
    }
    if (any_ppa) {
        if (!all_ppa) {
            return RecordParseError{line, "ppa_ref requires delay_ns, area_um2, and power_w"};
        }
        r.ppa_ref = PpaMetrics{j["ppa_ref.delay_ns"].get<double>(),
                               j["ppa_ref.area_um2"].get<double>(),
                               j["ppa_ref.power_w"].get<double>()};
    }
    return r;
}

std::string render_records(const std::vector<DataRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        out += record_to_json(r);
        out += "\n";
    }
    return out;
}

Expected<std::vector<DataRecord>, RecordParseError> parse_records(const std::string& text) {
    std::vector<DataRecord> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        bool blank = true;
        for (char c : line) {
            if (!std::isspace(static_cast<unsigned char>(c))) {
                blank = false;
                break;
            }
        }
        if (blank) continue;
        auto rec = record_from_json(line, lineno);
        if (!rec.ok()) return rec.error();
        out.push_back(std::move(rec.value()));
    }
    return out;
}

std::string render_rejections(const std::vector<Rejection>& rejections) {
    std::string out;
    for (const auto& rej : rejections) {
        nlohmann::json j;
        j["id"] = rej.id;
        j["reason"] = rej.reason;
        out += j.dump();
        out += "\n";
    }
    return out;
}

} // namespace chipforge
