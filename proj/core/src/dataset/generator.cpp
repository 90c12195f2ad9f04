// SPDX-License-Identifier: Apache-2.0
#include "chipforge/dataset/generator.hpp"

#include <chrono>
#include <cstdlib>
#include <random>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "chipforge/dataset/records.hpp"
#include "chipforge/verilog/eval.hpp"
#include "chipforge/verilog/parser.hpp"
#include "chipforge/verilog/vector_table.hpp"

namespace chipforge {

namespace {

bool starts_with(const std::string& s, const std::string& prefix) {
    return s.size() >= prefix.size() && s.compare(0, prefix.size(), prefix) == 0;
}

std::string strip_retry_suffix(std::string prompt) {
    const std::string suffix = kRetryPromptSuffix;
    if (prompt.size() >= suffix.size() &&
        prompt.compare(prompt.size() - suffix.size(), suffix.size(), suffix) == 0) {
        prompt.erase(prompt.size() - suffix.size());
    }
    return prompt;
}

std::string first_line(const std::string& s) {
    std::size_t nl = s.find('\n');
    return nl == std::string::npos ? s : s.substr(0, nl);
}

std::string stub_reasoning(const std::string& prompt) {
    std::string instruction;
    std::size_t at = prompt.find("instruction:\n");
    if (at != std::string::npos) {
        std::size_t start = at + 13;
        std::size_t stop = prompt.find("\ncode:\n", start);
        instruction = prompt.substr(start, stop == std::string::npos ? std::string::npos
                                                                     : stop - start);
    }
    std::string goal = first_line(instruction);
    if (goal.empty()) goal = "implement the requested module";
    return "First, restate the goal: " + goal +
           "\nNext, fix the interface: keep the declared ports and widths unchanged."
           "\nThen, implement the behavior with combinational assign statements only."
           "\nFinally, confirm every output is driven and all widths line up.";
}

std::string stub_testbench(const std::string& code) {
    auto parsed = verilog::parse_mini(code);
    if (!parsed.ok()) {
        return "# cannot build a vector table: " + parsed.error().str();
    }
    const verilog::MiniModule& m = parsed.value();

    verilog::VectorTable t;
    std::size_t total_in_bits = 0;
    for (const auto& p : m.ports) {
        if (p.is_input) {
            t.in_ports.push_back({p.name, p.width});
            total_in_bits += p.width;
        } else {
            t.out_ports.push_back({p.name, p.width});
        }
    }
    if (t.in_ports.empty() || t.out_ports.empty()) {
        return "# cannot build a vector table: need at least one input and one output port";
    }

    // Exhaustive stimulus when the input space is tiny, otherwise a fixed
    // number of hash-seeded draws; either way within the 3..20 case bound.
    std::vector<std::vector<BitVec>> stimuli;
    if (total_in_bits <= 4) {
        std::uint64_t combos = 1ull << total_in_bits;
        for (std::uint64_t v = 0; v < combos; ++v) {
            std::vector<BitVec> row;
            std::size_t off = 0;
            for (const auto& p : t.in_ports) {
                row.emplace_back(p.width, v >> off);
                off += p.width;
            }
            stimuli.push_back(std::move(row));
        }
        while (stimuli.size() < 3) stimuli.push_back(stimuli.front());
    } else {
        std::mt19937_64 rng(std::stoull(content_hash_id(code), nullptr, 16));
        for (int c = 0; c < 8; ++c) {
            std::vector<BitVec> row;
            for (const auto& p : t.in_ports) {
                BitVec v(p.width);
                for (std::size_t b = 0; b < p.width; b += 64) {
                    std::uint64_t bits = rng();
                    for (std::size_t k = 0; k < 64 && b + k < p.width; ++k) {
                        v.set_bit(b + k, (bits >> k) & 1);
                    }
                }
                row.push_back(std::move(v));
            }
            stimuli.push_back(std::move(row));
        }
    }

    for (const auto& in_row : stimuli) {
        std::unordered_map<std::string, BitVec> env;
        for (std::size_t i = 0; i < t.in_ports.size(); ++i) env[t.in_ports[i].name] = in_row[i];
        auto values = verilog::eval_module(m, env);
        if (!values.ok()) {
            return "# cannot build a vector table: " + values.error().message;
        }
        verilog::VtRow row;
        row.in_values = in_row;
        for (const auto& p : t.out_ports) row.out_values.push_back(values.value().at(p.name));
        t.rows.push_back(std::move(row));
    }
    return verilog::render_vector_table(t);
}

} // namespace

std::string make_reasoning_prompt(const std::string& instruction, const std::string& code) {
    return std::string(kReasoningPromptHeader) + "\ninstruction:\n" + instruction + "\ncode:\n" +
           code;
}

std::string make_testbench_prompt(const std::string& code) {
    return std::string(kTestbenchPromptHeader) + "\n" + code;
}

Expected<std::string, GeneratorError> MapGenerator::generate(const std::string& prompt) {
    auto it = responses_.find(prompt);
    if (it != responses_.end()) return it->second;
    if (!fallback_.empty()) return fallback_;
    return GeneratorError{GeneratorErrorKind::Unavailable,
                          "no scripted response for prompt '" + first_line(prompt) + "'"};
}

Expected<std::string, GeneratorError> StubGenerator::generate(const std::string& prompt) {
    std::string base = strip_retry_suffix(prompt);
    if (starts_with(base, kReasoningPromptHeader)) return stub_reasoning(base);
    if (starts_with(base, kTestbenchPromptHeader)) {
        std::size_t nl = base.find('\n');
        return stub_testbench(nl == std::string::npos ? std::string() : base.substr(nl + 1));
    }
    return GeneratorError{GeneratorErrorKind::Unavailable,
                          "stub does not understand prompt '" + first_line(base) + "'"};
}

Expected<std::string, GeneratorError> HttpGenerator::generate(const std::string& prompt) {
    std::size_t scheme = cfg_.endpoint.find("://");
    if (scheme == std::string::npos) {
        return GeneratorError{GeneratorErrorKind::Unavailable,
                              "endpoint '" + cfg_.endpoint + "' is not a URL"};
    }
    std::size_t path_at = cfg_.endpoint.find('/', scheme + 3);
    std::string base = path_at == std::string::npos ? cfg_.endpoint
                                                    : cfg_.endpoint.substr(0, path_at);
    std::string path = path_at == std::string::npos ? "/" : cfg_.endpoint.substr(path_at);

    nlohmann::json body;
    body["prompt"] = prompt;
    std::string payload = body.dump();

    std::string token;
    if (!cfg_.credential_env.empty()) {
        if (const char* env = std::getenv(cfg_.credential_env.c_str())) token = env;
    }

    std::string last_error = "no attempts made";
    for (int attempt = 0; attempt < cfg_.max_attempts; ++attempt) {
        if (attempt > 0) {
            double delay = cfg_.backoff_base_s * static_cast<double>(1 << (attempt - 1));
            std::this_thread::sleep_for(std::chrono::duration<double>(delay));
        }
        httplib::Client client(base);
        auto secs = static_cast<time_t>(cfg_.call_timeout_s);
        auto usecs = static_cast<time_t>((cfg_.call_timeout_s - static_cast<double>(secs)) * 1e6);
        client.set_connection_timeout(secs, usecs);
        client.set_read_timeout(secs, usecs);
        client.set_write_timeout(secs, usecs);
        httplib::Headers headers;
        if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);

        auto res = client.Post(path, headers, payload, "application/json");
        if (!res) {
            last_error = "connection failed: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            last_error = "endpoint returned status " + std::to_string(res->status);
            continue;
        }
        nlohmann::json parsed = nlohmann::json::parse(res->body, nullptr, false);
        if (parsed.is_object() && parsed.contains("text") && parsed["text"].is_string()) {
            return parsed["text"].get<std::string>();
        }
        return res->body;
    }
    return GeneratorError{GeneratorErrorKind::Unavailable,
                          "generator endpoint unavailable after " +
                              std::to_string(cfg_.max_attempts) + " attempts: " + last_error};
}

} // namespace chipforge
