// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>

#include "chipforge/expected.hpp"

namespace chipforge {

enum class GeneratorErrorKind { Unavailable };

struct GeneratorError {
    GeneratorErrorKind kind = GeneratorErrorKind::Unavailable;
    std::string message;
};

/// Pluggable prompt-to-text oracle feeding the dataset pipeline. The stub
/// keeps desk-scale runs deterministic and offline; the HTTP client talks
/// to a hosted model.
class TextGenerator {
public:
    virtual ~TextGenerator() = default;
    virtual std::string name() const = 0;
    virtual Expected<std::string, GeneratorError> generate(const std::string& prompt) = 0;
};

/// Prompt protocol between the pipeline and generators. A generator only
/// needs to recognize the first line to know what is being asked.
inline constexpr const char* kReasoningPromptHeader = "write-reasoning";
inline constexpr const char* kTestbenchPromptHeader = "write-testbench";
inline constexpr const char* kRetryPromptSuffix =
    "\nretry: the previous output failed the response format check";

std::string make_reasoning_prompt(const std::string& instruction, const std::string& code);
std::string make_testbench_prompt(const std::string& code);

/// Exact prompt lookup with optional fallback text; unit-test workhorse.
class MapGenerator : public TextGenerator {
public:
    MapGenerator() = default;
    explicit MapGenerator(std::map<std::string, std::string> responses,
                          std::string fallback = "")
        : responses_(std::move(responses)), fallback_(std::move(fallback)) {}

    std::string name() const override { return "map"; }
    Expected<std::string, GeneratorError> generate(const std::string& prompt) override;

    void set(std::string prompt, std::string response) {
        responses_[std::move(prompt)] = std::move(response);
    }

private:
    std::map<std::string, std::string> responses_;
    std::string fallback_;
};

/// Deterministic scripted generator: reasoning chains templated from the
/// instruction, and vector-table testbenches produced by evaluating the
/// design's own expression semantics on hash-seeded stimuli.
class StubGenerator : public TextGenerator {
public:
    std::string name() const override { return "stub"; }
    Expected<std::string, GeneratorError> generate(const std::string& prompt) override;
};

struct HttpGeneratorConfig {
    std::string endpoint;                     // http://host:port/path
    std::string credential_env = "CHIPFORGE_GENERATOR_TOKEN";
    int max_attempts = 3;
    double backoff_base_s = 0.25;             // doubles per retry
    double call_timeout_s = 30.0;
};

/// Hosted-model client: POSTs {"prompt": ...} and expects {"text": ...} or
/// a raw text body back. Bounded retries with exponential backoff; any
/// terminal failure is GeneratorError{Unavailable}.
class HttpGenerator : public TextGenerator {
public:
    explicit HttpGenerator(HttpGeneratorConfig cfg) : cfg_(std::move(cfg)) {}

    std::string name() const override { return "http"; }
    Expected<std::string, GeneratorError> generate(const std::string& prompt) override;

private:
    HttpGeneratorConfig cfg_;
};

} // namespace chipforge
