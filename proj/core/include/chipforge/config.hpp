// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "chipforge/dataset/generator.hpp"
#include "chipforge/expected.hpp"
#include "chipforge/grpo.hpp"
#include "chipforge/reward.hpp"
#include "chipforge/toolchain/external_backend.hpp"
#include "chipforge/verilog/elaborate.hpp"

namespace chipforge {

/// Everything a run needs, file-pinned for reproducibility. Loaded from a
/// key=value text file, then overridden by CHIPFORGE_* environment
/// variables, then validated against each module's constraints.
struct AppConfig {
    RewardWeights weights{};
    GatingMode gating = GatingMode::ProseStrict;
    std::optional<double> ppa_cap;

    GrpoConfig grpo{};

    std::string backend = "mock";
    ExternalToolConfig tools{};
    StageTimeouts timeouts{};
    std::size_t max_gates = verilog::ElaborateOptions{}.max_gates;
    int jobs = 0; // 0 selects the hardware default
    std::string workspace_root;

    std::string generator = "stub";
    HttpGeneratorConfig http_generator{};

    std::uint64_t seed = 0;
};

struct ConfigError {
    std::string message;
};

/// CHIPFORGE_ env name for a config key: dots and dashes become
/// underscores, letters upper-case ("reward.w_ppa" -> CHIPFORGE_REWARD_W_PPA).
std::string config_env_name(const std::string& key);

/// Parse key=value text ('#' comments, blank lines ignored). Unknown keys
/// and malformed values are errors; no environment is consulted.
Expected<AppConfig, ConfigError> parse_config(const std::string& text);

/// Full load path: optional file, then environment overrides, then
/// validation.
Expected<AppConfig, ConfigError> load_config(const std::optional<std::string>& path);

/// Apply CHIPFORGE_* overrides to an already-parsed config.
Expected<AppConfig, ConfigError> apply_env_overrides(AppConfig cfg);

std::optional<ConfigError> validate_config(const AppConfig& cfg);

} // namespace chipforge
