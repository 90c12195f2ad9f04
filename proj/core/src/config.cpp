// SPDX-License-Identifier: Apache-2.0
#include "chipforge/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

namespace chipforge {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::optional<double> to_double(const std::string& v) {
    try {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (used != v.size()) return std::nullopt;
        return d;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::optional<std::uint64_t> to_u64(const std::string& v) {
    if (v.empty() || v[0] == '-') return std::nullopt;
    try {
        std::size_t used = 0;
        std::uint64_t u = std::stoull(v, &used);
        if (used != v.size()) return std::nullopt;
        return u;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::optional<int> to_int(const std::string& v) {
    try {
        std::size_t used = 0;
        int i = std::stoi(v, &used);
        if (used != v.size()) return std::nullopt;
        return i;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::vector<std::string> split(const std::string& v, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(v);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

using Setter = std::function<std::optional<std::string>(AppConfig&, const std::string&)>;

struct Key {
    const char* name;
    Setter set;
};

std::optional<std::string> set_double(double& slot, const std::string& v) {
    auto d = to_double(v);
    if (!d) return "expected a number, got '" + v + "'";
    slot = *d;
    return std::nullopt;
}

std::optional<std::string> set_int(int& slot, const std::string& v) {
    auto i = to_int(v);
    if (!i) return "expected an integer, got '" + v + "'";
    slot = *i;
    return std::nullopt;
}

const std::vector<Key>& key_table() {
    static const std::vector<Key> keys = {
        {"reward.w_format", [](AppConfig& c, const std::string& v) { return set_double(c.weights.w_format, v); }},
        {"reward.w_comp", [](AppConfig& c, const std::string& v) { return set_double(c.weights.w_comp, v); }},
        {"reward.w_func", [](AppConfig& c, const std::string& v) { return set_double(c.weights.w_func, v); }},
        {"reward.w_syn", [](AppConfig& c, const std::string& v) { return set_double(c.weights.w_syn, v); }},
        {"reward.w_ppa", [](AppConfig& c, const std::string& v) { return set_double(c.weights.w_ppa, v); }},
        {"reward.gating_mode",
         [](AppConfig& c, const std::string& v) -> std::optional<std::string> {
             auto m = parse_gating_mode(v);
             if (!m) return "unknown gating mode '" + v + "'";
             c.gating = *m;
             return std::nullopt;
         }},
        {"reward.ppa_cap",
         [](AppConfig& c, const std::string& v) -> std::optional<std::string> {
             if (v == "none") {
                 c.ppa_cap.reset();
                 return std::nullopt;
             }
             auto d = to_double(v);
             if (!d) return "expected a number or 'none', got '" + v + "'";
             c.ppa_cap = *d;
             return std::nullopt;
         }},
        {"grpo.group_size", [](AppConfig& c, const std::string& v) { return set_int(c.grpo.group_size, v); }},
        {"grpo.epsilon", [](AppConfig& c, const std::string& v) { return set_double(c.grpo.epsilon, v); }},
        {"grpo.beta", [](AppConfig& c, const std::string& v) { return set_double(c.grpo.beta, v); }},
        {"grpo.learning_rate", [](AppConfig& c, const std::string& v) { return set_double(c.grpo.learning_rate, v); }},
        {"grpo.steps", [](AppConfig& c, const std::string& v) { return set_int(c.grpo.steps, v); }},
        {"grpo.inner_epochs", [](AppConfig& c, const std::string& v) { return set_int(c.grpo.inner_epochs, v); }},
        {"grpo.std_floor", [](AppConfig& c, const std::string& v) { return set_double(c.grpo.std_floor, v); }},
        {"grpo.max_grad_norm", [](AppConfig& c, const std::string& v) { return set_double(c.grpo.max_grad_norm, v); }},
        {"backend",
         [](AppConfig& c, const std::string& v) -> std::optional<std::string> {
             c.backend = v;
             return std::nullopt;
         }},
        {"tools.iverilog",
         [](AppConfig& c, const std::string& v) -> std::optional<std::string> {
             c.tools.iverilog = v;
             return std::nullopt;
         }},
        {"tools.vvp",
         [](AppConfig& c, const std::string& v) -> std::optional<std::string> {
             c.tools.vvp = v;
             return std::nullopt;
         }},
        {"tools.yosys",
         [](AppConfig& c, const std::string& v) -> std::optional<std::string> {
             c.tools.yosys = v;
             return std::nullopt;
         }},
        {"tools.physical_flow",
         [](AppConfig& c, const std::string& v) -> std::optional<std::string> {
             c.tools.physical_flow = split(v, ' ');
             return std::nullopt;
         }},
        {"tools.failure_markers",
         [](AppConfig& c, const std::string& v) -> std::optional<std::string> {
             c.tools.failure_markers = split(v, ',');
             return std::nullopt;
         }},
        {"tools.delay_key",
         [](AppConfig& c, const std::string& v) -> std::optional<std::string> {
             c.tools.delay_key = v;
             return std::nullopt;
         }},
        {"tools.area_key",
         [](AppConfig& c, const std::string& v) -> std::optional<std::string> {
             c.tools.area_key = v;
             return std::nullopt;
         }},
        {"tools.power_key",
         [](AppConfig& c, const std::string& v) -> std::optional<std::string> {
             c.tools.power_key = v;
             return std::nullopt;
         }},
        {"timeouts.compile_s", [](AppConfig& c, const std::string& v) { return set_double(c.timeouts.compile_s, v); }},
        {"timeouts.simulate_s", [](AppConfig& c, const std::string& v) { return set_double(c.timeouts.simulate_s, v); }},
        {"timeouts.synthesis_s", [](AppConfig& c, const std::string& v) { return set_double(c.timeouts.synthesis_s, v); }},
        {"elaborate.max_gates",
         [](AppConfig& c, const std::string& v) -> std::optional<std::string> {
             auto u = to_u64(v);
             if (!u) return "expected a non-negative integer, got '" + v + "'";
             c.max_gates = static_cast<std::size_t>(*u);
             return std::nullopt;
         }},
        {"jobs", [](AppConfig& c, const std::string& v) { return set_int(c.jobs, v); }},
        {"workspace_root",
         [](AppConfig& c, const std::string& v) -> std::optional<std::string> {
             c.workspace_root = v;
             return std::nullopt;
         }},
        {"generator",
         [](AppConfig& c, const std::string& v) -> std::optional<std::string> {
             c.generator = v;
             return std::nullopt;
         }},
        {"generator.endpoint",
         [](AppConfig& c, const std::string& v) -> std::optional<std::string> {
             c.http_generator.endpoint = v;
             return std::nullopt;
         }},
        {"generator.credential_env",
         [](AppConfig& c, const std::string& v) -> std::optional<std::string> {
             c.http_generator.credential_env = v;
             return std::nullopt;
         }},
        {"generator.max_attempts", [](AppConfig& c, const std::string& v) { return set_int(c.http_generator.max_attempts, v); }},
        {"generator.backoff_base_s", [](AppConfig& c, const std::string& v) { return set_double(c.http_generator.backoff_base_s, v); }},
        {"generator.call_timeout_s", [](AppConfig& c, const std::string& v) { return set_double(c.http_generator.call_timeout_s, v); }},
        {"seed",
         [](AppConfig& c, const std::string& v) -> std::optional<std::string> {
             auto u = to_u64(v);
             if (!u) return "expected a non-negative integer, got '" + v + "'";
             c.seed = *u;
             return std::nullopt;
         }},
    };
    return keys;
}

std::optional<std::string> apply_key(AppConfig& cfg, const std::string& key,
                                     const std::string& value) {
    for (const auto& k : key_table()) {
        if (key == k.name) return k.set(cfg, value);
    }
    return "unknown configuration key '" + key + "'";
}

} // namespace

std::string config_env_name(const std::string& key) {
    std::string out = "CHIPFORGE_";
    for (char c : key) {
        if (c == '.' || c == '-') {
            out.push_back('_');
        } else {
            out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        }
    }
    return out;
}

Expected<AppConfig, ConfigError> parse_config(const std::string& text) {
    AppConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            return ConfigError{"line " + std::to_string(lineno) + ": expected key=value"};
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (auto err = apply_key(cfg, key, value)) {
            return ConfigError{"line " + std::to_string(lineno) + ": " + key + ": " + *err};
        }
    }
    return cfg;
}

Expected<AppConfig, ConfigError> apply_env_overrides(AppConfig cfg) {
    for (const auto& k : key_table()) {
        std::string env = config_env_name(k.name);
        if (const char* v = std::getenv(env.c_str())) {
            if (auto err = k.set(cfg, v)) {
                return ConfigError{env + ": " + *err};
            }
        }
    }
    return cfg;
}

std::optional<ConfigError> validate_config(const AppConfig& cfg) {
    auto nonneg = [](double v) { return v >= 0.0 && std::isfinite(v); };
    if (!nonneg(cfg.weights.w_format) || !nonneg(cfg.weights.w_comp) ||
        !nonneg(cfg.weights.w_func) || !nonneg(cfg.weights.w_syn) || !nonneg(cfg.weights.w_ppa)) {
        return ConfigError{"reward weights must be finite and non-negative"};
    }
    if (cfg.ppa_cap.has_value() && !(*cfg.ppa_cap > 0.0)) {
        return ConfigError{"reward.ppa_cap must be positive"};
    }
    if (!cfg.grpo.valid()) {
        return ConfigError{
            "grpo configuration invalid (need group_size >= 2, epsilon in (0,1), beta >= 0, "
            "std_floor > 0, learning_rate > 0, steps >= 0, inner_epochs >= 1)"};
    }
    if (cfg.backend != "mock" && cfg.backend != "external") {
        return ConfigError{"backend must be 'mock' or 'external', got '" + cfg.backend + "'"};
    }
    if (!cfg.timeouts.valid()) {
        return ConfigError{"stage timeouts must be positive"};
    }
    if (cfg.max_gates == 0) {
        return ConfigError{"elaborate.max_gates must be at least 1"};
    }
    if (cfg.jobs < 0) {
        return ConfigError{"jobs must be non-negative (0 selects the hardware default)"};
    }
    if (cfg.generator != "stub" && cfg.generator != "http") {
        return ConfigError{"generator must be 'stub' or 'http', got '" + cfg.generator + "'"};
    }
    if (cfg.generator == "http" && cfg.http_generator.endpoint.empty()) {
        return ConfigError{"generator.endpoint is required for the http generator"};
    }
    if (cfg.http_generator.max_attempts < 1) {
        return ConfigError{"generator.max_attempts must be at least 1"};
    }
    return std::nullopt;
}

Expected<AppConfig, ConfigError> load_config(const std::optional<std::string>& path) {
    AppConfig cfg;
    if (path.has_value()) {
        std::ifstream in(*path, std::ios::binary);
        if (!in) return ConfigError{"cannot open config file '" + *path + "'"};
        std::ostringstream buf;
        buf << in.rdbuf();
        auto parsed = parse_config(buf.str());
        if (!parsed.ok()) return parsed.error();
        cfg = parsed.value();
    }
    auto with_env = apply_env_overrides(std::move(cfg));
    if (!with_env.ok()) return with_env.error();
    if (auto err = validate_config(with_env.value())) return *err;
    return with_env;
}

} // namespace chipforge
