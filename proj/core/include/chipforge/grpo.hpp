// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "chipforge/ppa_metrics.hpp"
#include "chipforge/toolchain/backend.hpp"

namespace chipforge {

/// One training question: a fixed pool of candidate response texts standing
/// in for the model's sample space.
struct Task {
    std::string id;
    std::string instruction;
    std::vector<std::string> candidate_pool;
    std::optional<Testbench> testbench;
    std::optional<PpaMetrics> reference_ppa;
};

/// Categorical policy: one logit vector per task, softmax-normalized.
struct PolicyParams {
    std::vector<std::vector<double>> logits;
};

struct Group {
    std::size_t task_index = 0;
    std::vector<std::size_t> outputs;
    std::vector<double> logp_old;
    std::vector<double> logp_ref;
    std::vector<double> logp_new;
    std::vector<double> rewards;
    std::vector<double> advantages;
};

struct GrpoConfig {
    int group_size = 10;
    double epsilon = 0.2;
    double beta = 0.01;
    double learning_rate = 0.1;
    int steps = 200;
    int inner_epochs = 1;
    double std_floor = 1e-8;
    std::uint64_t seed = 0;
    /// Global-norm gradient clip; keeps huge-beta anchoring runs stable.
    /// Non-positive disables clipping.
    double max_grad_norm = 1.0;
    int jobs = 1;

    bool valid() const {
        return group_size >= 2 && epsilon > 0.0 && epsilon < 1.0 && beta >= 0.0 &&
               std_floor > 0.0 && learning_rate > 0.0 && steps >= 0 && inner_epochs >= 1;
    }
};

struct CurvePoint {
    int step = 0;
    double mean_reward = 0.0;
    double mean_kl = 0.0;
    double best_candidate_prob = 0.0;
};

struct TrainResult {
    PolicyParams policy;
    PolicyParams reference;
    std::vector<CurvePoint> curve;
    /// Pool rewards observed per task (empty for tasks never sampled).
    std::vector<std::vector<double>> task_rewards;
};

using RewardFn = std::function<double(const Task&, std::size_t candidate_index)>;

std::vector<double> softmax(const std::vector<double>& logits);
std::vector<double> log_softmax(const std::vector<double>& logits);

/// Uniform double in [0, 1) with 53 random bits; fixed construction keeps
/// sampling identical across platforms.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// G categorical draws from the old policy's softmax via inverse CDF;
/// rewards and advantages are left for the caller to fill.
Group sample_group(const PolicyParams& policy_old, std::size_t task_index, int group_size,
                   std::mt19937_64& rng);

/// Group-normalized advantages with population standard deviation; a std
/// below the floor zeroes every advantage.
std::vector<double> compute_advantages(const std::vector<double>& rewards, double std_floor);

/// Per-sample penalty rho - log(rho) - 1 with rho = exp(logp_ref - logp_new);
/// non-negative, zero only at logp_new = logp_ref.
double kl_estimate(double logp_new, double logp_ref);

/// Clipped-surrogate objective over the stored per-sample log-probabilities.
double grpo_objective(const Group& group, double beta, double epsilon);

/// Same objective with logp_new recomputed from the given logits; this is
/// the function of the logits that the analytic gradient differentiates.
double grpo_objective_at(const Group& group, const std::vector<double>& logits, double beta,
                         double epsilon);

/// Analytic d(objective)/d(logits). The policy term contributes only where
/// the clip leaves the ratio active; the KL term contributes beta*(rho - 1).
std::vector<double> grpo_gradient(const Group& group, const std::vector<double>& logits,
                                  double beta, double epsilon);

/// Full loop: uniform task choice, per-step old-policy snapshot, group
/// sampling, reward lookup (each task's pool is evaluated concurrently on
/// first touch and cached), advantage normalization, inner-epoch ascent
/// steps. The reference policy is the initial snapshot and never moves.
TrainResult train(const std::vector<Task>& tasks, const RewardFn& reward_fn,
                  const GrpoConfig& config);

} // namespace chipforge
