// SPDX-License-Identifier: Apache-2.0
#include "chipforge/grpo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chipforge/worker_pool.hpp"

namespace chipforge {

namespace {

std::size_t pick_uniform(std::size_t count, std::mt19937_64& rng) {
    std::size_t idx = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(count));
    return std::min(idx, count - 1);
}

} // namespace

std::vector<double> log_softmax(const std::vector<double>& logits) {
    double hi = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double z : logits) sum += std::exp(z - hi);
    double lse = hi + std::log(sum);
    std::vector<double> out(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - lse;
    return out;
}

std::vector<double> softmax(const std::vector<double>& logits) {
    std::vector<double> out = log_softmax(logits);
    for (double& v : out) v = std::exp(v);
    return out;
}

Group sample_group(const PolicyParams& policy_old, std::size_t task_index, int group_size,
                   std::mt19937_64& rng) {
    if (group_size < 2) throw std::invalid_argument("group size must be at least 2");
    const std::vector<double>& logits = policy_old.logits.at(task_index);
    std::vector<double> probs = softmax(logits);
    std::vector<double> logp = log_softmax(logits);

    Group g;
    g.task_index = task_index;
    g.outputs.reserve(static_cast<std::size_t>(group_size));
    for (int i = 0; i < group_size; ++i) {
        double u = uniform01(rng);
        double cdf = 0.0;
        std::size_t pick = probs.size() - 1;
        for (std::size_t k = 0; k < probs.size(); ++k) {
            cdf += probs[k];
            if (u < cdf) {
                pick = k;
                break;
            }
        }
        g.outputs.push_back(pick);
        g.logp_old.push_back(logp[pick]);
    }
    g.logp_ref = g.logp_old;
    g.logp_new = g.logp_old;
    return g;
}

std::vector<double> compute_advantages(const std::vector<double>& rewards, double std_floor) {
    std::size_t n = rewards.size();
    if (n < 2) return std::vector<double>(n, 0.0);
    double mean = 0.0;
    for (double r : rewards) mean += r;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double r : rewards) var += (r - mean) * (r - mean);
    var /= static_cast<double>(n);
    double sd = std::sqrt(var);

    std::vector<double> adv(n, 0.0);
    if (sd < std_floor) return adv;
    for (std::size_t i = 0; i < n; ++i) adv[i] = (rewards[i] - mean) / sd;
    return adv;
}

double kl_estimate(double logp_new, double logp_ref) {
    double log_rho = logp_ref - logp_new;
    return std::exp(log_rho) - log_rho - 1.0;
}

namespace {

double objective_terms(const Group& group, const std::vector<double>& logp_new, double beta,
                       double epsilon) {
    std::size_t n = group.outputs.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double rho = std::exp(logp_new[i] - group.logp_old[i]);
        double clipped = std::clamp(rho, 1.0 - epsilon, 1.0 + epsilon);
        double a = group.advantages[i];
        sum += std::min(rho * a, clipped * a) - beta * kl_estimate(logp_new[i], group.logp_ref[i]);
    }
    return sum / static_cast<double>(n);
}

} // namespace

double grpo_objective(const Group& group, double beta, double epsilon) {
    return objective_terms(group, group.logp_new, beta, epsilon);
}

double grpo_objective_at(const Group& group, const std::vector<double>& logits, double beta,
                         double epsilon) {
    std::vector<double> logp = log_softmax(logits);
    std::vector<double> logp_new(group.outputs.size());
    for (std::size_t i = 0; i < group.outputs.size(); ++i) logp_new[i] = logp[group.outputs[i]];
    return objective_terms(group, logp_new, beta, epsilon);
}

std::vector<double> grpo_gradient(const Group& group, const std::vector<double>& logits,
                                  double beta, double epsilon) {
    std::vector<double> probs = softmax(logits);
    std::vector<double> logp = log_softmax(logits);
    std::size_t n = group.outputs.size();
    std::vector<double> grad(logits.size(), 0.0);

    double mass = 0.0; // sum over samples of d(term_i)/d(logp_new_i)
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t o = group.outputs[i];
        double logp_new = logp[o];
        double rho = std::exp(logp_new - group.logp_old[i]);
        double a = group.advantages[i];
        // The min(...) passes gradient through the unclipped branch exactly
        // when the ratio has not run past the clip edge in the direction the
        // advantage pushes it.
        bool active = a >= 0.0 ? rho <= 1.0 + epsilon : rho >= 1.0 - epsilon;
        double g = active ? rho * a : 0.0;
        double rho_ref = std::exp(group.logp_ref[i] - logp_new);
        g += beta * (rho_ref - 1.0);
        grad[o] += g;
        mass += g;
    }
    double inv = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < grad.size(); ++k) {
        grad[k] = (grad[k] - mass * probs[k]) * inv;
    }
    return grad;
}

TrainResult train(const std::vector<Task>& tasks, const RewardFn& reward_fn,
                  const GrpoConfig& config) {
    if (!config.valid()) throw std::invalid_argument("invalid grpo configuration");
    if (tasks.empty()) throw std::invalid_argument("task suite is empty");
    for (const auto& t : tasks) {
        if (t.candidate_pool.empty()) {
            throw std::invalid_argument("task '" + t.id + "' has an empty candidate pool");
        }
    }

    TrainResult result;
    result.policy.logits.resize(tasks.size());
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        result.policy.logits[t].assign(tasks[t].candidate_pool.size(), 0.0);
    }
    result.reference = result.policy;
    result.task_rewards.resize(tasks.size());

    std::mt19937_64 rng(config.seed);
    std::vector<std::vector<double>> ref_logp(tasks.size());
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        ref_logp[t] = log_softmax(result.reference.logits[t]);
    }

    for (int step = 0; step < config.steps; ++step) {
        std::size_t t = pick_uniform(tasks.size(), rng);
        const Task& task = tasks[t];

        // First touch of a task evaluates its whole pool concurrently; the
        // pools are small and the reward function is deterministic, so every
        // later step is a cache hit.
        std::vector<double>& pool_rewards = result.task_rewards[t];
        if (pool_rewards.empty()) {
            pool_rewards.assign(task.candidate_pool.size(), 0.0);
            parallel_for_indexed(task.candidate_pool.size(), config.jobs,
                                 [&](std::size_t k) { pool_rewards[k] = reward_fn(task, k); });
        }

        Group group = sample_group(result.policy, t, config.group_size, rng);
        for (std::size_t o : group.outputs) group.rewards.push_back(pool_rewards[o]);
        group.advantages = compute_advantages(group.rewards, config.std_floor);
        for (std::size_t i = 0; i < group.outputs.size(); ++i) {
            group.logp_ref[i] = ref_logp[t][group.outputs[i]];
        }

        std::vector<double>& z = result.policy.logits[t];
        for (int epoch = 0; epoch < config.inner_epochs; ++epoch) {
            std::vector<double> grad = grpo_gradient(group, z, config.beta, config.epsilon);
            if (config.max_grad_norm > 0.0) {
                double norm = 0.0;
                for (double g : grad) norm += g * g;
                norm = std::sqrt(norm);
                if (norm > config.max_grad_norm) {
                    double scale = config.max_grad_norm / norm;
                    for (double& g : grad) g *= scale;
                }
            }
            for (std::size_t k = 0; k < z.size(); ++k) z[k] += config.learning_rate * grad[k];
        }

        std::vector<double> logp = log_softmax(z);
        double mean_reward = 0.0;
        double mean_kl = 0.0;
        for (std::size_t i = 0; i < group.outputs.size(); ++i) {
            group.logp_new[i] = logp[group.outputs[i]];
            mean_reward += group.rewards[i];
            mean_kl += kl_estimate(group.logp_new[i], group.logp_ref[i]);
        }
        mean_reward /= static_cast<double>(group.outputs.size());
        mean_kl /= static_cast<double>(group.outputs.size());

        std::size_t best = 0;
        for (std::size_t k = 1; k < pool_rewards.size(); ++k) {
            if (pool_rewards[k] > pool_rewards[best]) best = k;
        }
        CurvePoint pt;
        pt.step = step;
        pt.mean_reward = mean_reward;
        pt.mean_kl = mean_kl;
        pt.best_candidate_prob = std::exp(logp[best]);
        result.curve.push_back(pt);
    }
    return result;
}

} // namespace chipforge
