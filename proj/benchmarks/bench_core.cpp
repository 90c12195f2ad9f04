// SPDX-License-Identifier: Apache-2.0
//
// Microbenchmarks for the hot paths of the desk-scale engine: parsing,
// elaboration, netlist simulation, reward folding, and one GRPO training
// step over a small candidate suite.

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "chipforge/grpo.hpp"
#include "chipforge/reward.hpp"
#include "chipforge/verilog/elaborate.hpp"
#include "chipforge/verilog/netlist.hpp"
#include "chipforge/verilog/parser.hpp"
#include "chipforge/verilog/ppa.hpp"

namespace {

using namespace chipforge;

/// Ripple-carry adder over two n-bit operands; exercises the widest parse
/// and lowering path the subset supports.
std::string adder_source(unsigned width) {
    const std::string top = std::to_string(width - 1);
    return "module add" + std::to_string(width) + "(input [" + top + ":0] a, input [" + top +
           ":0] b, output [" + std::to_string(width) + ":0] s);\n"
           "  assign s = a + b;\nendmodule\n";
}

void BM_ParseMini(benchmark::State& state) {
    const std::string src = adder_source(static_cast<unsigned>(state.range(0)));
    for (auto _ : state) {
        auto m = verilog::parse_mini(src);
        benchmark::DoNotOptimize(m);
    }
}
BENCHMARK(BM_ParseMini)->Arg(8)->Arg(32);

void BM_Elaborate(benchmark::State& state) {
    const std::string src = adder_source(static_cast<unsigned>(state.range(0)));
    auto m = verilog::parse_mini(src);
    for (auto _ : state) {
        auto n = verilog::elaborate(m.value());
        benchmark::DoNotOptimize(n);
    }
}
BENCHMARK(BM_Elaborate)->Arg(8)->Arg(32);

void BM_SimulateNetlist(benchmark::State& state) {
    const unsigned width = static_cast<unsigned>(state.range(0));
    auto m = verilog::parse_mini(adder_source(width));
    auto n = verilog::elaborate(m.value());
    std::vector<BitVec> inputs = {BitVec(width, 0xA5A5A5A5u), BitVec(width, 0x5A5A5A5Au)};
    for (auto _ : state) {
        auto out = verilog::simulate_netlist(n.value(), inputs);
        benchmark::DoNotOptimize(out);
    }
}
BENCHMARK(BM_SimulateNetlist)->Arg(8)->Arg(32);

void BM_EstimatePpaAndReward(benchmark::State& state) {
    auto m = verilog::parse_mini(adder_source(8));
    auto n = verilog::elaborate(m.value());
    ToolchainReport report;
    report.compile_ok = true;
    report.func_ok = true;
    report.syn_ok = true;
    report.stage_reached = Stage::PpaMeasured;
    for (auto _ : state) {
        PpaMetrics ppa = verilog::estimate_ppa(n.value());
        report.ppa = ppa;
        RewardBreakdown b = hierarchical_reward(true, report, ppa);
        benchmark::DoNotOptimize(b);
    }
}
BENCHMARK(BM_EstimatePpaAndReward);

void BM_GrpoGradient(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const std::size_t pool = 8;
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    std::vector<double> logits(pool), old_logits(pool), ref_logits(pool);
    for (auto& z : logits) z = dist(rng);
    for (auto& z : old_logits) z = dist(rng);
    for (auto& z : ref_logits) z = dist(rng);

    PolicyParams sampler;
    sampler.logits.push_back(old_logits);
    Group group = sample_group(sampler, 0, 16, rng);
    const auto lp_old = log_softmax(old_logits);
    const auto lp_ref = log_softmax(ref_logits);
    std::uniform_real_distribution<double> reward(0.0, 2.4);
    for (std::size_t i = 0; i < group.outputs.size(); ++i) {
        group.logp_old[i] = lp_old[group.outputs[i]];
        group.logp_ref[i] = lp_ref[group.outputs[i]];
        group.rewards.push_back(reward(rng));
    }
    group.advantages = compute_advantages(group.rewards, 1e-8);

    for (auto _ : state) {
        auto grad = grpo_gradient(group, logits, 0.01, 0.2);
        benchmark::DoNotOptimize(grad);
    }
}
BENCHMARK(BM_GrpoGradient);

void BM_GrpoTrainStep(benchmark::State& state) {
    Task task;
    task.id = "bench";
    task.candidate_pool = {"a", "b", "c", "d"};
    const std::vector<double> rewards = {2.4, 1.5, 0.1, 0.0};
    RewardFn fn = [&rewards](const Task&, std::size_t i) { return rewards[i]; };

    GrpoConfig cfg;
    cfg.steps = 1;
    for (auto _ : state) {
        TrainResult r = train({task}, fn, cfg);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_GrpoTrainStep);

} // namespace

BENCHMARK_MAIN();
