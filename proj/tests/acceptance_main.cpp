// SPDX-License-Identifier: Apache-2.0
//
// Acceptance harness: eleven release criteria, one [PASS]/[FAIL]/[SKIP]
// line each, exit status nonzero iff any criterion fails. Everything runs
// against the mock backend with no network; the externals criterion skips
// its live half when the real tools are not installed.

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "chipforge/grpo.hpp"
#include "chipforge/metrics.hpp"
#include "chipforge/response_format.hpp"
#include "chipforge/reward.hpp"
#include "chipforge/scoring.hpp"
#include "chipforge/toolchain/external_backend.hpp"
#include "chipforge/toolchain/mock_backend.hpp"
#include "chipforge/toolchain/pipeline.hpp"
#include "chipforge/toolchain/subprocess.hpp"
#include "chipforge/toolchain/workspace.hpp"
#include "chipforge/verilog/elaborate.hpp"
#include "chipforge/verilog/eval.hpp"
#include "chipforge/verilog/parser.hpp"
#include "chipforge/verilog/ppa.hpp"
#include "random_modules.hpp"

namespace {

using namespace chipforge;
namespace fs = std::filesystem;

int g_failures = 0;

void report(int n, const char* status, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", status, n, detail.c_str());
    std::fflush(stdout);
    if (std::string(status) == "FAIL") ++g_failures;
}

struct Skip {
    std::string reason;
};

void check(bool ok, const std::string& what) {
    if (!ok) throw std::runtime_error(what);
}

template <typename Fn>
void criterion(int n, Fn fn) {
    try {
        report(n, "PASS", fn());
    } catch (const Skip& s) {
        report(n, "SKIP", s.reason);
    } catch (const std::exception& e) {
        report(n, "FAIL", e.what());
    }
}

/// Paths are compiled in; same-named environment variables override them.
std::string locate(const char* env_name, const char* compiled) {
    const char* v = std::getenv(env_name);
    if (v != nullptr && *v != '\0') return v;
    check(compiled != nullptr && *compiled != '\0',
          std::string(env_name) + " is neither compiled in nor set");
    return compiled;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    check(static_cast<bool>(in), "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path dir;
    TempDir() {
        static std::atomic<int> counter{0};
        dir = fs::temp_directory_path() /
              ("chipforge-acceptance-" + std::to_string(::getpid()) + "-" +
               std::to_string(counter.fetch_add(1)));
        fs::create_directories(dir);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    std::string write(const std::string& name, const std::string& text) const {
        fs::path p = dir / name;
        std::ofstream out(p, std::ios::binary);
        out << text;
        return p.string();
    }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

verilog::MiniModule parse_or_die(const std::string& source) {
    auto parsed = verilog::parse_mini(source);
    check(parsed.ok(), "fixture module failed to parse: " +
                           (parsed.ok() ? std::string() : parsed.error().str()));
    return std::move(parsed.value());
}

PpaMetrics mock_ppa(const std::string& source) {
    auto netlist = verilog::elaborate(parse_or_die(source));
    check(netlist.ok(), "fixture module failed to elaborate");
    return verilog::estimate_ppa(netlist.value());
}

double score_of(const PpaMetrics& m) {
    auto s = ppa_score(m);
    check(s.ok(), "ppa_score rejected fixture metrics");
    return s.value();
}

std::string wrap_response(const std::string& code) {
    return render_response("Work through the truth table, then emit the gates.",
                           "```verilog\n" + code + "```");
}

// ------------------------------------------------------------ criterion 1

std::string criterion_reward_arithmetic() {
    PpaMetrics m{0.01, 1.0, 0.01};
    ToolchainReport full;
    full.compile_ok = true;
    full.func_ok = true;
    full.syn_ok = true;
    full.ppa = m;
    full.stage_reached = Stage::PpaMeasured;
    RewardBreakdown pass = hierarchical_reward(true, full, m);
    check(pass.total == 2.4, "full pass with gen = ref must total exactly 2.4");
    check(pass.r_ppa == 1.0, "gen = ref must give a ppa ratio of exactly 1");

    ToolchainReport nothing;
    RewardBreakdown fmt_only = hierarchical_reward(true, nothing, std::nullopt);
    check(fmt_only.total == 0.1, "format-only must total exactly 0.1");

    ToolchainReport compile_failed;
    compile_failed.compile_ok = false;
    compile_failed.stage_reached = Stage::None;
    RewardBreakdown after_fmt = hierarchical_reward(true, compile_failed, std::nullopt);
    check(after_fmt.total == 0.1, "compile failure after format must total exactly 0.1");
    check(after_fmt.r_comp == 0.0 && after_fmt.r_func == 0.0 && after_fmt.r_syn == 0.0 &&
              after_fmt.r_ppa == 0.0,
          "compile failure must zero every later component");
    return "full pass 2.4, format-only 0.1, compile-fail-after-format 0.1 (bit-exact)";
}

// ------------------------------------------------------------ criterion 2

struct BruteTriple {
    bool present = false;
    double d = 0.0, a = 0.0, p = 0.0;
};

/// Deliberately naive re-derivation of the headline counts: raw text
/// split, straight-line arithmetic, no shared code with the metrics
/// module.
std::string criterion_table_reproduction() {
    const std::string table = locate("CHIPFORGE_TABLE3_TSV", CHIPFORGE_TABLE3_TSV);
    const std::string binary = locate("CHIPFORGE_BIN", CHIPFORGE_BIN);

    std::size_t rows = 0, wins = 0, evaluable = 0;
    {
        std::istringstream in(read_file(table));
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::vector<std::string> f;
            std::istringstream ls(line);
            std::string item;
            while (std::getline(ls, item, '\t')) f.push_back(item);
            if (f.size() != 13 || f[1] == "ref_delay") continue; // header
            ++rows;
            auto triple = [&](std::size_t base) {
                BruteTriple t;
                if (f[base] == "NA") return t;
                t.present = true;
                t.d = std::strtod(f[base].c_str(), nullptr);
                t.a = std::strtod(f[base + 1].c_str(), nullptr);
                t.p = std::strtod(f[base + 2].c_str(), nullptr);
                return t;
            };
            BruteTriple ref = triple(1);
            BruteTriple gen = triple(10); // chipseek columns
            check(ref.present, "row without a reference triple: " + f[0]);
            if (!gen.present) continue; // no working design: loss, not evaluable
            ++evaluable;
            const double edap_ref = ref.d * ref.a * ref.p;
            const double edap_gen = gen.d * gen.a * gen.p;
            if (edap_ref / edap_gen > 1.0 + 1e-9) ++wins;
        }
    }
    check(rows == 44, "expected 44 table rows, saw " + std::to_string(rows));
    check(wins == 27, "brute-force recount expected 27 wins, got " + std::to_string(wins));
    check(evaluable == 38,
          "brute-force recount expected 38 evaluable, got " + std::to_string(evaluable));

    TempDir tmp;
    auto start = std::chrono::steady_clock::now();
    RunResult r = run_command({binary, "metrics", "wtl", "--table", table, "--model",
                               "chipseek"},
                              tmp.dir.string(), 30.0);
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check(!r.spawn_failed && r.exit_code == 0, "wtl command failed: " + r.output);
    check(r.output.find("wins=27 ties=8 losses=9 evaluable=38 total=44") != std::string::npos,
          "wtl summary line mismatch: " + r.output);
    check(seconds < 1.0, "wtl run took " + std::to_string(seconds) + " s (limit 1 s)");

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "wins=27, evaluable=38 of 44; independent recount agrees; %.0f ms",
                  seconds * 1000.0);
    return buf;
}

// ------------------------------------------------------------ criterion 3

std::string criterion_passk_oracle() {
    std::size_t cases = 0;
    for (std::uint64_t n = 1; n <= 12; ++n) {
        // Enumerate every subset once; passing samples are the c lowest
        // indices, so a subset misses them iff its lowest set bit is >= c.
        std::vector<std::vector<std::uint64_t>> miss(n + 1,
                                                     std::vector<std::uint64_t>(n + 1, 0));
        std::vector<std::uint64_t> total(n + 1, 0);
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
            const unsigned k = static_cast<unsigned>(__builtin_popcountll(mask));
            ++total[k];
            const std::uint64_t lowest =
                mask == 0 ? n : static_cast<std::uint64_t>(__builtin_ctzll(mask));
            for (std::uint64_t c = 0; c <= lowest && c <= n; ++c) ++miss[c][k];
        }
        for (std::uint64_t c = 0; c <= n; ++c) {
            for (std::uint64_t k = 1; k <= n; ++k) {
                const double expected =
                    1.0 - static_cast<double>(miss[c][k]) / static_cast<double>(total[k]);
                auto got = pass_at_k(n, c, k);
                check(got.ok(), "pass_at_k rejected a valid input");
                check(got.value() == expected,
                      "pass@k mismatch at n=" + std::to_string(n) + " c=" + std::to_string(c) +
                          " k=" + std::to_string(k));
                ++cases;
            }
        }
    }
    auto headline = pass_at_k(10, 5, 5);
    check(headline.ok() && std::abs(headline.value() - 0.996032) <= 1e-6,
          "pass@k(10,5,5) must be 0.996032 within 1e-6");
    return std::to_string(cases) + " (n,c,k) cases bit-identical to subset enumeration; "
                                   "pass@k(10,5,5) = 0.996032";
}

// ------------------------------------------------------------ criterion 4

std::string criterion_gradient_check() {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> pool_dist(2, 6);
    std::uniform_real_distribution<double> logit_dist(-2.0, 2.0);
    std::uniform_real_distribution<double> reward_dist(0.0, 2.4);
    const double h = 1e-5;
    const double epsilon = 0.2;
    int clean = 0;
    double worst = 0.0;

    for (int trial = 0; trial < 4000 && clean < 120; ++trial) {
        const std::size_t pool = static_cast<std::size_t>(pool_dist(rng));
        const double beta = (trial % 3 == 0) ? 0.0 : (trial % 3 == 1 ? 0.01 : 1.0);

        std::vector<double> logits(pool), old_logits(pool), ref_logits(pool);
        for (auto& z : logits) z = logit_dist(rng);
        for (auto& z : old_logits) z = logit_dist(rng);
        for (auto& z : ref_logits) z = logit_dist(rng);

        PolicyParams sampler;
        sampler.logits.push_back(old_logits);
        Group group = sample_group(sampler, 0, 10, rng);
        const std::vector<double> lp_old = log_softmax(old_logits);
        const std::vector<double> lp_ref = log_softmax(ref_logits);
        const std::vector<double> lp_new = log_softmax(logits);
        for (std::size_t i = 0; i < group.outputs.size(); ++i) {
            group.logp_old[i] = lp_old[group.outputs[i]];
            group.logp_ref[i] = lp_ref[group.outputs[i]];
            group.logp_new[i] = lp_new[group.outputs[i]];
            group.rewards.push_back(reward_dist(rng));
        }
        group.advantages = compute_advantages(group.rewards, 1e-8);

        // The clipped surrogate has kinks where the ratio meets 1 +- eps;
        // keep a margin so the finite-difference interval stays smooth.
        bool near_kink = false;
        for (std::size_t i = 0; i < group.outputs.size(); ++i) {
            const double rho = std::exp(group.logp_new[i] - group.logp_old[i]);
            if (std::abs(rho - (1.0 + epsilon)) < 1e-3 ||
                std::abs(rho - (1.0 - epsilon)) < 1e-3) {
                near_kink = true;
                break;
            }
        }
        if (near_kink) continue;

        std::vector<double> grad = grpo_gradient(group, logits, beta, epsilon);
        for (std::size_t k = 0; k < pool; ++k) {
            std::vector<double> up = logits, dn = logits;
            up[k] += h;
            dn[k] -= h;
            const double fd = (grpo_objective_at(group, up, beta, epsilon) -
                               grpo_objective_at(group, dn, beta, epsilon)) /
                              (2.0 * h);
            const double rel =
                std::abs(fd - grad[k]) / std::max({std::abs(fd), std::abs(grad[k]), 1e-6});
            worst = std::max(worst, rel);
        }
        ++clean;
    }
    check(clean >= 100, "needed at least 100 clean configurations, got " +
                            std::to_string(clean));
    check(worst < 1e-5, "worst relative error " + std::to_string(worst) + " exceeds 1e-5");
    char buf[120];
    std::snprintf(buf, sizeof(buf), "%d configurations, worst relative error %.2e", clean,
                  worst);
    return buf;
}

// --------------------------------------------------------- criteria 5 & 6

struct SuiteTask {
    Task task;
    std::size_t eff_index = 0;
};

std::string module2(const std::string& expr) {
    return "module top(input a, input b, output y);\n  assign y = " + expr + ";\nendmodule\n";
}

std::string module3(const std::string& expr) {
    return "module top(input s, input a, input b, output y);\n  assign y = " + expr +
           ";\nendmodule\n";
}

/// Exhaustive vector table derived from the module itself via the direct
/// evaluator, so both pool members face the same ground truth.
std::string exhaustive_table(const std::string& source) {
    verilog::MiniModule m = parse_or_die(source);
    std::vector<verilog::Port> ins;
    std::vector<verilog::Port> outs;
    for (const auto& p : m.ports) (p.is_input ? ins : outs).push_back(p);

    std::string text = "ports: in";
    for (const auto& p : ins) text += " " + p.name + "[" + std::to_string(p.width) + "]";
    text += " -> out";
    for (const auto& p : outs) text += " " + p.name + "[" + std::to_string(p.width) + "]";
    text += "\n";

    std::size_t bits = 0;
    for (const auto& p : ins) bits += p.width;
    for (std::uint64_t v = 0; v < (std::uint64_t(1) << bits); ++v) {
        std::unordered_map<std::string, BitVec> env;
        std::size_t off = 0;
        std::string row;
        for (const auto& p : ins) {
            const std::uint64_t val = (v >> off) & ((std::uint64_t(1) << p.width) - 1);
            off += p.width;
            env.emplace(p.name, BitVec(p.width, val));
            if (!row.empty()) row += " ";
            row += p.name + "=" + std::to_string(val);
        }
        auto values = verilog::eval_module(m, env);
        check(values.ok(), "suite module failed direct evaluation");
        row += " ->";
        for (const auto& p : outs) {
            row += " " + p.name + "=" + std::to_string(values->at(p.name).to_uint64());
        }
        text += row + "\n";
    }
    return text;
}

std::vector<SuiteTask> convergence_suite() {
    struct Family {
        const char* id;
        std::string eff;
        std::string ineff;
    };
    const std::vector<Family> families = {
        {"and2", module2("a & b"), module2("(a & b) | (b & a)")},
        {"or2", module2("a | b"), module2("(a | b) & (b | a)")},
        {"xor2", module2("a ^ b"), module2("(a & ~b) | (~a & b)")},
        {"nand2", module2("~(a & b)"), module2("~a | ~b")},
        {"mux2", module3("s ? a : b"), module3("(s & a) | (~s & b) | (s & a & b & ~b)")},
    };

    const std::string bad_syntax2 =
        "module top(input a, input b, output y)\n  assign y = a & b;\nendmodule\n";
    const std::string bad_syntax3 =
        "module top(input s, input a, input b, output y)\n  assign y = a;\nendmodule\n";

    std::vector<SuiteTask> suite;
    for (std::size_t i = 0; i < families.size(); ++i) {
        const Family& fam = families[i];
        const PpaMetrics eff_ppa = mock_ppa(fam.eff);
        check(score_of(mock_ppa(fam.ineff)) < score_of(eff_ppa),
              std::string(fam.id) + ": the inefficient variant must score lower");

        const bool three = fam.eff.find("input s") != std::string::npos;
        std::vector<std::string> pool = {
            wrap_response(fam.eff),                    // correct and efficient
            wrap_response(fam.ineff),                  // correct but inefficient
            wrap_response(three ? bad_syntax3 : bad_syntax2), // compile-failing
            fam.eff,                                   // format-failing (bare code)
        };
        // Rotate so the best candidate is not always at index 0.
        const std::size_t eff_index = i % pool.size();
        std::rotate(pool.begin(), pool.begin() + ((pool.size() - eff_index) % pool.size()),
                    pool.end());

        SuiteTask st;
        st.task.id = fam.id;
        st.task.instruction = std::string("implement ") + fam.id;
        st.task.candidate_pool = pool;
        st.task.testbench = Testbench{Testbench::Kind::VectorTable, exhaustive_table(fam.eff)};
        st.task.reference_ppa = eff_ppa;
        st.eff_index = eff_index;
        suite.push_back(std::move(st));
    }
    return suite;
}

RewardFn suite_reward_fn(const Scorer& scorer) {
    return [&scorer](const Task& task, std::size_t index) -> double {
        ScoreRequest req;
        req.response_text = task.candidate_pool[index];
        req.testbench = task.testbench;
        req.reference_ppa = task.reference_ppa;
        auto result = scorer.score(req);
        check(result.ok(), "mock scoring must not raise tool errors");
        return result.value().reward.total;
    };
}

GrpoConfig suite_config(double beta) {
    GrpoConfig cfg;
    cfg.group_size = 10;
    cfg.beta = beta;
    cfg.epsilon = 0.2;
    cfg.seed = 7;
    cfg.steps = 500;
    cfg.jobs = 4;
    return cfg;
}

std::string criterion_convergence(const std::vector<SuiteTask>& suite, const Scorer& scorer) {
    std::vector<Task> tasks;
    for (const auto& st : suite) tasks.push_back(st.task);
    TrainResult result = train(tasks, suite_reward_fn(scorer), suite_config(0.01));

    double min_best_prob = 1.0;
    for (std::size_t t = 0; t < suite.size(); ++t) {
        const auto& rewards = result.task_rewards[t];
        check(rewards.size() == 4, suite[t].task.id + ": pool rewards missing");
        std::size_t best = 0;
        for (std::size_t k = 1; k < rewards.size(); ++k)
            if (rewards[k] > rewards[best]) best = k;
        check(best == suite[t].eff_index,
              suite[t].task.id + ": best-reward candidate is not the efficient design");
        check(rewards[best] > 2.3, suite[t].task.id + ": efficient design must score ~2.4");

        const std::vector<double> probs = softmax(result.policy.logits[t]);
        min_best_prob = std::min(min_best_prob, probs[best]);
        check(probs[best] > 0.9,
              suite[t].task.id + ": final best-candidate probability " +
                  std::to_string(probs[best]) + " is not > 0.9");
    }

    const std::size_t tenth = result.curve.size() / 10;
    check(tenth > 0, "training curve too short");
    double first = 0.0, last = 0.0;
    for (std::size_t i = 0; i < tenth; ++i) {
        first += result.curve[i].mean_reward;
        last += result.curve[result.curve.size() - tenth + i].mean_reward;
    }
    first /= static_cast<double>(tenth);
    last /= static_cast<double>(tenth);
    check(last - first >= 0.5, "mean reward gain " + std::to_string(last - first) +
                                   " is below the required 0.5");

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "5 tasks converged; min best-candidate prob %.3f; reward %.2f -> %.2f",
                  min_best_prob, first, last);
    return buf;
}

std::string criterion_kl_anchoring(const std::vector<SuiteTask>& suite, const Scorer& scorer) {
    std::vector<Task> tasks;
    for (const auto& st : suite) tasks.push_back(st.task);
    TrainResult result = train(tasks, suite_reward_fn(scorer), suite_config(1000.0));

    double max_tv = 0.0;
    for (std::size_t t = 0; t < suite.size(); ++t) {
        const std::vector<double> p = softmax(result.policy.logits[t]);
        const std::vector<double> q = softmax(result.reference.logits[t]);
        double tv = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) tv += std::abs(p[k] - q[k]);
        tv *= 0.5;
        max_tv = std::max(max_tv, tv);
        check(tv <= 0.05, suite[t].task.id + ": total-variation distance " +
                              std::to_string(tv) + " exceeds 0.05");
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "beta=1000 pins every task to pi_ref; max TV %.4f",
                  max_tv);
    return buf;
}

// ------------------------------------------------------------ criterion 7

std::string criterion_oracle_equivalence() {
    std::size_t modules = 0;
    std::size_t vectors = 0;
    for (std::uint64_t seed = 1; seed <= 220; ++seed) {
        testgen::GeneratedModule gen = testgen::generate_module(seed);
        verilog::MiniModule m = parse_or_die(gen.source);
        auto netlist = verilog::elaborate(m);
        check(netlist.ok(), "generated module failed to elaborate (seed " +
                               std::to_string(seed) + ")");

        std::size_t total_bits = 0;
        for (const auto& p : gen.inputs) total_bits += p.width;
        check(total_bits <= 10, "generator exceeded the 10-input-bit budget");

        for (std::uint64_t v = 0; v < (std::uint64_t(1) << total_bits); ++v) {
            std::unordered_map<std::string, BitVec> env;
            std::vector<BitVec> in_values;
            std::size_t off = 0;
            for (const auto& p : gen.inputs) {
                BitVec bits(p.width, v >> off);
                off += p.width;
                env.emplace(p.name, bits);
                in_values.push_back(bits);
            }
            auto direct = verilog::eval_module(m, env);
            check(direct.ok(), "direct evaluation failed (seed " + std::to_string(seed) + ")");
            std::vector<BitVec> outs = verilog::simulate_netlist(netlist.value(), in_values);
            for (std::size_t i = 0; i < outs.size(); ++i) {
                const auto& name = netlist->outputs[i].name;
                check(direct->at(name) == outs[i],
                      "oracle mismatch at seed " + std::to_string(seed) + " output " + name +
                          " vector " + std::to_string(v));
            }
            ++vectors;
        }
        ++modules;
    }
    return std::to_string(modules) + " random modules, " + std::to_string(vectors) +
           " input vectors, 0 mismatches";
}

// ------------------------------------------------------------ criterion 8

std::string criterion_adder_proxy() {
    const std::string ripple =
        "module fa(input a, input b, input cin, output s, output cout);\n"
        "  assign {cout, s} = a + b + cin;\n"
        "endmodule\n";
    const std::string sop =
        "module fa(input a, input b, input cin, output s, output cout);\n"
        "  assign s = a ^ b ^ cin;\n"
        "  assign cout = (a & b) | (a & cin) | (b & cin);\n"
        "endmodule\n";

    auto ripple_net = verilog::elaborate(parse_or_die(ripple));
    auto sop_net = verilog::elaborate(parse_or_die(sop));
    check(ripple_net.ok() && sop_net.ok(), "full-adder variants must elaborate");
    check(ripple_net->gates.size() == 5, "shared-term adder must lower to 5 gates, got " +
                                             std::to_string(ripple_net->gates.size()));
    check(ripple_net->gate_count(verilog::GateKind::Xor2) == 2 &&
              ripple_net->gate_count(verilog::GateKind::And2) == 2 &&
              ripple_net->gate_count(verilog::GateKind::Or2) == 1,
          "shared-term adder gate mix must be 2 XOR, 2 AND, 1 OR");
    check(sop_net->gates.size() == 7, "sum-of-products adder must lower to 7 gates, got " +
                                          std::to_string(sop_net->gates.size()));

    const double score5 = score_of(verilog::estimate_ppa(ripple_net.value()));
    const double score7 = score_of(verilog::estimate_ppa(sop_net.value()));
    check(score5 > score7, "5-gate adder must strictly out-score the 7-gate variant");
    char buf[120];
    std::snprintf(buf, sizeof(buf), "5-gate adder score %.2f > 7-gate score %.2f", score5,
                  score7);
    return buf;
}

// ------------------------------------------------------------ criterion 9

std::string criterion_gating_exhaustive() {
    const PpaMetrics m{0.5, 2.0, 0.25}; // dyadic so the self-ratio is exactly 1
    std::size_t honored = 0;
    for (int mode_i = 0; mode_i < 2; ++mode_i) {
        const GatingMode mode = mode_i == 0 ? GatingMode::ProseStrict : GatingMode::EquationOnly;
        for (unsigned bits = 0; bits < 16; ++bits) {
            const bool fmt = (bits & 1) != 0;
            const bool comp = (bits & 2) != 0;
            const bool func = (bits & 4) != 0;
            const bool syn = (bits & 8) != 0;

            ToolchainReport report;
            report.compile_ok = comp;
            report.func_ok = func;
            report.syn_ok = syn;
            if (syn) report.ppa = m;
            RewardBreakdown b = hierarchical_reward(fmt, report, m, RewardWeights{}, mode);

            const bool comp_eff = comp && (mode == GatingMode::EquationOnly || fmt);
            const bool func_eff = func && comp_eff;
            const bool syn_eff = syn && func_eff;
            const bool ok = b.r_format == (fmt ? 1.0 : 0.0) &&
                            b.r_comp == (comp_eff ? 1.0 : 0.0) &&
                            b.r_func == (func_eff ? 1.0 : 0.0) &&
                            b.r_syn == (syn_eff ? 1.0 : 0.0) &&
                            b.r_ppa == (syn_eff ? 1.0 : 0.0) &&
                            (b.r_ppa == 0.0 || b.r_syn == 1.0) &&
                            (b.r_syn == 0.0 || b.r_func == 1.0) &&
                            (b.r_func == 0.0 || b.r_comp == 1.0);
            check(ok, "gating chain violated at mode " + std::string(gating_mode_name(mode)) +
                          " flags " + std::to_string(bits));
            ++honored;
        }
    }
    return std::to_string(honored) + "/32 flag combinations honor the gating chain";
}

// ----------------------------------------------------------- criterion 10

std::string criterion_determinism_isolation() {
    const std::string binary = locate("CHIPFORGE_BIN", CHIPFORGE_BIN);
    TempDir tmp;

    const std::string and_code = module2("a & b");
    const std::string table = exhaustive_table(and_code);
    const std::string wrong_code = module2("a | b");
    const std::string broken_code =
        "module top(input a, input b, output y)\n  assign y = a & b;\nendmodule\n";

    std::string tasks;
    for (int i = 0; i < 100; ++i) {
        std::string response;
        switch (i % 4) {
        case 0: response = wrap_response(and_code); break;
        case 1: response = wrap_response(wrong_code); break;
        case 2: response = wrap_response(broken_code); break;
        default: response = and_code; break; // format violation
        }
        // Minimal hand-built JSON; escape the embedded fixture strings.
        std::string escaped_response;
        for (char c : response) {
            switch (c) {
            case '"': escaped_response += "\\\""; break;
            case '\\': escaped_response += "\\\\"; break;
            case '\n': escaped_response += "\\n"; break;
            default: escaped_response += c; break;
            }
        }
        std::string escaped_table;
        for (char c : table) {
            if (c == '\n') {
                escaped_table += "\\n";
            } else {
                escaped_table += c;
            }
        }
        tasks += "{\"id\":\"t" + std::to_string(i) + "\",\"response\":\"" + escaped_response +
                 "\",\"testbench_kind\":\"vector_table\",\"testbench\":\"" + escaped_table +
                 "\",\"ppa_ref.delay_ns\":0.01,\"ppa_ref.area_um2\":1.0,"
                 "\"ppa_ref.power_w\":0.01}\n";
    }
    const std::string tasks_file = tmp.write("tasks.jsonl", tasks);

    auto run_once = [&](const std::string& out_name) {
        RunResult r = run_command({binary, "eval-batch", "--tasks", tasks_file, "--jobs", "8",
                                   "--out", tmp.path(out_name)},
                                  tmp.dir.string(), 120.0);
        check(!r.spawn_failed && r.exit_code == 0, "eval-batch failed: " + r.output);
        return read_file(tmp.path(out_name));
    };
    const std::string first = run_once("out1.jsonl");
    const std::string second = run_once("out2.jsonl");
    check(!first.empty(), "eval-batch produced no output");
    check(first == second, "two --jobs 8 runs are not byte-identical");
    std::size_t line_count = 0;
    for (char c : first)
        if (c == '\n') ++line_count;
    check(line_count == 100, "expected 100 output lines");

    // Concurrency stress: no two stage evaluations may share a scratch dir.
    Toolchain chain(std::make_shared<MockBackend>());
    std::vector<EvalRequest> requests;
    for (int i = 0; i < 64; ++i) {
        EvalRequest req;
        req.code = and_code;
        req.testbench = Testbench{Testbench::Kind::VectorTable, table};
        requests.push_back(req);
    }
    auto results = chain.evaluate_batch(requests, 8);
    std::set<std::string> ids;
    std::size_t total_ids = 0;
    for (const auto& r : results) {
        check(r.ok(), "mock evaluation failed during the stress run");
        std::istringstream in(r.value().workspace_ids);
        std::string id;
        while (std::getline(in, id, ',')) {
            ids.insert(id);
            ++total_ids;
        }
    }
    check(total_ids == 64 * 3, "expected three scratch dirs per evaluation");
    check(ids.size() == total_ids, "scratch workspaces were shared between evaluations");

    return "100-task eval-batch byte-identical across --jobs 8 runs; " +
           std::to_string(total_ids) + " scratch dirs all distinct";
}

// ----------------------------------------------------------- criterion 11

bool tool_present(const std::string& name, const TempDir& tmp) {
    RunResult r = run_command({name, "-V"}, tmp.dir.string(), 10.0);
    if (r.spawn_failed) {
        // yosys uses -V too, but be lenient about flag handling: only a
        // failed spawn means the binary is absent.
        return false;
    }
    return true;
}

std::string criterion_external_contract() {
    const std::string fixture_dir = locate("CHIPFORGE_FIXTURE_DIR", CHIPFORGE_FIXTURE_DIR);

    auto openroad = parse_ppa_report(read_file(fixture_dir + "/flow_report_openroad_style.txt"));
    check(openroad.ok(), "openroad-style fixture did not parse: " +
                             (openroad.ok() ? std::string() : openroad.error().message));
    check(openroad->delay_ns == 0.35 && openroad->area_um2 == 51.072 &&
              openroad->power_w == 3.14e-05,
          "openroad-style fixture metrics mismatch");

    auto sta = parse_ppa_report(read_file(fixture_dir + "/flow_report_sta_style.txt"));
    check(sta.ok(), "sta-style fixture did not parse");
    check(sta->delay_ns == 0.19 && sta->area_um2 == 475.076 && sta->power_w == 3.92e-05,
          "sta-style fixture metrics mismatch");

    TempDir tmp;
    const bool have_iverilog = tool_present("iverilog", tmp);
    const bool have_yosys = tool_present("yosys", tmp);
    if (!have_iverilog || !have_yosys) {
        throw Skip{"live tools absent (iverilog: " + std::string(have_iverilog ? "yes" : "no") +
                   ", yosys: " + std::string(have_yosys ? "yes" : "no") +
                   "); fixture report parsing passed"};
    }

    ExternalBackend backend;
    auto ws = Workspace::create();
    check(ws.ok(), "cannot create a scratch workspace");
    auto compile = backend.check_compile(module2("a & b"), ws.value(), 30.0);
    check(compile.ok(), "compile raised a tool error: " +
                            (compile.ok() ? std::string() : compile.error().message));
    check(compile->ok, "known-good module failed to compile: " + compile->log);
    return "fixture reports parsed exactly; live iverilog compile of a known-good module "
           "returned true";
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();

    criterion(1, criterion_reward_arithmetic);
    criterion(2, criterion_table_reproduction);
    criterion(3, criterion_passk_oracle);
    criterion(4, criterion_gradient_check);

    // Criteria 5 and 6 share the candidate suite and the mock scorer.
    try {
        Scorer scorer(Toolchain(std::make_shared<MockBackend>()), ScoringOptions{});
        const std::vector<SuiteTask> suite = convergence_suite();
        criterion(5, [&] { return criterion_convergence(suite, scorer); });
        criterion(6, [&] { return criterion_kl_anchoring(suite, scorer); });
    } catch (const std::exception& e) {
        report(5, "FAIL", std::string("suite construction failed: ") + e.what());
        report(6, "FAIL", std::string("suite construction failed: ") + e.what());
    }

    criterion(7, criterion_oracle_equivalence);
    criterion(8, criterion_adder_proxy);
    criterion(9, criterion_gating_exhaustive);
    criterion(10, criterion_determinism_isolation);
    criterion(11, criterion_external_contract);

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d of 11 criteria failed (%.1f s total)\n", g_failures, seconds);
    return g_failures == 0 ? 0 : 1;
}
