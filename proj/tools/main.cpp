// SPDX-License-Identifier: Apache-2.0
//
// chipforge: scoring, batch evaluation, toy GRPO training, dataset
// pipeline stages, and benchmark analytics behind one binary.
//
// Exit codes: 0 success, 1 usage error, 2 config error, 3 tool or
// generator unavailable.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "chipforge/config.hpp"
#include "chipforge/dataset/pipeline.hpp"
#include "chipforge/grpo.hpp"
#include "chipforge/metrics.hpp"
#include "chipforge/scoring.hpp"
#include "chipforge/toolchain/external_backend.hpp"
#include "chipforge/toolchain/mock_backend.hpp"
#include "chipforge/verilog/ppa.hpp"
#include "chipforge/worker_pool.hpp"

namespace {

using namespace chipforge;

struct ExitError {
    int code;
    std::string message;
};

std::string read_text_file(const std::string& path, int fail_code) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ExitError{fail_code, "cannot open '" + path + "'"};
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw ExitError{fail_code, "read error on '" + path + "'"};
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ExitError{1, "cannot open '" + path + "' for writing"};
    out << text;
    if (!out) throw ExitError{1, "write failed on '" + path + "'"};
}

PpaMetrics parse_ref_ppa(const std::string& spec) {
    PpaMetrics m{};
    double* slots[3] = {&m.delay_ns, &m.area_um2, &m.power_w};
    std::istringstream in(spec);
    std::string item;
    int i = 0;
    while (std::getline(in, item, ',')) {
        if (i >= 3) throw ExitError{1, "--ref-ppa needs exactly DELAY,AREA,POWER"};
        try {
            std::size_t used = 0;
            *slots[i] = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument("trailing text");
        } catch (const std::exception&) {
            throw ExitError{1, "--ref-ppa: bad number '" + item + "'"};
        }
        ++i;
    }
    if (i != 3) throw ExitError{1, "--ref-ppa needs exactly DELAY,AREA,POWER"};
    return m;
}

/// Global flags are applied on top of the config file and environment.
struct GlobalArgs {
    std::string config_path;
    std::string backend;
    int jobs = -1;
    long long seed = -1;
};

AppConfig make_config(const GlobalArgs& g) {
    auto loaded = load_config(g.config_path.empty()
                                  ? std::optional<std::string>{}
                                  : std::optional<std::string>{g.config_path});
    if (!loaded.ok()) throw ExitError{2, "config: " + loaded.error().message};
    AppConfig cfg = loaded.value();
    if (!g.backend.empty()) cfg.backend = g.backend;
    if (g.jobs >= 0) cfg.jobs = g.jobs;
    if (g.seed >= 0) {
        cfg.seed = static_cast<std::uint64_t>(g.seed);
        cfg.grpo.seed = cfg.seed;
    }
    if (auto err = validate_config(cfg)) throw ExitError{2, "config: " + err->message};
    return cfg;
}

Toolchain make_toolchain(const AppConfig& cfg) {
    std::shared_ptr<const Backend> backend;
    if (cfg.backend == "external") {
        backend = std::make_shared<ExternalBackend>(cfg.tools);
    } else {
        backend = std::make_shared<MockBackend>(verilog::ElaborateOptions{cfg.max_gates},
                                                verilog::CostModel{});
    }
    return Toolchain(std::move(backend), cfg.workspace_root);
}

std::unique_ptr<TextGenerator> make_generator(const AppConfig& cfg) {
    if (cfg.generator == "http") return std::make_unique<HttpGenerator>(cfg.http_generator);
    return std::make_unique<StubGenerator>();
}

std::size_t effective_jobs(const AppConfig& cfg) {
    return cfg.jobs > 0 ? static_cast<std::size_t>(cfg.jobs) : default_jobs();
}

std::optional<Testbench> load_testbench(const std::string& path, const std::string& kind_name) {
    if (path.empty()) return std::nullopt;
    auto kind = parse_testbench_kind(kind_name);
    if (!kind) throw ExitError{1, "unknown testbench kind '" + kind_name + "'"};
    return Testbench{*kind, read_text_file(path, 1)};
}

// ---------------------------------------------------------------- score --

struct ScoreArgs {
    std::string response_path;
    std::string testbench_path;
    std::string testbench_kind = "vector_table";
    std::string ref_ppa;
    bool json = false;
};

int run_score(const GlobalArgs& g, const ScoreArgs& a) {
    AppConfig cfg = make_config(g);
    Scorer scorer(make_toolchain(cfg), ScoringOptions{cfg.weights, cfg.gating, cfg.ppa_cap, {}});

    ScoreRequest req;
    req.response_text = read_text_file(a.response_path, 1);
    req.testbench = load_testbench(a.testbench_path, a.testbench_kind);
    if (!a.ref_ppa.empty()) req.reference_ppa = parse_ref_ppa(a.ref_ppa);
    req.timeouts = cfg.timeouts;

    auto result = scorer.score(req);
    if (!result.ok()) throw ExitError{3, result.error().message};
    const ScoreResult& r = result.value();

    if (a.json) {
        std::cout << score_result_json(r, true) << "\n";
        return 0;
    }
    std::printf("gating_mode   %s\n", gating_mode_name(r.reward.gating_mode));
    std::printf("stage_reached %s\n", stage_name(r.report.stage_reached));
    std::printf("r_format      %g\n", r.reward.r_format);
    std::printf("r_comp        %g\n", r.reward.r_comp);
    std::printf("r_func        %g\n", r.reward.r_func);
    std::printf("r_syn         %g\n", r.reward.r_syn);
    std::printf("r_ppa         %g\n", r.reward.r_ppa);
    std::printf("total         %g\n", r.reward.total);
    if (r.report.ppa) {
        std::printf("ppa           delay_ns=%g area_um2=%g power_w=%g\n", r.report.ppa->delay_ns,
                    r.report.ppa->area_um2, r.report.ppa->power_w);
    }
    return 0;
}

// ----------------------------------------------------------- eval-batch --

struct EvalBatchArgs {
    std::string tasks_path;
    std::string out_path = "-";
};

int run_eval_batch(const GlobalArgs& g, const EvalBatchArgs& a) {
    AppConfig cfg = make_config(g);
    Scorer scorer(make_toolchain(cfg), ScoringOptions{cfg.weights, cfg.gating, cfg.ppa_cap, {}});

    std::string text = read_text_file(a.tasks_path, 1);
    std::vector<std::string> ids;
    std::vector<ScoreRequest> requests;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        auto rec = record_from_json(line, lineno);
        if (!rec.ok()) {
            throw ExitError{1, a.tasks_path + ": " + rec.error().str()};
        }
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (!j.contains("response") || !j["response"].is_string()) {
            throw ExitError{1, a.tasks_path + ": line " + std::to_string(lineno) +
                                   ": missing string field 'response'"};
        }
        ScoreRequest req;
        req.response_text = j["response"].get<std::string>();
        req.testbench = rec.value().testbench;
        req.reference_ppa = rec.value().ppa_ref;
        req.timeouts = cfg.timeouts;
        ids.push_back(rec.value().id.empty() ? "line-" + std::to_string(lineno)
                                             : rec.value().id);
        requests.push_back(std::move(req));
    }

    auto results = scorer.score_batch(requests, static_cast<int>(effective_jobs(cfg)));
    std::string out;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (!results[i].ok()) throw ExitError{3, ids[i] + ": " + results[i].error().message};
        nlohmann::json j = nlohmann::json::parse(score_result_json(results[i].value(), false));
        j["id"] = ids[i];
        out += j.dump();
        out += "\n";
    }
    write_text_file(a.out_path, out);
    return 0;
}

// ---------------------------------------------------------------- train --

struct TrainArgs {
    std::string suite_path;
    std::string curves_path;
    std::string policy_path;
    std::string gnuplot_path;
};

std::vector<Task> load_suite(const std::string& path) {
    std::string text = read_text_file(path, 1);
    std::vector<Task> tasks;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        auto rec = record_from_json(line, lineno);
        if (!rec.ok()) throw ExitError{1, path + ": " + rec.error().str()};
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (!j.contains("candidates") || !j["candidates"].is_array() ||
            j["candidates"].empty()) {
            throw ExitError{1, path + ": line " + std::to_string(lineno) +
                                   ": missing non-empty array field 'candidates'"};
        }
        Task t;
        t.id = rec.value().id.empty() ? "task-" + std::to_string(lineno) : rec.value().id;
        t.instruction = rec.value().instruction;
        t.testbench = rec.value().testbench;
        t.reference_ppa = rec.value().ppa_ref;
        for (const auto& c : j["candidates"]) {
            if (!c.is_string()) {
                throw ExitError{1, path + ": line " + std::to_string(lineno) +
                                       ": candidates must be strings"};
            }
            t.candidate_pool.push_back(c.get<std::string>());
        }
        tasks.push_back(std::move(t));
    }
    if (tasks.empty()) throw ExitError{1, path + ": no tasks"};
    return tasks;
}

std::string format_curves(const std::vector<CurvePoint>& curve) {
    std::string out = "# step\tmean_reward\tmean_kl\tbest_candidate_prob\n";
    char buf[160];
    for (const auto& p : curve) {
        std::snprintf(buf, sizeof(buf), "%d\t%.9g\t%.9g\t%.9g\n", p.step, p.mean_reward,
                      p.mean_kl, p.best_candidate_prob);
        out += buf;
    }
    return out;
}

std::string gnuplot_script(const std::string& curves_path) {
    return "# gnuplot script for the training curves\n"
           "set datafile commentschars '#'\n"
           "set xlabel 'step'\n"
           "set ylabel 'mean reward / best-candidate probability'\n"
           "set y2label 'mean KL'\n"
           "set ytics nomirror\n"
           "set y2tics nomirror\n"
           "set key bottom right\n"
           "plot '" + curves_path + "' using 1:2 with lines title 'mean reward', \\\n"
           "     '" + curves_path + "' using 1:4 with lines title 'best candidate probability', \\\n"
           "     '" + curves_path + "' using 1:3 axes x1y2 with lines title 'mean KL'\n";
}

int run_train(const GlobalArgs& g, const TrainArgs& a) {
    AppConfig cfg = make_config(g);
    Scorer scorer(make_toolchain(cfg), ScoringOptions{cfg.weights, cfg.gating, cfg.ppa_cap, {}});
    std::vector<Task> tasks = load_suite(a.suite_path);

    GrpoConfig grpo_cfg = cfg.grpo;
    grpo_cfg.jobs = static_cast<int>(effective_jobs(cfg));

    // Reward evaluation may run on worker threads, so tool failures are
    // latched instead of thrown and reported after the loop.
    std::mutex mu;
    std::optional<std::string> tool_failure;
    RewardFn reward_fn = [&](const Task& task, std::size_t index) -> double {
        ScoreRequest req;
        req.response_text = task.candidate_pool[index];
        req.testbench = task.testbench;
        req.reference_ppa = task.reference_ppa;
        req.timeouts = cfg.timeouts;
        auto result = scorer.score(req);
        if (!result.ok()) {
            std::lock_guard<std::mutex> lock(mu);
            if (!tool_failure) tool_failure = result.error().message;
            return 0.0;
        }
        return result.value().reward.total;
    };

    TrainResult result = train(tasks, reward_fn, grpo_cfg);
    if (tool_failure) throw ExitError{3, *tool_failure};

    write_text_file(a.curves_path, format_curves(result.curve));
    if (!a.gnuplot_path.empty()) write_text_file(a.gnuplot_path, gnuplot_script(a.curves_path));
    if (!a.policy_path.empty()) {
        std::string out;
        for (std::size_t t = 0; t < tasks.size(); ++t) {
            nlohmann::json j;
            j["id"] = tasks[t].id;
            j["probs"] = softmax(result.policy.logits[t]);
            j["rewards"] = result.task_rewards[t];
            out += j.dump();
            out += "\n";
        }
        write_text_file(a.policy_path, out);
    }

    double final_reward = result.curve.empty() ? 0.0 : result.curve.back().mean_reward;
    std::printf("steps         %d\n", grpo_cfg.steps);
    std::printf("final_reward  %g\n", final_reward);
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        std::vector<double> probs = softmax(result.policy.logits[t]);
        std::size_t best = 0;
        const auto& rewards = result.task_rewards[t];
        for (std::size_t k = 1; k < rewards.size(); ++k) {
            if (rewards[k] > rewards[best]) best = k;
        }
        double p = rewards.empty() ? 0.0 : probs[best];
        std::printf("task %-16s best_candidate_prob %g\n", tasks[t].id.c_str(), p);
    }
    return 0;
}

// ----------------------------------------------------------------- data --

struct DataArgs {
    std::vector<std::string> sources;
    std::string in_path;
    std::string out_path;
    std::string rejects_path;
};

std::vector<DataRecord> load_records_file(const std::string& path) {
    auto parsed = parse_records(read_text_file(path, 1));
    if (!parsed.ok()) throw ExitError{1, path + ": " + parsed.error().str()};
    return parsed.value();
}

int finish_stage(const StageResult& result, const DataArgs& a) {
    write_text_file(a.out_path, render_records(result.records));
    if (!a.rejects_path.empty()) write_text_file(a.rejects_path, render_rejections(result.rejections));
    std::fprintf(stderr, "kept %zu, rejected %zu\n", result.records.size(),
                 result.rejections.size());
    if (result.aborted) {
        std::fprintf(stderr, "aborted: %s (partial results written)\n",
                     result.abort_reason.c_str());
        return 3;
    }
    return 0;
}

int run_data_ingest(const GlobalArgs& g, const DataArgs& a) {
    AppConfig cfg = make_config(g);
    DatasetPipeline pipe(make_toolchain(cfg), cfg.timeouts,
                         static_cast<int>(effective_jobs(cfg)));
    return finish_stage(pipe.ingest_corpus(a.sources), a);
}

int run_data_coldstart(const GlobalArgs& g, const DataArgs& a) {
    AppConfig cfg = make_config(g);
    DatasetPipeline pipe(make_toolchain(cfg), cfg.timeouts,
                         static_cast<int>(effective_jobs(cfg)));
    auto gen = make_generator(cfg);
    return finish_stage(pipe.generate_cold_start(load_records_file(a.in_path), *gen), a);
}

int run_data_testbench(const GlobalArgs& g, const DataArgs& a) {
    AppConfig cfg = make_config(g);
    DatasetPipeline pipe(make_toolchain(cfg), cfg.timeouts,
                         static_cast<int>(effective_jobs(cfg)));
    auto gen = make_generator(cfg);
    return finish_stage(pipe.pair_testbenches(load_records_file(a.in_path), *gen), a);
}

int run_data_ppa(const GlobalArgs& g, const DataArgs& a) {
    AppConfig cfg = make_config(g);
    DatasetPipeline pipe(make_toolchain(cfg), cfg.timeouts,
                         static_cast<int>(effective_jobs(cfg)));
    return finish_stage(pipe.annotate_ppa(load_records_file(a.in_path)), a);
}

// -------------------------------------------------------------- metrics --

struct MetricsArgs {
    std::uint64_t n = 0;
    std::uint64_t c = 0;
    std::uint64_t k = 0;
    std::string table_path;
    std::string model = "chipseek";
    double tolerance = 1e-9;
    bool json = false;
};

int run_metrics_passk(const MetricsArgs& a) {
    auto p = pass_at_k(a.n, a.c, a.k);
    if (!p.ok()) throw ExitError{1, p.error().message};
    std::printf("%.6f\n", p.value());
    return 0;
}

std::vector<DesignResult> load_table_results(const MetricsArgs& a) {
    auto rows = parse_table3(read_text_file(a.table_path, 1));
    if (!rows.ok()) throw ExitError{1, a.table_path + ": " + rows.error().message};
    auto results = design_results_from_table(rows.value(), a.model);
    if (!results.ok()) throw ExitError{1, results.error().message};
    return results.value();
}

int run_metrics_wtl(const MetricsArgs& a) {
    auto results = load_table_results(a);
    auto wtl = win_tie_loss(results, a.tolerance);
    if (!wtl.ok()) throw ExitError{1, "design '" + wtl.error().design + "' has no reference"};
    const WtlOutcome& o = wtl.value();

    if (a.json) {
        for (const auto& d : o.per_design) {
            nlohmann::json j;
            j["design"] = d.design;
            j["outcome"] = wtl_name(d.outcome);
            std::cout << j.dump() << "\n";
        }
    } else {
        std::printf("%-24s %s\n", "design", "outcome");
        for (const auto& d : o.per_design) {
            std::printf("%-24s %s\n", d.design.c_str(), wtl_name(d.outcome));
        }
    }
    std::printf("wins=%zu ties=%zu losses=%zu evaluable=%zu total=%zu\n", o.wins, o.ties,
                o.losses, o.evaluable, o.per_design.size());
    return 0;
}

int run_metrics_edap_drop(const MetricsArgs& a) {
    auto results = load_table_results(a);
    auto conv = edap_drop_conventions(results, a.tolerance);
    if (!conv.ok()) throw ExitError{1, "design '" + conv.error().design + "' has no reference"};
    const EdapDropConventions& c = conv.value();

    if (a.json) {
        nlohmann::json j;
        j["arithmetic_percent"] = c.arithmetic.mean_drop_percent;
        j["evaluated"] = c.arithmetic.evaluated;
        j["total"] = c.arithmetic.total;
        j["ratio_of_sums_percent"] = c.ratio_of_sums_percent;
        j["geometric_percent"] = c.geometric_percent;
        j["wins_only_percent"] = c.wins_only_percent;
        j["wins"] = c.wins;
        std::cout << j.dump() << "\n";
        return 0;
    }
    std::printf("arithmetic mean over evaluable designs  %8.4f%%  (%zu of %zu designs)\n",
                c.arithmetic.mean_drop_percent, c.arithmetic.evaluated, c.arithmetic.total);
    std::printf("ratio of summed EDAPs                   %8.4f%%\n", c.ratio_of_sums_percent);
    std::printf("geometric mean                          %8.4f%%\n", c.geometric_percent);
    std::printf("arithmetic mean over wins only          %8.4f%%  (%zu wins)\n",
                c.wins_only_percent, c.wins);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hierarchical-reward RTL evaluation and toy GRPO training"};
    app.fallthrough(); // global flags may appear after the subcommand name
    app.require_subcommand(1);

    GlobalArgs global;
    app.add_option("--config", global.config_path, "key=value configuration file");
    app.add_option("--backend", global.backend, "toolchain backend: mock or external");
    app.add_option("--jobs", global.jobs, "worker pool size (0 = hardware default)");
    app.add_option("--seed", global.seed, "random seed override");

    ScoreArgs score_args;
    auto* score_cmd = app.add_subcommand("score", "score one response file");
    score_cmd->add_option("--response", score_args.response_path, "response text file")
        ->required();
    score_cmd->add_option("--testbench", score_args.testbench_path, "testbench file");
    score_cmd->add_option("--testbench-kind", score_args.testbench_kind,
                          "vector_table or verilog_source");
    score_cmd->add_option("--ref-ppa", score_args.ref_ppa, "reference DELAY,AREA,POWER");
    score_cmd->add_flag("--json", score_args.json, "machine-readable output");

    EvalBatchArgs eval_args;
    auto* eval_cmd = app.add_subcommand("eval-batch", "evaluate a task file concurrently");
    eval_cmd->add_option("--tasks", eval_args.tasks_path, "task records, one JSON per line")
        ->required();
    eval_cmd->add_option("--out", eval_args.out_path, "output file ('-' for stdout)");

    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "run the toy GRPO loop");
    train_cmd->add_option("--suite", train_args.suite_path, "task suite file")->required();
    train_cmd->add_option("--out-curves", train_args.curves_path, "curve output file")
        ->required();
    train_cmd->add_option("--out-policy", train_args.policy_path, "final policy output file");
    train_cmd->add_option("--gnuplot", train_args.gnuplot_path, "emit a gnuplot script here");

    auto* data_cmd = app.add_subcommand("data", "dataset pipeline stages");
    data_cmd->require_subcommand(1);
    DataArgs ingest_args;
    auto* ingest_cmd = data_cmd->add_subcommand("ingest", "compile-filter raw Verilog");
    ingest_cmd->add_option("--sources", ingest_args.sources, "files or directories")
        ->required()
        ->expected(-1);
    ingest_cmd->add_option("--out", ingest_args.out_path, "output records file")->required();
    ingest_cmd->add_option("--rejects", ingest_args.rejects_path, "rejection log file");
    DataArgs cold_args;
    auto* cold_cmd = data_cmd->add_subcommand("coldstart", "add reasoning chains");
    cold_cmd->add_option("--in", cold_args.in_path, "input records file")->required();
    cold_cmd->add_option("--out", cold_args.out_path, "output records file")->required();
    cold_cmd->add_option("--rejects", cold_args.rejects_path, "rejection log file");
    DataArgs tb_args;
    auto* tb_cmd = data_cmd->add_subcommand("testbench", "pair and validate testbenches");
    tb_cmd->add_option("--in", tb_args.in_path, "input records file")->required();
    tb_cmd->add_option("--out", tb_args.out_path, "output records file")->required();
    tb_cmd->add_option("--rejects", tb_args.rejects_path, "rejection log file");
    DataArgs ppa_args;
    auto* ppa_cmd = data_cmd->add_subcommand("ppa", "annotate reference PPA");
    ppa_cmd->add_option("--in", ppa_args.in_path, "input records file")->required();
    ppa_cmd->add_option("--out", ppa_args.out_path, "output records file")->required();
    ppa_cmd->add_option("--rejects", ppa_args.rejects_path, "rejection log file");

    auto* metrics_cmd = app.add_subcommand("metrics", "benchmark analytics");
    metrics_cmd->require_subcommand(1);
    MetricsArgs passk_args;
    auto* passk_cmd = metrics_cmd->add_subcommand("passk", "unbiased pass@k estimator");
    passk_cmd->add_option("--n", passk_args.n, "samples")->required();
    passk_cmd->add_option("--c", passk_args.c, "passing samples")->required();
    passk_cmd->add_option("--k", passk_args.k, "draw size")->required();
    MetricsArgs wtl_args;
    auto* wtl_cmd = metrics_cmd->add_subcommand("wtl", "win-tie-loss vs references");
    wtl_cmd->add_option("--table", wtl_args.table_path, "benchmark table (TSV)")->required();
    wtl_cmd->add_option("--model", wtl_args.model, "rtlcoder, gpt4o, or chipseek");
    wtl_cmd->add_option("--tolerance", wtl_args.tolerance, "relative tie tolerance");
    wtl_cmd->add_flag("--json", wtl_args.json, "machine-readable output");
    MetricsArgs edap_args;
    auto* edap_cmd = metrics_cmd->add_subcommand("edap-drop", "EDAP drop conventions");
    edap_cmd->add_option("--table", edap_args.table_path, "benchmark table (TSV)")->required();
    edap_cmd->add_option("--model", edap_args.model, "rtlcoder, gpt4o, or chipseek");
    edap_cmd->add_option("--tolerance", edap_args.tolerance, "relative tie tolerance");
    edap_cmd->add_flag("--json", edap_args.json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (score_cmd->parsed()) return run_score(global, score_args);
        if (eval_cmd->parsed()) return run_eval_batch(global, eval_args);
        if (train_cmd->parsed()) return run_train(global, train_args);
        if (data_cmd->parsed()) {
            if (ingest_cmd->parsed()) return run_data_ingest(global, ingest_args);
            if (cold_cmd->parsed()) return run_data_coldstart(global, cold_args);
            if (tb_cmd->parsed()) return run_data_testbench(global, tb_args);
            if (ppa_cmd->parsed()) return run_data_ppa(global, ppa_args);
        }
        if (metrics_cmd->parsed()) {
            if (passk_cmd->parsed()) return run_metrics_passk(passk_args);
            if (wtl_cmd->parsed()) return run_metrics_wtl(wtl_args);
            if (edap_cmd->parsed()) return run_metrics_edap_drop(edap_args);
        }
    } catch (const ExitError& e) {
        std::fprintf(stderr, "error: %s\n", e.message.c_str());
        return e.code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
