// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "chipforge/dataset/generator.hpp"
#include "chipforge/dataset/records.hpp"
#include "chipforge/toolchain/pipeline.hpp"

namespace chipforge {

/// Result of one pipeline stage. `aborted` is set when the generator or a
/// required tool became unavailable; records then hold the partial results
/// completed before the abort, still in input order.
struct StageResult {
    std::vector<DataRecord> records;
    std::vector<Rejection> rejections;
    bool aborted = false;
    std::string abort_reason;
};

/// Reward-oriented data pipeline. Stages are pure functions of their input
/// record lists; every per-record work item runs on the bounded worker
/// pool and results are reassembled by index.
class DatasetPipeline {
public:
    DatasetPipeline(Toolchain toolchain, StageTimeouts timeouts, int jobs)
        : chain_(std::move(toolchain)), timeouts_(timeouts), jobs_(jobs) {}

    /// Compile-filter raw Verilog files. `sources` are files or directories
    /// (searched recursively for .v files, sorted by path). The instruction
    /// comes from a sidecar .txt next to the source when present, otherwise
    /// it is templated from the module name. Unreadable sources are logged,
    /// not fatal; duplicate normalized code keeps the first copy.
    StageResult ingest_corpus(const std::vector<std::string>& sources) const;

    /// Ask the generator for a reasoning chain per record; keep records
    /// whose (reasoning, code) rendering passes the format check, retrying
    /// each failure once with a retry-marked prompt.
    StageResult generate_cold_start(const std::vector<DataRecord>& base,
                                    TextGenerator& gen) const;

    /// Ask the generator for a testbench per record, enforce the 3..20
    /// case bound before running, then keep only records whose own code
    /// passes the generated testbench.
    StageResult pair_testbenches(const std::vector<DataRecord>& records,
                                 TextGenerator& gen) const;

    /// Synthesize each record's code for reference PPA; synthesis failures
    /// and non-positive metrics are rejected as incompatible with physical
    /// design.
    StageResult annotate_ppa(const std::vector<DataRecord>& records) const;

private:
    Toolchain chain_;
    StageTimeouts timeouts_;
    int jobs_;
};

} // namespace chipforge
