// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>

#include "chipforge/dataset/pipeline.hpp"
#include "chipforge/response_format.hpp"
#include "chipforge/toolchain/mock_backend.hpp"
#include "chipforge/verilog/vector_table.hpp"

using namespace chipforge;

namespace {

const char* kAndModule =
    "module and_gate(input a, input b, output y);\n  assign y = a & b;\nendmodule\n";
const char* kOrModule =
    "module or_gate(input a, input b, output y);\n  assign y = a | b;\nendmodule\n";

DatasetPipeline make_pipeline(int jobs = 2) {
    return DatasetPipeline(Toolchain(std::make_shared<MockBackend>()), StageTimeouts{}, jobs);
}

DataRecord base_record(const std::string& code, const std::string& instruction) {
    DataRecord r;
    r.code = code;
    r.instruction = instruction;
    r.id = content_hash_id(normalize_code(code));
    return r;
}

/// RAII corpus directory under the system temp root.
struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("chipforge-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    void write(const std::string& name, const std::string& text) const {
        std::ofstream out(path / name, std::ios::binary);
        out << text;
    }
};

} // namespace

// ------------------------------------------------------------- Records ---

TEST(Records, NormalizeCodeStripsCommentsAndWhitespace) {
    const std::string a = "module m(input a, output y);\n  assign y = a;\nendmodule\n";
    const std::string b =
        "// header\nmodule   m(input a,/* gap */output y);\n\n  assign y=a;  \nendmodule";
    EXPECT_EQ(normalize_code(a), normalize_code(b));
    EXPECT_NE(normalize_code(kAndModule), normalize_code(kOrModule));
}

TEST(Records, ContentHashIsStable) {
    const std::string id = content_hash_id(normalize_code(kAndModule));
    EXPECT_EQ(id.size(), 16u);
    EXPECT_EQ(id, content_hash_id(normalize_code(kAndModule)));
    EXPECT_NE(id, content_hash_id(normalize_code(kOrModule)));
    EXPECT_EQ(id.find_first_not_of("0123456789abcdef"), std::string::npos);
}

TEST(Records, FirstModuleName) {
    EXPECT_EQ(first_module_name(kAndModule).value_or(""), "and_gate");
    EXPECT_EQ(first_module_name("// module fake\nmodule real_one(input a);\n").value_or(""),
              "real_one");
    EXPECT_FALSE(first_module_name("no verilog here").has_value());
    EXPECT_FALSE(first_module_name("modulex(input a);").has_value());
}

TEST(Records, JsonRoundTripAllFields) {
    DataRecord r = base_record(kAndModule, "Implement an AND gate.");
    r.reasoning = "First, restate.\nThen, conclude.";
    r.testbench = Testbench{Testbench::Kind::VectorTable, "ports: in a[1] -> out y[1]\n"};
    r.validation_level = "statistical";
    r.ppa_ref = PpaMetrics{0.01, 1.0, 0.01};

    auto back = record_from_json(record_to_json(r));
    ASSERT_TRUE(back.ok()) << back.error().str();
    const DataRecord& q = back.value();
    EXPECT_EQ(q.id, r.id);
    EXPECT_EQ(q.instruction, r.instruction);
    EXPECT_EQ(q.code, r.code);
    EXPECT_EQ(q.reasoning, r.reasoning);
    ASSERT_TRUE(q.testbench.has_value());
    EXPECT_EQ(q.testbench->kind, Testbench::Kind::VectorTable);
    EXPECT_EQ(q.testbench->body, r.testbench->body);
    EXPECT_EQ(q.validation_level, "statistical");
    ASSERT_TRUE(q.ppa_ref.has_value());
    EXPECT_DOUBLE_EQ(q.ppa_ref->area_um2, 1.0);
}

TEST(Records, JsonOmitsAbsentFields) {
    DataRecord r = base_record(kAndModule, "i");
    const std::string j = record_to_json(r);
    EXPECT_EQ(j.find("testbench"), std::string::npos);
    EXPECT_EQ(j.find("ppa_ref"), std::string::npos);
    EXPECT_EQ(j.find("reasoning"), std::string::npos);
    EXPECT_EQ(j.find("validation_level"), std::string::npos);
}

TEST(Records, JsonRejectsMalformedInput) {
    EXPECT_FALSE(record_from_json("not json", 7).ok());
    EXPECT_EQ(record_from_json("[1,2]", 7).error().line, 7u);
    EXPECT_FALSE(record_from_json("{\"id\": 5}").ok());
    EXPECT_FALSE(record_from_json("{\"testbench\": \"x\"}").ok()); // kind missing
    EXPECT_FALSE(record_from_json("{\"testbench_kind\": \"weird\", \"testbench\": \"x\"}").ok());
    EXPECT_FALSE(record_from_json("{\"ppa_ref.delay_ns\": 1.0}").ok()); // partial triple
}

TEST(Records, ParseRecordsReportsLineNumbers) {
    const std::string text = "{\"id\": \"a\"}\n\n{\"id\": 5}\n";
    auto r = parse_records(text);
    ASSERT_FALSE(r.ok());
    EXPECT_EQ(r.error().line, 3u);
    auto ok = parse_records("{\"id\": \"a\"}\r\n{\"id\": \"b\"}\n");
    ASSERT_TRUE(ok.ok());
    EXPECT_EQ(ok->size(), 2u);
}

TEST(Records, RenderParsesBack) {
    std::vector<DataRecord> recs;
    recs.push_back(base_record(kAndModule, "one"));
    recs.push_back(base_record(kOrModule, "two"));
    auto back = parse_records(render_records(recs));
    ASSERT_TRUE(back.ok());
    ASSERT_EQ(back->size(), 2u);
    EXPECT_EQ(back->at(1).instruction, "two");
}

// ----------------------------------------------------------- Generators --

TEST(Generators, PromptProtocol) {
    const std::string rp = make_reasoning_prompt("instr", "code");
    EXPECT_EQ(rp.substr(0, std::string(kReasoningPromptHeader).size()), kReasoningPromptHeader);
    EXPECT_NE(rp.find("instr"), std::string::npos);
    EXPECT_NE(rp.find("code"), std::string::npos);
    const std::string tp = make_testbench_prompt("some code");
    EXPECT_EQ(tp.substr(0, std::string(kTestbenchPromptHeader).size()), kTestbenchPromptHeader);
}

TEST(Generators, MapGeneratorLookupAndFallback) {
    MapGenerator gen(std::map<std::string, std::string>{{"p", "r"}});
    EXPECT_EQ(gen.generate("p").value(), "r");
    auto miss = gen.generate("unknown");
    ASSERT_FALSE(miss.ok());
    EXPECT_EQ(miss.error().kind, GeneratorErrorKind::Unavailable);

    MapGenerator with_fallback({{"p", "r"}}, "default");
    EXPECT_EQ(with_fallback.generate("anything").value(), "default");
}

TEST(Generators, StubReasoningPassesFormatCheck) {
    StubGenerator gen;
    auto text = gen.generate(make_reasoning_prompt("Implement an AND gate.", kAndModule));
    ASSERT_TRUE(text.ok());
    ParsedResponse p = parse_response(
        render_response(text.value(), "```verilog\n" + std::string(kAndModule) + "\n```"));
    EXPECT_TRUE(p.format_ok);
    EXPECT_NE(text.value().find("Implement an AND gate."), std::string::npos);
}

TEST(Generators, StubTestbenchIsExhaustiveForSmallModules) {
    StubGenerator gen;
    auto text = gen.generate(make_testbench_prompt(kAndModule));
    ASSERT_TRUE(text.ok());
    auto table = verilog::parse_vector_table(text.value());
    ASSERT_TRUE(table.ok()) << text.value();
    EXPECT_EQ(table->case_count(), 4u); // 2 input bits, exhaustive
    // The oracle fills expected outputs from the design semantics.
    for (const auto& row : table->rows) {
        const std::uint64_t a = row.in_values[0].to_uint64();
        const std::uint64_t b = row.in_values[1].to_uint64();
        EXPECT_EQ(row.out_values[0].to_uint64(), a & b);
    }
}

TEST(Generators, StubTestbenchSamplesWideModules) {
    const std::string wide =
        "module w(input [7:0] a, input [7:0] b, output [8:0] s);\n"
        "  assign s = a + b;\nendmodule\n";
    StubGenerator gen;
    auto text = gen.generate(make_testbench_prompt(wide));
    ASSERT_TRUE(text.ok());
    auto table = verilog::parse_vector_table(text.value());
    ASSERT_TRUE(table.ok());
    EXPECT_EQ(table->case_count(), 8u); // sampled, not 2^16
    for (const auto& row : table->rows) {
        EXPECT_EQ(row.out_values[0].to_uint64(),
                  row.in_values[0].to_uint64() + row.in_values[1].to_uint64());
    }
    // Deterministic per module content.
    EXPECT_EQ(gen.generate(make_testbench_prompt(wide)).value(), text.value());
}

TEST(Generators, StubTestbenchPadsTinyDomains) {
    const std::string tiny = "module inv(input a, output y);\n  assign y = ~a;\nendmodule\n";
    StubGenerator gen;
    auto table = verilog::parse_vector_table(gen.generate(make_testbench_prompt(tiny)).value());
    ASSERT_TRUE(table.ok());
    EXPECT_GE(table->case_count(), 3u); // padded above the exhaustive 2
}

TEST(Generators, StubTestbenchOnUnparsableCode) {
    StubGenerator gen;
    auto text = gen.generate(make_testbench_prompt("module broken(input a"));
    ASSERT_TRUE(text.ok()); // the failure is carried as a non-table comment
    EXPECT_FALSE(verilog::parse_vector_table(text.value()).ok());
}

// ---------------------------------------------------------- Ingest stage --

TEST(Ingest, CompileFilterSidecarAndDedup) {
    TempDir dir;
    dir.write("a_and.v", kAndModule);
    dir.write("a_and.txt", "Build the AND gate.\n");
    dir.write("b_or.v", kOrModule);
    dir.write("c_dup.v", "// same netlist, new comment\n" + std::string(kAndModule));
    dir.write("d_broken.v", "module broken(input a, output y)\n  assign y = a;\n");
    dir.write("notes.md", "not verilog");

    StageResult r = make_pipeline().ingest_corpus({dir.path.string()});
    EXPECT_FALSE(r.aborted);
    ASSERT_EQ(r.records.size(), 2u);
    EXPECT_EQ(r.records[0].instruction, "Build the AND gate."); // sidecar, newline stripped
    EXPECT_EQ(r.records[1].instruction,
              "Implement the Verilog module 'or_gate' with the documented interface.");
    ASSERT_EQ(r.rejections.size(), 2u);
    bool saw_dup = false, saw_compile = false;
    for (const auto& rej : r.rejections) {
        if (rej.reason.find("duplicate of record " + r.records[0].id) != std::string::npos)
            saw_dup = true;
        if (rej.reason.find("compile check failed") != std::string::npos) saw_compile = true;
    }
    EXPECT_TRUE(saw_dup);
    EXPECT_TRUE(saw_compile);
}

TEST(Ingest, MissingSourceIsARejection) {
    StageResult r = make_pipeline().ingest_corpus({"/nonexistent/path/xyz"});
    EXPECT_FALSE(r.aborted);
    EXPECT_TRUE(r.records.empty());
    ASSERT_EQ(r.rejections.size(), 1u);
    EXPECT_NE(r.rejections[0].reason.find("not a readable file or directory"),
              std::string::npos);
}

TEST(Ingest, SingleFileSource) {
    TempDir dir;
    dir.write("one.v", kAndModule);
    StageResult r = make_pipeline().ingest_corpus({(dir.path / "one.v").string()});
    ASSERT_EQ(r.records.size(), 1u);
    EXPECT_EQ(r.records[0].id, content_hash_id(normalize_code(kAndModule)));
}

// ------------------------------------------------------- Coldstart stage --

TEST(Coldstart, RetryRecoversFromStrayTag) {
    DataRecord rec = base_record(kAndModule, "Implement an AND gate.");
    const std::string prompt = make_reasoning_prompt(rec.instruction, rec.code);
    MapGenerator gen({
        {prompt, "broken </think> reasoning"},
        {prompt + kRetryPromptSuffix, "clean reasoning after retry"},
    });
    StageResult r = make_pipeline().generate_cold_start({rec}, gen);
    EXPECT_FALSE(r.aborted);
    ASSERT_EQ(r.records.size(), 1u);
    EXPECT_EQ(r.records[0].reasoning, "clean reasoning after retry");
}

TEST(Coldstart, PersistentFormatFailureRejects) {
    DataRecord rec = base_record(kAndModule, "i");
    const std::string prompt = make_reasoning_prompt(rec.instruction, rec.code);
    MapGenerator gen({
        {prompt, "bad </answer>"},
        {prompt + kRetryPromptSuffix, "still bad </think>"},
    });
    StageResult r = make_pipeline().generate_cold_start({rec}, gen);
    EXPECT_FALSE(r.aborted);
    EXPECT_TRUE(r.records.empty());
    ASSERT_EQ(r.rejections.size(), 1u);
    EXPECT_EQ(r.rejections[0].reason, "reasoning failed the response format check after retry");
}

TEST(Coldstart, GeneratorOutageAborts) {
    MapGenerator gen; // no entries, no fallback
    StageResult r = make_pipeline().generate_cold_start({base_record(kAndModule, "i")}, gen);
    EXPECT_TRUE(r.aborted);
    EXPECT_NE(r.abort_reason.find("generator unavailable"), std::string::npos);
}

TEST(Coldstart, StubGeneratorKeepsEveryRecord) {
    StubGenerator gen;
    std::vector<DataRecord> base = {base_record(kAndModule, "Implement an AND gate."),
                                    base_record(kOrModule, "Implement an OR gate.")};
    StageResult r = make_pipeline().generate_cold_start(base, gen);
    EXPECT_FALSE(r.aborted);
    ASSERT_EQ(r.records.size(), 2u);
    EXPECT_FALSE(r.records[0].reasoning.empty());
}

// ------------------------------------------------------- Testbench stage --

TEST(Testbench, StubPairingValidatesAndMarksStatistical) {
    StubGenerator gen;
    StageResult r = make_pipeline().pair_testbenches({base_record(kAndModule, "i")}, gen);
    EXPECT_FALSE(r.aborted);
    ASSERT_EQ(r.records.size(), 1u);
    ASSERT_TRUE(r.records[0].testbench.has_value());
    EXPECT_EQ(r.records[0].validation_level, "statistical");
}

TEST(Testbench, WrongTableIsRejectedBySelfCheck) {
    DataRecord rec = base_record(kOrModule, "i");
    // An AND truth table over the OR module's ports: row a=1 b=0 -> y=0 fails.
    MapGenerator gen(std::map<std::string, std::string>{
        {make_testbench_prompt(rec.code),
         "ports: in a[1] b[1] -> out y[1]\n"
         "a=0 b=0 -> y=0\na=0 b=1 -> y=0\na=1 b=0 -> y=0\na=1 b=1 -> y=1\n"}});
    StageResult r = make_pipeline().pair_testbenches({rec}, gen);
    ASSERT_EQ(r.rejections.size(), 1u);
    EXPECT_NE(r.rejections[0].reason.find("code fails its own generated testbench"),
              std::string::npos);
}

TEST(Testbench, CaseCountBoundsAreEnforced) {
    DataRecord rec = base_record(kAndModule, "i");
    MapGenerator two_cases(std::map<std::string, std::string>{
        {make_testbench_prompt(rec.code), "ports: in a[1] b[1] -> out y[1]\n"
                                          "a=0 b=0 -> y=0\na=1 b=1 -> y=1\n"}});
    StageResult r = make_pipeline().pair_testbenches({rec}, two_cases);
    ASSERT_EQ(r.rejections.size(), 1u);
    EXPECT_EQ(r.rejections[0].reason, "testbench case count 2 outside [3, 20]");

    std::string many = "ports: in a[1] b[1] -> out y[1]\n";
    for (int i = 0; i < 21; ++i) many += "a=0 b=0 -> y=0\n";
    MapGenerator too_many(std::map<std::string, std::string>{
        {make_testbench_prompt(rec.code), many}});
    StageResult r2 = make_pipeline().pair_testbenches({rec}, too_many);
    ASSERT_EQ(r2.rejections.size(), 1u);
    EXPECT_EQ(r2.rejections[0].reason, "testbench case count 21 outside [3, 20]");
}

TEST(Testbench, UnparsableTableIsRejected) {
    DataRecord rec = base_record(kAndModule, "i");
    MapGenerator gen(std::map<std::string, std::string>{
        {make_testbench_prompt(rec.code), "# cannot build a vector table"}});
    StageResult r = make_pipeline().pair_testbenches({rec}, gen);
    ASSERT_EQ(r.rejections.size(), 1u);
    EXPECT_NE(r.rejections[0].reason.find("generated testbench rejected"), std::string::npos);
}

// ------------------------------------------------------------- PPA stage --

TEST(AnnotatePpa, FillsMockMetrics) {
    StubGenerator gen;
    DatasetPipeline pipe = make_pipeline();
    StageResult tb = pipe.pair_testbenches({base_record(kAndModule, "i")}, gen);
    ASSERT_EQ(tb.records.size(), 1u);
    StageResult r = pipe.annotate_ppa(tb.records);
    EXPECT_FALSE(r.aborted);
    ASSERT_EQ(r.records.size(), 1u);
    ASSERT_TRUE(r.records[0].ppa_ref.has_value());
    EXPECT_DOUBLE_EQ(r.records[0].ppa_ref->delay_ns, 0.01);
    EXPECT_DOUBLE_EQ(r.records[0].ppa_ref->area_um2, 1.0);
    EXPECT_DOUBLE_EQ(r.records[0].ppa_ref->power_w, 0.01);
}

TEST(AnnotatePpa, RecordWithoutTestbenchIsRejected) {
    StageResult r = make_pipeline().annotate_ppa({base_record(kAndModule, "i")});
    ASSERT_EQ(r.rejections.size(), 1u);
    EXPECT_EQ(r.rejections[0].reason, "record carries no validated testbench");
}

TEST(AnnotatePpa, SynthesisFailureUsesIncompatibilityReason) {
    // A zero gate budget makes synthesis fail while compile and the
    // 3-case testbench still pass (functional simulation elaborates with
    // the default budget).
    DatasetPipeline pipe(
        Toolchain(std::make_shared<MockBackend>(verilog::ElaborateOptions{0},
                                                verilog::CostModel{})),
        StageTimeouts{}, 1);
    DataRecord rec = base_record(kAndModule, "i");
    rec.testbench = Testbench{Testbench::Kind::VectorTable,
                              "ports: in a[1] b[1] -> out y[1]\n"
                              "a=0 b=0 -> y=0\na=1 b=0 -> y=0\na=1 b=1 -> y=1\n"};
    StageResult r = pipe.annotate_ppa({rec});
    ASSERT_EQ(r.rejections.size(), 1u);
    EXPECT_EQ(r.rejections[0].reason.find("incompatibility of synthesis and physical design:"),
              0u);
}
