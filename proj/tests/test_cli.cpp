#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#ifndef BLOCKEQ_CLI
#error "BLOCKEQ_CLI must name the blockeq executable"
#endif

namespace {

struct Result {
    int code = -1;
    std::string out;
};

// Runs the tool with stderr folded into the captured text.
Result run(const std::string& args) {
    std::string cmd = std::string("cd '") + BLOCKEQ_CORPUS_DIR + "' && '" + BLOCKEQ_CLI + "' " + args + " 2>&1";
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

}  // namespace

TEST(Cli, Validate) {
    auto r = run("validate lib_atomicity.trace");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "ok: 6 events, 3 threads, 2 variables\n");
}

TEST(Cli, ValidateStdinAndErrors) {
    EXPECT_EQ(run("validate - < fig2a.trace").code, 0);
    std::string orphan = testing::TempDir() + "orphan.trace";
    std::ofstream(orphan) << "T1 w x\nT1 r y\n";
    auto bad = run("validate - < '" + orphan + "'");
    EXPECT_EQ(bad.code, 2);
    EXPECT_EQ(bad.out, "error: -: line 2: read of 'y' has no preceding write\n");
    auto missing = run("validate no_such.trace");
    EXPECT_EQ(missing.code, 2);
    EXPECT_NE(missing.out.find("error: cannot open"), std::string::npos);
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("validate").code, 2);
}

TEST(Cli, HappensBeforeGolden) {
    EXPECT_EQ(run("hb bpo_counterexample.trace").out, "e1 -> e2\ne2 -> e3\ne3 -> e4\n");
    EXPECT_EQ(run("bhb bpo_counterexample.trace").out, "e1 -> e2\ne3 -> e4\n");
    EXPECT_EQ(run("bhb bpo_counterexample.trace --format json-lines").out,
              "{\"from\":1,\"to\":2}\n{\"from\":3,\"to\":4}\n");
    auto dot = run("bhb bpo_counterexample.trace --format dot").out;
    EXPECT_EQ(dot.rfind("digraph", 0), 0U) << dot;
}

TEST(Cli, BhbUnsaturated) {
    auto r = run("bhb soundness.trace --unsaturated --format json-lines");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.find("{\"from\":6,\"to\":8}"), std::string::npos);
    EXPECT_NE(run("bhb soundness.trace").out, run("bhb soundness.trace --unsaturated").out);
}

TEST(Cli, Atomicity) {
    auto r = run("atomicity lib_atomicity.trace");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "liberally-atomic: yes\nconflict-serializable: no\n");
    auto no = run("atomicity bpor_intertwined.trace");
    EXPECT_EQ(no.code, 1);
    EXPECT_EQ(no.out, "liberally-atomic: no\nconflict-serializable: no\n");
    EXPECT_EQ(run("atomicity bpor_intertwined.trace --blocks writes=1,6").code, 0);
    EXPECT_EQ(run("atomicity bpor_intertwined.trace --blocks writes=3").code, 2);
    auto w = run("atomicity lib_atomicity.trace --witness");
    EXPECT_NE(w.out.find("witness:\n"), std::string::npos);
}

TEST(Cli, Concurrent) {
    auto maz = run("concurrent fig1a.trace --c 'T1 r x' --d 'T2 w x' --mode maz");
    EXPECT_EQ(maz.code, 1);
    EXPECT_EQ(maz.out, "ordered\n");
    auto blk = run("concurrent blocks_example.trace --events 1 8 --mode blocks");
    EXPECT_EQ(blk.code, 0);
    EXPECT_EQ(blk.out, "concurrent\n");
    EXPECT_EQ(run("concurrent blocks_example.trace --events 1 8 --mode maz").code, 1);
    EXPECT_EQ(run("concurrent no_maximal.trace --c 'T2 w x' --d 'T3 w x' --mode general").code, 0);
    EXPECT_EQ(run("concurrent no_maximal.trace --c 'T2 w x' --d 'T3 w x' --mode general --streaming").code, 0);
    EXPECT_EQ(run("concurrent no_maximal.trace --c 'T9 w x' --d 'T3 w x'").code, 2);
}

TEST(Cli, Enumerate) {
    auto r = run("enumerate conciseness_n2.trace --relation blocks --limit 0");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "members: 6\n");
    EXPECT_EQ(run("enumerate conciseness_n2.trace --relation maz --limit 0").out, "members: 1\n");
    auto bound = run("enumerate conciseness_n3.trace --relation maz --max-swap-events 4");
    EXPECT_EQ(bound.code, 3);
    EXPECT_EQ(bound.out.rfind("error:", 0), 0U);
}

TEST(Cli, GenHardness) {
    auto r = run("gen-hardness --a 01 --b 01 --check");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("# ordered: yes, reduction holds"), std::string::npos) << r.out;
    EXPECT_NE(run("gen-hardness --a 01 --b 10 --check").out.find("# ordered: no, reduction holds"), std::string::npos);
    EXPECT_EQ(run("gen-hardness --a 01 --b 1").code, 2);
}

TEST(Cli, AnnotateAndSat) {
    EXPECT_EQ(run("annotate lib_atomicity.trace --blocks none").out,
              "T2 w z\nT1 w x\nT2 r x\nT3 w x\nT3 r x\nT3 r z\n");
    auto sat = run("sat bpo_counterexample.trace --dump-state-every 4");
    EXPECT_EQ(sat.code, 0);
    EXPECT_NE(sat.out.find("--- after 4 events\n"), std::string::npos);
    EXPECT_NE(sat.out.find("RF(x) = T2 w x @\n"), std::string::npos);
}

TEST(Cli, ConfigFile) {
    auto r = run("--config /dev/null validate fig2a.trace");
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.out.rfind("error:", 0), 0U);
}

TEST(Cli, Deterministic) {
    EXPECT_EQ(run("enumerate proper_inclusion_a.trace --relation rf").out,
              run("enumerate proper_inclusion_a.trace --relation rf").out);
    EXPECT_EQ(run("atomicity fig2b.trace --witness --seed 7").out, run("atomicity fig2b.trace --witness --seed 7").out);
}
