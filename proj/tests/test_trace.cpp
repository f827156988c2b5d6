#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "blockeq/trace.hpp"
#include "support/brute.hpp"
#include "support/corpus.hpp"

using namespace blockeq;

TEST(Parse, BasicRun) {
    blockeq::Run r = parse_run("T1 w x\n# comment\n\nT2 r x @\nmain w flag  # trailing\n");
    ASSERT_EQ(r.size(), 3U);
    EXPECT_EQ(r.thread_count(), 3);
    EXPECT_EQ(r.var_count(), 2);
    EXPECT_EQ(r[1].op, Op::Read);
    EXPECT_EQ(r.thread_names()[2], "main");
    EXPECT_TRUE(r.has_marks());
    EXPECT_EQ(r.marks(), (std::vector<bool>{false, true, false}));
}

TEST(Parse, ReadWithoutWriteReportsLine) {
    try {
        parse_run("T1 w x\n\nT2 r y\n");
        FAIL() << "expected TraceError";
    } catch (const TraceError& e) {
        EXPECT_EQ(e.line(), 3);
    }
}

TEST(Parse, MalformedLines) {
    EXPECT_THROW(parse_run("T1 x x\n"), TraceError);
    EXPECT_THROW(parse_run("T1 w\n"), TraceError);
    EXPECT_THROW(parse_run("T1 w x @ extra\n"), TraceError);
    EXPECT_THROW(parse_run("1bad w x\n"), TraceError);
}

TEST(Parse, EmptyInputIsEmptyRun) { EXPECT_TRUE(parse_run("# nothing\n").empty()); }

TEST(Parse, FormatRoundTrip) {
    blockeq::Run r = corpus_run("lib_atomicity.trace");
    blockeq::Run again = parse_run(format_run(r, true));
    EXPECT_EQ(format_run(again, true), format_run(r, true));
    EXPECT_EQ(again.marks(), r.marks());
}

TEST(Parse, LabelLookup) {
    blockeq::Run r = parse_run("T1 w x\nT2 r x\n");
    EXPECT_EQ(parse_label(r, "T2 r x"), r[1]);
    EXPECT_THROW(parse_label(r, "T9 r x"), TraceError);
}

TEST(Events, OccurrenceRoundTrip) {
    blockeq::Run r = parse_run("T1 w x\nT1 w x\nT2 r x\nT1 w x\n");
    EXPECT_EQ(r.event_at(3).occurrence, 3);
    for (std::size_t i = 0; i < r.size(); ++i) EXPECT_EQ(r.position(r.event_at(i)), i);
}

TEST(ProgramOrder, SingleThreadChain) {
    blockeq::Run r = parse_run("T1 w x\nT1 r x\nT1 w y\nT1 r y\n");
    EXPECT_EQ(program_order(r).size(), 6U);
}

TEST(ProgramOrder, SeparateThreadsUnrelated) {
    EXPECT_TRUE(program_order(parse_run("T1 w x\nT2 w y\n")).empty());
}

TEST(ReadsFrom, NearestWrite) {
    blockeq::Run r = parse_run("T1 w x\nT2 r x\nT1 w x\nT2 r x\n");
    auto rf = reads_from(r);
    EXPECT_EQ(rf[1], 0U);
    EXPECT_EQ(rf[3], 2U);
    EXPECT_FALSE(rf[0].has_value());
    EXPECT_TRUE(std::ranges::none_of(reads_from(parse_run("T1 w x\nT2 w y\n")), [](auto o) { return o.has_value(); }));
}

TEST(ReadsFrom, PermutationChangingWriter) {
    blockeq::Run r = parse_run("T1 w x\nT2 r x\nT3 w x\n");
    std::vector<std::size_t> order{1, 0, 2};
    EXPECT_THROW(r.permuted(order), TraceError);  // read before any write
    std::vector<std::size_t> swap_writes{0, 2, 1};
    EXPECT_FALSE(same_equiv_rf(r, r.permuted(swap_writes)));
}

TEST(ReadsFrom, CorpusPairEquivalent) {
    blockeq::Run a = corpus_run("fig1a.trace");
    blockeq::Run b = corpus_run("fig1b.trace");
    EXPECT_TRUE(same_equiv_rf(a, b));
    EXPECT_TRUE(same_equiv_rf(a, a));
}

TEST(ReadsFrom, EquivalenceMatchesBruteClass) {
    std::mt19937 rng(5);
    for (int it = 0; it < 40; ++it) {
        blockeq::Run r = brute::random_run(rng, {3, 2, 6, 0.5});
        // compare label sequences: swapping two equal labels gives the same run
        std::set<std::vector<Label>> cls;
        for (const auto& w : brute::rf_class(r)) {
            std::vector<Label> seq;
            for (std::size_t p : w) seq.push_back(r[p]);
            cls.insert(seq);
        }
        std::vector<std::size_t> order(r.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        do {
            blockeq::Run p;
            try {
                p = r.permuted(order);
            } catch (const TraceError&) {
                continue;
            }
            std::vector<Label> seq(p.labels().begin(), p.labels().end());
            EXPECT_EQ(same_equiv_rf(r, p), cls.count(seq) > 0);
        } while (std::next_permutation(order.begin(), order.end()));
    }
}
