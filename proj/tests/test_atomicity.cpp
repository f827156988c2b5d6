#include <gtest/gtest.h>

#include <random>

#include "blockeq/atomicity.hpp"
#include "blockeq/oracle.hpp"
#include "support/annotated.hpp"
#include "support/corpus.hpp"

using namespace blockeq;

namespace {

BlockSet marked(const blockeq::Run& r) { return blocks_from_annotation(r, r.marks()); }

bool monitor_accepts(const blockeq::Run& r, const Annotation& a) {
    Alphabet sigma = Alphabet::for_run(r);
    return !libat_run(sigma, sigma.letters_of(r, a)).rejected;
}

}  // namespace

TEST(Graph, NodesCoverRun) {
    blockeq::Run r = corpus_run("lib_atomicity.trace");
    BlockGraph g = block_graph(r, marked(r));
    EXPECT_EQ(g.size(), 3U);
    for (std::size_t p = 0; p < r.size(); ++p) EXPECT_GE(g.node_of[p], 0);
    blockeq::Run r2 = corpus_run("bpor.trace");
    EXPECT_EQ(block_graph(r2, marked(r2)).size(), 4U);
    EXPECT_EQ(block_graph(r2, BlockSet{}).size(), r2.size());
}

TEST(Graph, CorpusVerdicts) {
    struct Case {
        const char* file;
        bool la, cs;
    };
    for (auto [file, la, cs] : {Case{"lib_atomicity.trace", true, false}, Case{"bpor.trace", true, false},
                                Case{"fig2a.trace", true, true}, Case{"fig2b.trace", true, false},
                                Case{"bpor_intertwined.trace", false, false}, Case{"no_maximal.trace", false, false},
                                Case{"soundness.trace", true, true}}) {
        blockeq::Run r = corpus_run(file);
        EXPECT_EQ(is_liberally_atomic(r, marked(r)), la) << file;
        EXPECT_EQ(is_conflict_serializable(r, marked(r)), cs) << file;
        EXPECT_EQ(libat_accepts(r, r.marks()), la) << file;
    }
}

// Dropping blocks can break atomicity: alone, the z block must span the
// T2 r x -> T3 w x conflict, which only the x blocks could move aside.
TEST(Graph, SubsetOfAtomicSetNeedNotBeAtomic) {
    blockeq::Run r = corpus_run("lib_atomicity.trace");
    BlockSet all = marked(r);
    ASSERT_TRUE(is_liberally_atomic(r, all));
    ASSERT_TRUE(brute::liberally_atomic(r, all));
    BlockSet z_only = blocks_for_writes(r, std::vector<std::size_t>{0});
    EXPECT_FALSE(is_liberally_atomic(r, z_only));
    EXPECT_FALSE(brute::liberally_atomic(r, z_only));
    for (unsigned mask = 0; mask < 8; ++mask) {
        std::vector<std::size_t> kept;
        for (std::size_t b = 0; b < all.size(); ++b)
            if (mask >> b & 1U) kept.push_back(all[b].write);
        BlockSet sub = blocks_for_writes(r, kept);
        EXPECT_EQ(is_liberally_atomic(r, sub), brute::liberally_atomic(r, sub)) << mask;
    }
}

TEST(Graph, AgreesWithBruteForce) {
    std::mt19937 rng(41);
    int la = 0, gap = 0;
    for (int it = 0; it < 400; ++it) {
        blockeq::Run r = brute::random_run(rng, {3, 2, 7, 0.5});
        BlockSet b = brute::random_blocks(rng, r);
        bool want_la = brute::liberally_atomic(r, b);
        bool want_cs = brute::conflict_serializable(r, b);
        ASSERT_EQ(is_liberally_atomic(r, b), want_la) << format_run(r.with_marks(annotate(r, b)), true);
        ASSERT_EQ(is_conflict_serializable(r, b), want_cs) << format_run(r.with_marks(annotate(r, b)), true);
        if (want_cs) EXPECT_TRUE(want_la);
        la += want_la;
        gap += want_la && !want_cs;
    }
    EXPECT_GT(la, 100);
    EXPECT_GT(gap, 0);
}

TEST(Witness, SerialAndEquivalent) {
    std::mt19937 rng(43);
    for (int it = 0; it < 200; ++it) {
        blockeq::Run r = brute::random_run(rng, {3, 2, 7, 0.5});
        BlockSet b = brute::random_blocks(rng, r);
        if (!is_liberally_atomic(r, b)) {
            EXPECT_THROW(serial_witness(r, b), NotAtomicError);
            continue;
        }
        auto w = serial_witness(r, b);
        EXPECT_TRUE(brute::all_contiguous(w, b));
        EXPECT_TRUE(enum_block_class(r, b).contains(Linearization(w.begin(), w.end())));
    }
}

TEST(Monitor, AgreesWithGraphOnRandomRuns) {
    std::mt19937 rng(47);
    for (int it = 0; it < 3000; ++it) {
        auto [run, annot] = random_annotated(rng, {2 + static_cast<int>(rng() % 2), 2 + static_cast<int>(rng() % 2), 2 + rng() % 9, 0.5});
        ASSERT_EQ(monitor_accepts(run, annot), is_liberally_atomic(run, blocks_from_annotation(run, annot)))
            << format_run(run.with_marks(annot), true);
    }
}

TEST(Monitor, RejectionIsAbsorbing) {
    blockeq::Run r = corpus_run("bpor_intertwined.trace");
    Alphabet sigma = Alphabet::for_run(r);
    auto letters = sigma.letters_of(r, r.marks());
    LibAtState s = libat_run(sigma, letters);
    ASSERT_TRUE(s.rejected);
    EXPECT_EQ(libat_step(sigma, s, letters[0]), s);
}

TEST(Monitor, CyclesThroughUnblockedEvents) {
    // the y block must wrap the unblocked x pair in between
    blockeq::Run r = parse_run("T2 w y @\nT2 w x\nT1 w x\nT2 r x\nT1 r y @\n");
    EXPECT_EQ(libat_accepts(r, r.marks()), is_liberally_atomic(r, marked(r)));
    blockeq::Run self = parse_run("T2 w y @\nT2 w x\nT2 r x\nT1 w x\nT2 r y @\n");
    EXPECT_EQ(libat_accepts(self, self.marks()), is_liberally_atomic(self, marked(self)));
}

TEST(Monitor, SerializedWidthIndependentOfLength) {
    Alphabet sigma(2, 2);
    std::mt19937 rng(3);
    std::size_t width = serialize_state(sigma, libat_initial(sigma)).size();
    for (int it = 0; it < 30; ++it) {
        auto [run, annot] = random_annotated(rng, {2, 2, 40, 0.5});
        if (run.var_count() != 2 || run.thread_count() != 2) continue;
        EXPECT_EQ(serialize_state(sigma, libat_run(sigma, sigma.letters_of(run, annot))).size(), width);
    }
}
