#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "blockeq/atomicity.hpp"
#include "blockeq/concurrency.hpp"
#include "blockeq/oracle.hpp"
#include "blockeq/sat.hpp"

using namespace blockeq;

namespace {

// Marked blocks come out whole, so the atomicity monitor never rejects.
std::vector<Letter> serial_word(const Alphabet& sigma, std::size_t len, unsigned seed) {
    std::mt19937 rng(seed);
    std::vector<int> last(static_cast<std::size_t>(sigma.vars()), 0);  // 0 none, 1 unmarked, 2 marked
    std::uniform_int_distribution<int> thread(0, sigma.threads() - 1), var(0, sigma.vars() - 1), reads(0, 2);
    std::vector<Letter> word;
    while (word.size() < len) {
        const int t = thread(rng), x = var(rng);
        if (rng() % 2) {
            word.push_back(sigma.letter({t, Op::Write, x}, true));
            for (int i = reads(rng); i > 0 && word.size() < len; --i)
                word.push_back(sigma.letter({thread(rng), Op::Read, x}, true));
            last[x] = 2;
        } else if (last[x] == 1 && rng() % 2) {
            word.push_back(sigma.letter({t, Op::Read, x}, false));
        } else {
            word.push_back(sigma.letter({t, Op::Write, x}, false));
            last[x] = 1;
        }
    }
    return word;
}

// n rounds of write/read blocks on one variable, alternating two threads.
Run rounds(int n) {
    std::string text;
    for (int i = 0; i < n; ++i) text += "T1 w x @\nT1 r x @\nT2 w x @\nT2 r x @\n";
    return parse_run(text);
}

void BM_SatStep(benchmark::State& st) {
    const Alphabet sigma(3, 3);
    const auto prefix = static_cast<std::size_t>(st.range(0));
    const auto word = serial_word(sigma, prefix + 1, 7);
    const SatState s = sat_run(sigma, std::span(word).first(prefix));
    for (auto _ : st) benchmark::DoNotOptimize(sat_step(sigma, s, word[prefix]));
}
BENCHMARK(BM_SatStep)->Arg(10)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_LibAtStep(benchmark::State& st) {
    const Alphabet sigma(3, 3);
    const auto prefix = static_cast<std::size_t>(st.range(0));
    const auto word = serial_word(sigma, prefix + 1, 7);
    const LibAtState s = libat_run(sigma, std::span(word).first(prefix));
    for (auto _ : st) benchmark::DoNotOptimize(libat_step(sigma, s, word[prefix]));
}
BENCHMARK(BM_LibAtStep)->Arg(10)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_ConcBlocks(benchmark::State& st) {
    const Run r = rounds(static_cast<int>(st.range(0)));
    const Label c = parse_label(r, "T1 w x"), d = parse_label(r, "T2 w x");
    for (auto _ : st) benchmark::DoNotOptimize(conc_symbols_blocks(r, r.marks(), c, d));
}
BENCHMARK(BM_ConcBlocks)->Arg(2)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Saturate(benchmark::State& st) {
    const Run r = rounds(static_cast<int>(st.range(0)));
    const BlockSet b = blocks_from_annotation(r, r.marks());
    for (auto _ : st) benchmark::DoNotOptimize(saturate(r, b));
}
BENCHMARK(BM_Saturate)->Arg(2)->Arg(8)->Arg(32)->Unit(benchmark::kMicrosecond);

void BM_EnumBlockClass(benchmark::State& st) {
    const Run r = rounds(static_cast<int>(st.range(0)));
    const BlockSet b = blocks_from_annotation(r, r.marks());
    for (auto _ : st) benchmark::DoNotOptimize(enum_block_class(r, b));
}
BENCHMARK(BM_EnumBlockClass)->DenseRange(1, 3)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
