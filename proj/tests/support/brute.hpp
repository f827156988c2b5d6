#pragma once

// Slow reference implementations for tests. They work on position
// sequences of a base run and share no code with the core oracles.

#include <cstddef>
#include <random>
#include <set>
#include <vector>

#include "blockeq/blocks.hpp"
#include "blockeq/oracle.hpp"
#include "blockeq/trace.hpp"

namespace brute {

using Word = std::vector<std::size_t>;  // base positions in run order
using WordSet = std::set<Word>;

struct RunShape {
    int threads = 2;
    int vars = 2;
    std::size_t events = 6;
    double write_bias = 0.5;
};

blockeq::Run random_run(std::mt19937& rng, const RunShape& shape);
// Each write is kept as a block with probability one half.
blockeq::BlockSet random_blocks(std::mt19937& rng, const blockeq::Run& run);
std::vector<std::size_t> writes_of(const blockeq::Run& run);
blockeq::BlockSet subset_blocks(const blockeq::Run& run, unsigned mask);

// Every permutation keeping the order of each dependent pair.
WordSet maz_class(const blockeq::Run& run);
// Every permutation keeping program order and the writer of each read.
WordSet rf_class(const blockeq::Run& run);
// Closure of the run under adjacent event swaps and adjacent block swaps.
WordSet block_class(const blockeq::Run& run, const blockeq::BlockSet& blocks);

bool all_contiguous(const Word& w, const blockeq::BlockSet& blocks);
bool liberally_atomic(const blockeq::Run& run, const blockeq::BlockSet& blocks);
bool conflict_serializable(const blockeq::Run& run, const blockeq::BlockSet& blocks);

// e placed after f in some member.
bool inverted(const WordSet& cls, std::size_t e, std::size_t f);
// Some pair e < f with labels c and d is inverted in some member.
bool labels_inverted(const blockeq::Run& run, const WordSet& cls, const blockeq::Label& c,
                     const blockeq::Label& d);

std::vector<blockeq::Linearization> as_linearizations(const WordSet& cls);

}  // namespace brute
