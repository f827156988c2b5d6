#pragma once

#include <boost/dynamic_bitset.hpp>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "blockeq/blocks.hpp"
#include "blockeq/trace.hpp"

namespace blockeq {

using Bits = boost::dynamic_bitset<std::uint64_t>;

// Dense strict relation over the positions of one run, kept transitively closed.
class PartialOrder {
public:
    PartialOrder() = default;
    explicit PartialOrder(std::size_t n) : succ_(n, Bits(n)) {}
    // rows[a] must already be transitively closed.
    explicit PartialOrder(std::vector<Bits> rows) : succ_(std::move(rows)) {}

    std::size_t size() const noexcept { return succ_.size(); }
    bool before(std::size_t a, std::size_t b) const { return succ_[a].test(b); }
    bool ordered(std::size_t a, std::size_t b) const { return before(a, b) || before(b, a); }
    const Bits& successors(std::size_t a) const { return succ_[a]; }

    // Inserts a -> b and everything implied by transitivity.
    void add(std::size_t a, std::size_t b);
    bool acyclic() const;
    std::size_t pair_count() const;

    PairList pairs() const;
    // Covering pairs (Hasse diagram); meaningful only on acyclic relations.
    PairList cover() const;
    bool subset_of(const PartialOrder& other) const;

    friend bool operator==(const PartialOrder&, const PartialOrder&) = default;

private:
    std::vector<Bits> succ_;
};

PartialOrder mazurkiewicz_hb(const Run& run);
PartialOrder block_hb(const Run& run, const BlockSet& blocks);

struct Saturation {
    PartialOrder order;                                   // event component of the fixed point
    std::vector<std::pair<std::size_t, std::size_t>> block_pairs;  // (B, B') block indices
    bool cyclic = false;
};

Saturation saturate(const Run& run, const BlockSet& blocks);

// Positions f with e before-or-equal f under the saturated order.
std::vector<std::size_t> after_positions(const Saturation& sat, std::size_t e);

// order[i] is the base position placed at i. Throws TraceError if order is
// not a permutation of base's positions.
bool is_proper_linearization(std::span<const std::size_t> order, const Run& base, const BlockSet& blocks);
bool is_proper_linearization(const Run& candidate, const Run& base, const BlockSet& blocks);
// Positions of candidate's events in base, matched by (label, occurrence).
std::vector<std::size_t> match_events(const Run& candidate, const Run& base);
// index[p] is the slot of base position p. True iff the blocks share a
// variable and their spans intersect.
bool blocks_overlap(std::span<const std::size_t> index, const Block& a, const Block& b);

}  // namespace blockeq
