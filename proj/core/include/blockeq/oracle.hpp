#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "blockeq/blocks.hpp"
#include "blockeq/orders.hpp"
#include "blockeq/trace.hpp"

namespace blockeq {

// A member of a class as the sequence of base positions it visits.
using Linearization = std::vector<std::uint8_t>;

enum class Relation { Maz, Block, ReadsFrom };

class OracleBoundExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OracleBounds {
    std::size_t swap_events = 12;  // maz and block BFS
    std::size_t rf_events = 22;    // interleaving filter
    std::size_t max_members = 2'000'000;
};

struct EquivClass {
    Run representative;
    Relation relation = Relation::Maz;
    std::vector<Linearization> members;  // sorted, unique

    std::size_t size() const noexcept { return members.size(); }
    bool contains(const Linearization& m) const;
    bool subset_of(const EquivClass& other) const;
};

Linearization identity_linearization(std::size_t n);
std::vector<std::size_t> to_order(const Linearization& lin);

EquivClass enum_maz_class(const Run& run, const OracleBounds& bounds = {});
EquivClass enum_block_class(const Run& run, const BlockSet& blocks, const OracleBounds& bounds = {});
EquivClass enum_rf_class(const Run& run, const OracleBounds& bounds = {});
// Streams members of the rf class without storing them; visit returns false to stop.
void for_each_rf_member(const Run& run, const std::function<bool(const Linearization&)>& visit,
                        const OracleBounds& bounds = {});

std::vector<Linearization> proper_linearizations(const Run& run, const BlockSet& blocks,
                                                 const OracleBounds& bounds = {});

class StuckError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// priority[p] ranks base position p; lower goes first among eligible events.
std::vector<std::size_t> proper_topological_sort(const Run& run, const BlockSet& blocks,
                                                 std::span<const std::size_t> priority);

PartialOrder intersection_order(const EquivClass& cls);
// Exact count; n must stay below 25 or so.
std::uint64_t count_linearizations(const PartialOrder& order);

enum class ScopeOutcome { Holds, Violated, PreconditionUnmet };

// u = v . w . e . w' where |v| = v_len, |w| = w_len and e sits at v_len + w_len.
ScopeOutcome check_scope(const Run& run, const BlockSet& blocks, std::size_t v_len, std::size_t w_len,
                         const OracleBounds& bounds = {});

}  // namespace blockeq
