#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "blockeq/blocks.hpp"
#include "blockeq/orders.hpp"
#include "blockeq/sat.hpp"
#include "blockeq/trace.hpp"

namespace blockeq {

// Nodes are the blocks in BlockSet order, then one singleton per unblocked
// event in run order.
struct BlockGraph {
    std::vector<std::vector<std::size_t>> nodes;       // member positions, ascending
    std::vector<int> node_of;                          // per run position
    std::vector<std::vector<std::size_t>> successors;  // sorted, no self loops

    std::size_t size() const noexcept { return nodes.size(); }
    bool acyclic() const;
    // Nodes in a topological order. Ties go to the lowest rank, or to the
    // smallest first position when rank is empty. Empty when cyclic.
    std::vector<std::size_t> topological_order(std::span<const std::size_t> rank = {}) const;
};

BlockGraph block_graph(const Run& run, const BlockSet& blocks);
// Same node set, edges from the unrestricted conflict order.
BlockGraph conflict_graph(const Run& run, const BlockSet& blocks);

bool is_liberally_atomic(const Run& run, const BlockSet& blocks);
bool is_conflict_serializable(const Run& run, const BlockSet& blocks);

class NotAtomicError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An equivalent run in which every block is contiguous, as base positions.
// Throws NotAtomicError when the block graph has a cycle.
// node_rank breaks ties between ready nodes of block_graph(run, blocks).
std::vector<std::size_t> serial_witness(const Run& run, const BlockSet& blocks,
                                        std::span<const std::size_t> node_rank = {});

// Streaming liberal atomicity check over an annotated word.
struct LibAtState {
    bool rejected = false;
    SatState sat;
    std::vector<int> active;  // per variable: write letter of the last annotated block, or kNoLetter
    Bits edges;               // variables x*X + y for an edge x -> y

    friend bool operator==(const LibAtState&, const LibAtState&) = default;
};

LibAtState libat_initial(const Alphabet& sigma);
// Throws TraceError on a malformed stream. A rejected state is returned unchanged.
LibAtState libat_step(const Alphabet& sigma, const LibAtState& state, Letter a);
LibAtState libat_run(const Alphabet& sigma, std::span<const Letter> word);
bool libat_accepts(const Run& run, const Annotation& annot);

std::vector<std::uint8_t> serialize_state(const Alphabet& sigma, const LibAtState& state);

}  // namespace blockeq
