#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "blockeq/trace.hpp"

namespace blockeq {

// A write together with every read observing it, keyed by the write.
struct Block {
    std::size_t write = 0;
    std::vector<std::size_t> reads;  // ascending positions
    int var = 0;

    std::size_t size() const noexcept { return reads.size() + 1; }
    std::vector<std::size_t> members() const;  // write first, then reads

    friend bool operator==(const Block&, const Block&) = default;
};

class BlockError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Pairwise disjoint set of valid blocks over one run, ordered by write position.
class BlockSet {
public:
    BlockSet() = default;
    // Throws BlockError if some block is invalid for the run or two overlap.
    BlockSet(const Run& run, std::vector<Block> blocks);

    std::size_t size() const noexcept { return blocks_.size(); }
    bool empty() const noexcept { return blocks_.empty(); }
    const Block& operator[](std::size_t i) const { return blocks_[i]; }
    std::span<const Block> blocks() const noexcept { return blocks_; }

    // Index of the block containing pos, or -1.
    int block_of(std::size_t pos) const { return pos < owner_.size() ? owner_[pos] : -1; }
    bool contains(std::size_t pos) const { return block_of(pos) >= 0; }
    std::size_t run_size() const noexcept { return owner_.size(); }

    int thread_of(std::size_t block, const Run& run) const { return run[blocks_[block].write].thread; }
    std::vector<int> threads_of(std::size_t block, const Run& run) const;
    std::vector<std::size_t> writes() const;

    friend bool operator==(const BlockSet&, const BlockSet&) = default;

private:
    std::vector<Block> blocks_;
    std::vector<int> owner_;
};

struct AnnotatedLabel {
    Label base;
    bool top = false;

    friend auto operator<=>(const AnnotatedLabel&, const AnnotatedLabel&) = default;
};

using Annotation = std::vector<bool>;

// One candidate per write: the write plus exactly the reads observing it.
std::vector<Block> candidate_blocks(const Run& run);
BlockSet all_blocks(const Run& run);
// Candidate blocks of the given write positions; throws BlockError on a non-write.
BlockSet blocks_for_writes(const Run& run, std::span<const std::size_t> writes);

Annotation annotate(const Run& run, const BlockSet& blocks);
std::vector<AnnotatedLabel> annotated_labels(const Run& run, const Annotation& annot);
bool is_well_annotated(const Run& run, const Annotation& annot);
// Throws BlockError if the annotation is not well formed.
BlockSet blocks_from_annotation(const Run& run, const Annotation& annot);

}  // namespace blockeq
