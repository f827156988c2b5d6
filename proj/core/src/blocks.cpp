#include "blockeq/blocks.hpp"

#include <algorithm>
#include <string>

namespace blockeq {

std::vector<std::size_t> Block::members() const {
    std::vector<std::size_t> out;
    out.reserve(size());
    out.push_back(write);
    out.insert(out.end(), reads.begin(), reads.end());
    return out;
}

std::vector<Block> candidate_blocks(const Run& run) {
    std::vector<Block> out;
    std::vector<int> index(run.size(), -1);
    for (std::size_t i = 0; i < run.size(); ++i) {
        if (run[i].op == Op::Write) {
            index[i] = static_cast<int>(out.size());
            out.push_back({i, {}, run[i].var});
        } else {
            out[index[*run.writer(i)]].reads.push_back(i);
        }
    }
    return out;
}

BlockSet::BlockSet(const Run& run, std::vector<Block> blocks)
    : blocks_(std::move(blocks)), owner_(run.size(), -1) {
    std::sort(blocks_.begin(), blocks_.end(), [](const Block& a, const Block& b) { return a.write < b.write; });
    auto candidates = candidate_blocks(run);
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const Block& blk = blocks_[b];
        if (blk.write >= run.size() || run[blk.write].op != Op::Write)
            throw BlockError("block at position " + std::to_string(blk.write + 1) + " does not start with a write");
        auto it = std::find_if(candidates.begin(), candidates.end(),
                               [&](const Block& c) { return c.write == blk.write; });
        if (*it != blk)
            throw BlockError("block of write " + std::to_string(blk.write + 1) +
                             " must contain exactly the reads observing it");
        for (std::size_t m : blk.members()) {
            if (owner_[m] >= 0) throw BlockError("blocks overlap at position " + std::to_string(m + 1));
            owner_[m] = static_cast<int>(b);
        }
    }
}

std::vector<int> BlockSet::threads_of(std::size_t block, const Run& run) const {
    std::vector<int> out;
    for (std::size_t m : blocks_[block].members()) out.push_back(run[m].thread);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::size_t> BlockSet::writes() const {
    std::vector<std::size_t> out;
    for (const Block& b : blocks_) out.push_back(b.write);
    return out;
}

BlockSet all_blocks(const Run& run) { return BlockSet(run, candidate_blocks(run)); }

BlockSet blocks_for_writes(const Run& run, std::span<const std::size_t> writes) {
    auto candidates = candidate_blocks(run);
    std::vector<Block> chosen;
    for (std::size_t w : writes) {
        auto it = std::find_if(candidates.begin(), candidates.end(), [&](const Block& c) { return c.write == w; });
        if (it == candidates.end())
            throw BlockError("position " + std::to_string(w + 1) + " is not a write");
        chosen.push_back(*it);
    }
    return BlockSet(run, std::move(chosen));
}

Annotation annotate(const Run& run, const BlockSet& blocks) {
    if (blocks.run_size() != run.size() && !blocks.empty()) throw BlockError("block set belongs to another run");
    Annotation out(run.size(), false);
    for (std::size_t i = 0; i < run.size(); ++i) out[i] = blocks.contains(i);
    return out;
}

std::vector<AnnotatedLabel> annotated_labels(const Run& run, const Annotation& annot) {
    std::vector<AnnotatedLabel> out;
    out.reserve(run.size());
    for (std::size_t i = 0; i < run.size(); ++i) out.push_back({run[i], annot[i]});
    return out;
}

bool is_well_annotated(const Run& run, const Annotation& annot) {
    if (annot.size() != run.size()) return false;
    for (std::size_t i = 0; i < run.size(); ++i)
        if (auto w = run.writer(i); w && annot[i] != annot[*w]) return false;
    return true;
}

BlockSet blocks_from_annotation(const Run& run, const Annotation& annot) {
    if (!is_well_annotated(run, annot)) throw BlockError("annotation is not consistent with block boundaries");
    std::vector<Block> chosen;
    for (Block& b : candidate_blocks(run))
        if (annot[b.write]) chosen.push_back(std::move(b));
    return BlockSet(run, std::move(chosen));
}

}  // namespace blockeq
