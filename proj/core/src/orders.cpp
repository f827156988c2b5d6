#include "blockeq/orders.hpp"

#include <algorithm>

namespace blockeq {

void PartialOrder::add(std::size_t a, std::size_t b) {
    if (succ_[a].test(b)) return;
    Bits gain = succ_[b];
    gain.set(b);
    for (std::size_t x = 0; x < succ_.size(); ++x)
        if (x == a || succ_[x].test(a)) succ_[x] |= gain;
}

bool PartialOrder::acyclic() const {
    for (std::size_t i = 0; i < succ_.size(); ++i)
        if (succ_[i].test(i)) return false;
    return true;
}

std::size_t PartialOrder::pair_count() const {
    std::size_t n = 0;
    for (const Bits& row : succ_) n += row.count();
    return n;
}

PairList PartialOrder::pairs() const {
    PairList out;
    for (std::size_t i = 0; i < succ_.size(); ++i)
        for (std::size_t j = succ_[i].find_first(); j != Bits::npos; j = succ_[i].find_next(j))
            out.emplace_back(i, j);
    return out;
}

PairList PartialOrder::cover() const {
    PairList out;
    for (std::size_t i = 0; i < succ_.size(); ++i) {
        for (std::size_t j = succ_[i].find_first(); j != Bits::npos; j = succ_[i].find_next(j)) {
            bool covered = true;
            for (std::size_t k = succ_[i].find_first(); k != Bits::npos; k = succ_[i].find_next(k))
                if (k != j && k != i && succ_[k].test(j)) {
                    covered = false;
                    break;
                }
            if (covered) out.emplace_back(i, j);
        }
    }
    return out;
}

bool PartialOrder::subset_of(const PartialOrder& other) const {
    if (other.size() != size()) return false;
    for (std::size_t i = 0; i < succ_.size(); ++i)
        if (!succ_[i].is_subset_of(other.succ_[i])) return false;
    return true;
}

namespace {

// Closure of forward edges i -> j (i < j) given by keep(i, j).
template <typename Keep>
PartialOrder forward_closure(const Run& run, Keep keep) {
    const std::size_t n = run.size();
    std::vector<Bits> succ(n, Bits(n));
    for (std::size_t i = n; i-- > 0;)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!succ[i].test(j) && keep(i, j)) {
                succ[i] |= succ[j];
                succ[i].set(j);
            }
    return PartialOrder(std::move(succ));
}

}  // namespace

PartialOrder mazurkiewicz_hb(const Run& run) {
    return forward_closure(run, [&](std::size_t i, std::size_t j) { return dependent(run[i], run[j]); });
}

PartialOrder block_hb(const Run& run, const BlockSet& blocks) {
    return forward_closure(run, [&](std::size_t i, std::size_t j) {
        if (!dependent(run[i], run[j])) return false;
        if (run[i].thread == run[j].thread) return true;
        int bi = blocks.block_of(i), bj = blocks.block_of(j);
        return !(bi >= 0 && bj >= 0 && bi != bj);
    });
}

Saturation saturate(const Run& run, const BlockSet& blocks) {
    Saturation sat{block_hb(run, blocks), {}, false};
    const std::size_t m = blocks.size();
    std::vector<std::vector<bool>> paired(m, std::vector<bool>(m, false));
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t b = 0; b < m; ++b) {
            for (std::size_t c = 0; c < m; ++c) {
                if (b == c || paired[b][c] || blocks[b].var != blocks[c].var) continue;
                auto mb = blocks[b].members(), mc = blocks[c].members();
                bool hit = false;
                for (std::size_t g : mb)
                    for (std::size_t h : mc)
                        if (sat.order.before(g, h)) hit = true;
                if (!hit) continue;
                paired[b][c] = true;
                sat.block_pairs.emplace_back(b, c);
                for (std::size_t g : mb)
                    for (std::size_t h : mc) sat.order.add(g, h);
                changed = true;
            }
        }
    }
    std::sort(sat.block_pairs.begin(), sat.block_pairs.end());
    sat.cyclic = !sat.order.acyclic();
    return sat;
}

std::vector<std::size_t> after_positions(const Saturation& sat, std::size_t e) {
    std::vector<std::size_t> out{e};
    const Bits& row = sat.order.successors(e);
    for (std::size_t f = row.find_first(); f != Bits::npos; f = row.find_next(f))
        if (f != e) out.push_back(f);
    std::sort(out.begin(), out.end());
    return out;
}

bool blocks_overlap(std::span<const std::size_t> index, const Block& a, const Block& b) {
    if (a.var != b.var) return false;
    auto span_of = [&](const Block& blk) {
        std::size_t lo = index.size(), hi = 0;
        for (std::size_t m : blk.members()) {
            lo = std::min(lo, index[m]);
            hi = std::max(hi, index[m]);
        }
        return std::pair{lo, hi};
    };
    auto [alo, ahi] = span_of(a);
    auto [blo, bhi] = span_of(b);
    return !(ahi < blo || bhi < alo);
}

bool is_proper_linearization(std::span<const std::size_t> order, const Run& base, const BlockSet& blocks) {
    const std::size_t n = base.size();
    if (order.size() != n) throw TraceError("candidate is not a permutation of the base run");
    std::vector<std::size_t> index(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (order[i] >= n || index[order[i]] != n) throw TraceError("candidate is not a permutation of the base run");
        index[order[i]] = i;
    }
    PartialOrder hb = block_hb(base, blocks);
    for (auto [a, b] : hb.pairs())
        if (index[a] > index[b]) return false;
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (std::size_t c = b + 1; c < blocks.size(); ++c)
            if (blocks_overlap(index, blocks[b], blocks[c])) return false;
    return true;
}

std::vector<std::size_t> match_events(const Run& candidate, const Run& base) {
    if (candidate.size() != base.size()) throw TraceError("candidate is not a permutation of the base run");
    std::vector<std::size_t> order;
    order.reserve(candidate.size());
    for (std::size_t i = 0; i < candidate.size(); ++i) {
        const Label& l = candidate[i];
        Label mapped;
        try {
            mapped = parse_label(base, candidate.label_text(l));
        } catch (const TraceError&) {
            throw TraceError("candidate is not a permutation of the base run");
        }
        auto pos = base.position({mapped, candidate.event_at(i).occurrence});
        if (!pos) throw TraceError("candidate is not a permutation of the base run");
        order.push_back(*pos);
    }
    return order;
}

bool is_proper_linearization(const Run& candidate, const Run& base, const BlockSet& blocks) {
    return is_proper_linearization(match_events(candidate, base), base, blocks);
}

}  // namespace blockeq
