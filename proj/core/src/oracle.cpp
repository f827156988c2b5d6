#include "blockeq/oracle.hpp"

#include <algorithm>
#include <deque>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

namespace blockeq {

namespace {

constexpr std::size_t kMaxOracleEvents = 255;

std::string_view key(const Linearization& lin) {
    return {reinterpret_cast<const char*>(lin.data()), lin.size()};
}

void check_bound(const Run& run, std::size_t bound, const char* what) {
    if (run.size() > bound || run.size() > kMaxOracleEvents)
        throw OracleBoundExceeded(std::string(what) + " oracle bound exceeded: run has " +
                                  std::to_string(run.size()) + " events, limit " + std::to_string(bound));
}

template <typename Expand>
std::vector<Linearization> bfs(const Run& run, const OracleBounds& bounds, Expand expand) {
    std::unordered_set<std::string> seen;
    std::deque<Linearization> queue;
    std::vector<Linearization> members;
    auto start = identity_linearization(run.size());
    seen.emplace(key(start));
    queue.push_back(start);
    while (!queue.empty()) {
        Linearization cur = std::move(queue.front());
        queue.pop_front();
        expand(cur, [&](Linearization next) {
            if (seen.emplace(key(next)).second) {
                if (seen.size() > bounds.max_members) throw OracleBoundExceeded("class has too many members");
                queue.push_back(std::move(next));
            }
        });
        members.push_back(std::move(cur));
    }
    std::sort(members.begin(), members.end());
    return members;
}

void event_swaps(const Run& run, const Linearization& cur, const std::function<void(Linearization)>& emit) {
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
        if (dependent(run[cur[i]], run[cur[i + 1]])) continue;
        Linearization next = cur;
        std::swap(next[i], next[i + 1]);
        emit(std::move(next));
    }
}

bool threads_disjoint(const std::vector<int>& a, const std::vector<int>& b) {
    for (int t : a)
        if (std::find(b.begin(), b.end(), t) != b.end()) return false;
    return true;
}

}  // namespace

bool EquivClass::contains(const Linearization& m) const {
    return std::binary_search(members.begin(), members.end(), m);
}

bool EquivClass::subset_of(const EquivClass& other) const {
    return std::includes(other.members.begin(), other.members.end(), members.begin(), members.end());
}

Linearization identity_linearization(std::size_t n) {
    Linearization lin(n);
    for (std::size_t i = 0; i < n; ++i) lin[i] = static_cast<std::uint8_t>(i);
    return lin;
}

std::vector<std::size_t> to_order(const Linearization& lin) { return {lin.begin(), lin.end()}; }

EquivClass enum_maz_class(const Run& run, const OracleBounds& bounds) {
    check_bound(run, bounds.swap_events, "maz");
    auto members = bfs(run, bounds, [&](const Linearization& cur, auto&& emit) { event_swaps(run, cur, emit); });
    return {run, Relation::Maz, std::move(members)};
}

EquivClass enum_block_class(const Run& run, const BlockSet& blocks, const OracleBounds& bounds) {
    check_bound(run, bounds.swap_events, "block");
    std::vector<std::vector<int>> threads;
    for (std::size_t b = 0; b < blocks.size(); ++b) threads.push_back(blocks.threads_of(b, run));
    auto members = bfs(run, bounds, [&](const Linearization& cur, auto&& emit) {
        event_swaps(run, cur, emit);
        const std::size_t n = cur.size();
        std::vector<std::size_t> index(n);
        for (std::size_t i = 0; i < n; ++i) index[cur[i]] = i;
        // [lo, hi] span of each block; contiguous when the span equals its size.
        std::vector<std::pair<std::size_t, std::size_t>> span(blocks.size());
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            std::size_t lo = n, hi = 0;
            for (std::size_t m : blocks[b].members()) {
                lo = std::min(lo, index[m]);
                hi = std::max(hi, index[m]);
            }
            span[b] = {lo, hi};
        }
        auto contiguous = [&](std::size_t b) { return span[b].second - span[b].first + 1 == blocks[b].size(); };
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            if (!contiguous(b) || span[b].second + 1 >= n) continue;
            int c = blocks.block_of(cur[span[b].second + 1]);
            if (c < 0 || !contiguous(c) || span[c].first != span[b].second + 1) continue;
            if (!threads_disjoint(threads[b], threads[c])) continue;
            Linearization next = cur;
            auto first = next.begin() + static_cast<std::ptrdiff_t>(span[b].first);
            auto mid = next.begin() + static_cast<std::ptrdiff_t>(span[c].first);
            auto last = next.begin() + static_cast<std::ptrdiff_t>(span[c].second + 1);
            std::rotate(first, mid, last);
            emit(std::move(next));
        }
    });
    return {run, Relation::Block, std::move(members)};
}

void for_each_rf_member(const Run& run, const std::function<bool(const Linearization&)>& visit,
                        const OracleBounds& bounds) {
    check_bound(run, bounds.rf_events, "rf");
    std::vector<std::vector<std::size_t>> per_thread(run.thread_count());
    for (std::size_t i = 0; i < run.size(); ++i) per_thread[run[i].thread].push_back(i);
    std::vector<std::size_t> next(run.thread_count(), 0);
    std::vector<long> last_write(run.var_count(), -1);
    Linearization cur;
    cur.reserve(run.size());
    bool stop = false;
    std::function<void()> dfs = [&]() {
        if (stop) return;
        if (cur.size() == run.size()) {
            if (!visit(cur)) stop = true;
            return;
        }
        for (std::size_t t = 0; t < per_thread.size() && !stop; ++t) {
            if (next[t] == per_thread[t].size()) continue;
            std::size_t p = per_thread[t][next[t]];
            const Label& l = run[p];
            long saved = last_write[l.var];
            if (l.op == Op::Read) {
                if (saved != static_cast<long>(*run.writer(p))) continue;
            } else {
                last_write[l.var] = static_cast<long>(p);
            }
            cur.push_back(static_cast<std::uint8_t>(p));
            ++next[t];
            dfs();
            --next[t];
            cur.pop_back();
            last_write[l.var] = saved;
        }
    };
    dfs();
}

EquivClass enum_rf_class(const Run& run, const OracleBounds& bounds) {
    std::vector<Linearization> members;
    for_each_rf_member(
        run,
        [&](const Linearization& lin) {
            members.push_back(lin);
            if (members.size() > bounds.max_members) throw OracleBoundExceeded("class has too many members");
            return true;
        },
        bounds);
    std::sort(members.begin(), members.end());
    return {run, Relation::ReadsFrom, std::move(members)};
}

namespace {

// Depth-first extension of a prefix into proper linearizations of the block order.
class ProperSearch {
public:
    ProperSearch(const Run& run, const BlockSet& blocks, const PartialOrder& order)
        : run_(run), blocks_(blocks), order_(order), placed_(run.size()), filled_(blocks.size(), 0),
          open_(run.var_count(), -1) {
        preds_.assign(run.size(), Bits(run.size()));
        for (auto [a, b] : order.pairs()) preds_[b].set(a);
    }

    bool eligible(std::size_t p) const {
        if (placed_.test(p) || !preds_[p].is_subset_of(placed_)) return false;
        int b = blocks_.block_of(p);
        if (b < 0) return true;
        int o = open_[run_[p].var];
        return o < 0 || o == b;
    }

    void place(std::size_t p) {
        placed_.set(p);
        cur_.push_back(static_cast<std::uint8_t>(p));
        int b = blocks_.block_of(p);
        if (b < 0) return;
        ++filled_[b];
        open_[run_[p].var] = filled_[b] == blocks_[b].size() ? -1 : b;
    }

    void unplace(std::size_t p) {
        placed_.reset(p);
        cur_.pop_back();
        int b = blocks_.block_of(p);
        if (b < 0) return;
        --filled_[b];
        open_[run_[p].var] = filled_[b] == 0 ? -1 : b;
    }

    // Returns false once visit asks to stop.
    bool extend(const std::function<bool(const Linearization&)>& visit) {
        if (cur_.size() == run_.size()) return visit(cur_);
        for (std::size_t p = 0; p < run_.size(); ++p) {
            if (!eligible(p)) continue;
            place(p);
            bool go_on = extend(visit);
            unplace(p);
            if (!go_on) return false;
        }
        return true;
    }

private:
    const Run& run_;
    const BlockSet& blocks_;
    const PartialOrder& order_;
    std::vector<Bits> preds_;
    Bits placed_;
    std::vector<std::size_t> filled_;
    std::vector<int> open_;
    Linearization cur_;
};

}  // namespace

std::vector<Linearization> proper_linearizations(const Run& run, const BlockSet& blocks, const OracleBounds& bounds) {
    check_bound(run, bounds.swap_events, "linearization");
    PartialOrder hb = block_hb(run, blocks);
    ProperSearch search(run, blocks, hb);
    std::vector<Linearization> out;
    search.extend([&](const Linearization& lin) {
        out.push_back(lin);
        if (out.size() > bounds.max_members) throw OracleBoundExceeded("too many linearizations");
        return true;
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> proper_topological_sort(const Run& run, const BlockSet& blocks,
                                                 std::span<const std::size_t> priority) {
    const std::size_t n = run.size();
    if (priority.size() != n) throw std::invalid_argument("priority must rank every event");
    Saturation sat = saturate(run, blocks);
    if (sat.cyclic) throw StuckError("saturated order is cyclic; blocks are not liberally atomic");
    std::vector<Bits> preds(n, Bits(n));
    for (auto [a, b] : sat.order.pairs()) preds[b].set(a);
    Bits placed(n);
    std::vector<std::size_t> filled(blocks.size(), 0);
    std::vector<int> open(run.var_count(), -1);
    std::vector<std::size_t> out;
    while (out.size() < n) {
        std::size_t best = n;
        for (std::size_t p = 0; p < n; ++p) {
            if (placed.test(p) || !preds[p].is_subset_of(placed)) continue;
            if (run[p].op == Op::Write && open[run[p].var] >= 0) continue;
            if (best == n || priority[p] < priority[best]) best = p;
        }
        if (best == n) throw StuckError("no eligible event after " + std::to_string(out.size()) + " steps");
        placed.set(best);
        out.push_back(best);
        if (int b = blocks.block_of(best); b >= 0) {
            ++filled[b];
            open[run[best].var] = filled[b] == blocks[b].size() ? -1 : b;
        }
    }
    return out;
}

PartialOrder intersection_order(const EquivClass& cls) {
    const std::size_t n = cls.representative.size();
    std::vector<Bits> succ(n, Bits(n));
    for (std::size_t i = 0; i < n; ++i) succ[i].set();
    for (std::size_t i = 0; i < n; ++i) succ[i].reset(i);
    std::vector<std::size_t> index(n);
    for (const Linearization& m : cls.members) {
        for (std::size_t i = 0; i < n; ++i) index[m[i]] = i;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (index[a] > index[b]) succ[a].reset(b);
    }
    return PartialOrder(std::move(succ));
}

std::uint64_t count_linearizations(const PartialOrder& order) {
    const std::size_t n = order.size();
    if (n > 31) throw OracleBoundExceeded("linearization count limited to 31 events");
    std::vector<std::uint32_t> pred(n, 0);
    for (auto [a, b] : order.pairs()) pred[b] |= 1u << a;
    std::unordered_map<std::uint32_t, std::uint64_t> memo;
    const std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
    std::function<std::uint64_t(std::uint32_t)> count = [&](std::uint32_t done) -> std::uint64_t {
        if (done == full) return 1;
        if (auto it = memo.find(done); it != memo.end()) return it->second;
        std::uint64_t total = 0;
        for (std::size_t p = 0; p < n; ++p)
            if (!(done >> p & 1u) && (pred[p] & done) == pred[p]) total += count(done | 1u << p);
        memo.emplace(done, total);
        return total;
    };
    return count(0);
}

ScopeOutcome check_scope(const Run& run, const BlockSet& blocks, std::size_t v_len, std::size_t w_len,
                         const OracleBounds& bounds) {
    check_bound(run, bounds.swap_events, "scope");
    const std::size_t e = v_len + w_len;
    if (e >= run.size()) return ScopeOutcome::PreconditionUnmet;
    for (const Block& b : blocks.blocks()) {
        std::size_t inside = 0;
        for (std::size_t m : b.members()) inside += m < v_len ? 1 : 0;
        if (inside != 0 && inside != b.size()) return ScopeOutcome::PreconditionUnmet;
    }
    Saturation sat = saturate(run, blocks);
    for (std::size_t f = v_len; f < e; ++f)
        if (sat.order.before(f, e)) return ScopeOutcome::PreconditionUnmet;

    PartialOrder hb = block_hb(run, blocks);
    ProperSearch search(run, blocks, hb);
    for (std::size_t p = 0; p < v_len; ++p) {
        if (!search.eligible(p)) return ScopeOutcome::Violated;
        search.place(p);
    }
    if (!search.eligible(e)) return ScopeOutcome::Violated;
    search.place(e);
    bool found = false;
    search.extend([&](const Linearization&) {
        found = true;
        return false;
    });
    return found ? ScopeOutcome::Holds : ScopeOutcome::Violated;
}

}  // namespace blockeq
