#include "blockeq/atomicity.hpp"

#include <algorithm>
#include <queue>

namespace blockeq {

namespace {

BlockGraph nodes_for(const Run& run, const BlockSet& blocks) {
    BlockGraph g;
    g.node_of.assign(run.size(), -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        auto members = blocks[b].members();
        std::sort(members.begin(), members.end());
        for (std::size_t m : members) g.node_of[m] = static_cast<int>(g.nodes.size());
        g.nodes.push_back(std::move(members));
    }
    for (std::size_t i = 0; i < run.size(); ++i)
        if (g.node_of[i] < 0) {
            g.node_of[i] = static_cast<int>(g.nodes.size());
            g.nodes.push_back({i});
        }
    return g;
}

BlockGraph graph_from(const Run& run, const BlockSet& blocks, const PartialOrder& order) {
    BlockGraph g = nodes_for(run, blocks);
    std::vector<Bits> adj(g.size(), Bits(g.size()));
    for (auto [i, j] : order.pairs()) {
        auto a = static_cast<std::size_t>(g.node_of[i]), b = static_cast<std::size_t>(g.node_of[j]);
        if (a != b) adj[a].set(b);
    }
    g.successors.resize(g.size());
    for (std::size_t n = 0; n < g.size(); ++n)
        for (auto s = adj[n].find_first(); s != Bits::npos; s = adj[n].find_next(s)) g.successors[n].push_back(s);
    return g;
}

bool cyclic(const Bits& edges, int n) {
    // Floyd-Warshall style closure is fine on at most |X| nodes.
    Bits reach = edges;
    auto at = [n](int i, int j) { return static_cast<std::size_t>(i * n + j); };
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            if (reach.test(at(i, k)))
                for (int j = 0; j < n; ++j)
                    if (reach.test(at(k, j))) reach.set(at(i, j));
    for (int i = 0; i < n; ++i)
        if (reach.test(at(i, i))) return true;
    return false;
}

LibAtState rejected(const Alphabet& sigma) {
    LibAtState s = libat_initial(sigma);
    s.rejected = true;
    return s;
}

}  // namespace

std::vector<std::size_t> BlockGraph::topological_order(std::span<const std::size_t> rank) const {
    if (!rank.empty() && rank.size() != size()) throw std::invalid_argument("rank must cover every node");
    std::vector<std::size_t> indeg(size(), 0);
    for (const auto& s : successors)
        for (std::size_t n : s) ++indeg[n];
    auto key = [&](std::size_t n) { return rank.empty() ? nodes[n].front() : rank[n]; };
    auto later = [&](std::size_t a, std::size_t b) { return key(a) > key(b); };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(later)> ready(later);
    for (std::size_t n = 0; n < size(); ++n)
        if (indeg[n] == 0) ready.push(n);
    std::vector<std::size_t> out;
    while (!ready.empty()) {
        std::size_t n = ready.top();
        ready.pop();
        out.push_back(n);
        for (std::size_t s : successors[n])
            if (--indeg[s] == 0) ready.push(s);
    }
    if (out.size() != size()) out.clear();
    return out;
}

bool BlockGraph::acyclic() const { return size() == 0 || !topological_order().empty(); }

BlockGraph block_graph(const Run& run, const BlockSet& blocks) {
    return graph_from(run, blocks, block_hb(run, blocks));
}

BlockGraph conflict_graph(const Run& run, const BlockSet& blocks) {
    return graph_from(run, blocks, mazurkiewicz_hb(run));
}

bool is_liberally_atomic(const Run& run, const BlockSet& blocks) { return block_graph(run, blocks).acyclic(); }

bool is_conflict_serializable(const Run& run, const BlockSet& blocks) {
    return conflict_graph(run, blocks).acyclic();
}

std::vector<std::size_t> serial_witness(const Run& run, const BlockSet& blocks,
                                        std::span<const std::size_t> node_rank) {
    BlockGraph g = block_graph(run, blocks);
    auto order = g.topological_order(node_rank);
    if (order.empty() && g.size() > 0) throw NotAtomicError("blocks are not liberally atomic");
    std::vector<std::size_t> out;
    out.reserve(run.size());
    for (std::size_t n : order) out.insert(out.end(), g.nodes[n].begin(), g.nodes[n].end());
    return out;
}

LibAtState libat_initial(const Alphabet& sigma) {
    const auto X = static_cast<std::size_t>(sigma.vars());
    return {false, sat_initial(sigma), std::vector<int>(X, kNoLetter), Bits(X * X)};
}

LibAtState libat_step(const Alphabet& sigma, const LibAtState& state, Letter a) {
    if (state.rejected) return state;
    LibAtState next = state;
    next.sat = sat_step(sigma, state.sat, a);
    // Reaching an older block of the same thread and variable closes a cycle,
    // whatever event made it reachable.
    for (int v = 0; v < sigma.vars(); ++v) {
        if (state.active[v] == kNoLetter) continue;
        const auto start = static_cast<Letter>(state.active[v]);
        if (sigma.var(a) == v && sigma.top(a) && sigma.op(a) == Op::Write) continue;
        if (!next.sat.fst_open[next.sat.slot(start, sigma.thread(start), v, sigma)]) return rejected(sigma);
    }
    if (!sigma.top(a)) return next;

    const int X = sigma.vars(), T = sigma.threads();
    const int x = sigma.var(a);
    auto edge = [X](int from, int to) { return static_cast<std::size_t>(from * X + to); };
    if (sigma.op(a) == Op::Write) {
        // The old active block on x leaves the summary; keep the paths through it.
        if (state.active[x] != kNoLetter) {
            for (int p = 0; p < X; ++p)
                for (int q = 0; q < X; ++q)
                    if (p != x && q != x && state.edges.test(edge(p, x)) && state.edges.test(edge(x, q)))
                        next.edges.set(edge(p, q));
            for (int v = 0; v < X; ++v) {
                next.edges.reset(edge(v, x));
                next.edges.reset(edge(x, v));
            }
        }
        next.active[x] = static_cast<int>(a);
    }
    for (int y = 0; y < X; ++y) {
        if (next.active[y] == kNoLetter) continue;
        const auto start = static_cast<Letter>(next.active[y]);
        const LabelSet& after = next.sat.aft[start];
        bool hit = y != x && after.test(a);
        // A path from B_x back into B_x through events outside it is a self loop.
        if (y == x)
            for (auto c = after.find_first(); c != Bits::npos && !hit; c = after.find_next(c)) {
                const auto label = static_cast<Letter>(c);
                if (label == a || (sigma.top(label) && sigma.var(label) == x)) continue;
                hit = next.sat.aft[label].test(a);
            }
        for (int t = 0; t < T && !hit; ++t)
            for (int z = 0; z < X && !hit; ++z) {
                if (y == x && z == x && t == sigma.thread(start)) continue;
                hit = next.sat.fst_aft[next.sat.slot(start, t, z, sigma)].test(a);
            }
        if (hit) next.edges.set(edge(y, x));
    }
    if (cyclic(next.edges, X)) return rejected(sigma);
    return next;
}

LibAtState libat_run(const Alphabet& sigma, std::span<const Letter> word) {
    LibAtState s = libat_initial(sigma);
    for (Letter a : word) s = libat_step(sigma, s, a);
    return s;
}

bool libat_accepts(const Run& run, const Annotation& annot) {
    if (!is_well_annotated(run, annot)) throw BlockError("annotation is not consistent with block boundaries");
    Alphabet sigma = Alphabet::for_run(run);
    auto word = sigma.letters_of(run, annot);
    return !libat_run(sigma, word).rejected;
}

std::vector<std::uint8_t> serialize_state(const Alphabet& sigma, const LibAtState& state) {
    std::vector<std::uint8_t> out = serialize_state(sigma, state.sat);
    out.push_back(state.rejected ? 1 : 0);
    for (int w : state.active) {
        auto v = static_cast<std::uint32_t>(w);
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    for (std::size_t i = 0; i < state.edges.size(); ++i) out.push_back(state.edges.test(i) ? 1 : 0);
    return out;
}

}  // namespace blockeq
