#include "blockeq/sat.hpp"

#include <bit>

#include <algorithm>
#include <map>
#include <sstream>

namespace blockeq {

Alphabet::Alphabet(int threads, int vars) : threads_(threads), vars_(vars) {
    for (int t = 0; t < threads; ++t)
        for (int x = 0; x < vars; ++x)
            for (Op op : {Op::Read, Op::Write}) base_.push_back({t, op, x});
    unmarked_ = base_.size();
    rebuild_dep();
}

std::size_t Alphabet::add_marked(const Label& base) {
    base_.push_back(base);
    rebuild_dep();
    return base_.size() - 1;
}

std::size_t Alphabet::symbol_of(const Label& l) const {
    return (static_cast<std::size_t>(l.thread) * vars_ + l.var) * 2 + (l.op == Op::Write ? 1 : 0);
}

void Alphabet::rebuild_dep() {
    const std::size_t n = letters();
    dep_.assign(n, LabelSet(n));
    for (Letter a = 0; a < n; ++a)
        for (Letter b = 0; b < n; ++b) {
            if (!dependent(base(a), base(b))) continue;
            if (thread(a) != thread(b) && top(a) && top(b)) continue;
            dep_[a].set(b);
        }
}

std::string Alphabet::name(Letter a, const Run& names) const {
    std::string s = names.label_text(base(a));
    if (marked(a)) s += "*" + std::to_string(a / 2 - unmarked_ + 1);
    s += top(a) ? " @" : "";
    return s;
}

std::vector<Letter> Alphabet::letters_of(const Run& run, const Annotation& annot) const {
    std::vector<Letter> out;
    out.reserve(run.size());
    for (std::size_t i = 0; i < run.size(); ++i) out.push_back(letter(run[i], annot[i]));
    return out;
}

SatState sat_initial(const Alphabet& sigma) {
    const std::size_t slots = sigma.letters() * sigma.threads() * sigma.vars();
    SatState s;
    s.blk.assign(sigma.vars(), sigma.empty_set());
    s.rf.assign(sigma.vars(), kNoLetter);
    s.aft.assign(sigma.letters(), sigma.empty_set());
    s.fst_aft.assign(slots, sigma.empty_set());
    s.fst_open.assign(slots, true);
    return s;
}

LabelSet dep_set(const Alphabet& sigma, const SatState& state, Letter c) {
    LabelSet out = sigma.dep_row(c);
    if (sigma.op(c) == Op::Read) {
        int w = state.rf[sigma.var(c)];
        if (w == kNoLetter) throw TraceError("read without a tracked writer");
        out.set(static_cast<std::size_t>(w));
    }
    return out;
}

LabelSet after_set(const Alphabet& sigma, const Saturation& sat, std::span<const Letter> letters, std::size_t e) {
    LabelSet out = sigma.empty_set();
    for (std::size_t f : after_positions(sat, e)) out.set(letters[f]);
    return out;
}

std::vector<AnnotatedLabel> after_set(const Run& run, const BlockSet& blocks, std::size_t e) {
    Saturation sat = saturate(run, blocks);
    std::vector<AnnotatedLabel> out;
    for (std::size_t f : after_positions(sat, e)) out.push_back({run[f], blocks.contains(f)});
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

SatState sat_reference(const Alphabet& sigma, const Run& run, const Annotation& annot,
                       std::span<const Letter> letters) {
    SatState s = sat_initial(sigma);
    BlockSet blocks = blocks_from_annotation(run, annot);
    Saturation sat = saturate(run, blocks);

    std::vector<long> last(sigma.letters(), -1);
    for (std::size_t i = 0; i < run.size(); ++i) last[letters[i]] = static_cast<long>(i);

    std::vector<LabelSet> block_after(blocks.size(), sigma.empty_set());
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (std::size_t m : blocks[b].members()) block_after[b] |= after_set(sigma, sat, letters, m);

    for (Letter a = 0; a < sigma.letters(); ++a) {
        if (last[a] < 0) continue;
        const auto e = static_cast<std::size_t>(last[a]);
        s.aft[a] = after_set(sigma, sat, letters, e);
        for (int t = 0; t < sigma.threads(); ++t)
            for (int x = 0; x < sigma.vars(); ++x) {
                int first = -1, hits = 0;
                for (std::size_t b = 0; b < blocks.size(); ++b) {
                    if (blocks[b].var != x || run[blocks[b].write].thread != t) continue;
                    auto mem = blocks[b].members();
                    bool reach = std::any_of(mem.begin(), mem.end(),
                                             [&](std::size_t m) { return m == e || sat.order.before(e, m); });
                    if (!reach) continue;
                    if (first < 0) first = static_cast<int>(b);
                    ++hits;
                }
                std::size_t k = s.slot(a, t, x, sigma);
                if (first >= 0) s.fst_aft[k] = block_after[first];
                s.fst_open[k] = hits < 2;
            }
    }

    std::vector<long> last_write(sigma.vars(), -1);
    for (std::size_t i = 0; i < run.size(); ++i)
        if (run[i].op == Op::Write) last_write[run[i].var] = static_cast<long>(i);
    for (int x = 0; x < sigma.vars(); ++x) {
        if (last_write[x] < 0) continue;
        const auto w = static_cast<std::size_t>(last_write[x]);
        s.rf[x] = static_cast<int>(letters[w]);
        if (int b = blocks.block_of(w); b >= 0)
            for (std::size_t m : blocks[b].members()) s.blk[x].set(letters[m]);
    }
    return s;
}

namespace {

// Working copy of the after maps while the fixpoint for one step runs, as
// flat 64-bit words. Index `letters` is an extra node for the previous last
// occurrence of the new event's letter; its bit marks sets that reached it.
struct Fix {
    using Word = std::uint64_t;
    int T, X;
    std::size_t W;  // words per set
    std::vector<Word> aft;
    std::vector<Word> fst;
    std::vector<Word> closed;  // 0 or 1
    Word changed = 0;

    Fix(int threads, int vars, std::size_t nodes)
        : T(threads), X(vars), W((nodes + 63) / 64), aft(nodes * W, 0),
          fst(nodes * static_cast<std::size_t>(threads * vars) * W, 0),
          closed(nodes * static_cast<std::size_t>(threads * vars), 0) {}

    std::size_t slot(Letter c, int t, int y) const { return (static_cast<std::size_t>(c) * T + t) * X + y; }
    Word* A(Letter c) { return &aft[c * W]; }
    Word* F(std::size_t k) { return &fst[k * W]; }

    static Word bit(const Word* p, std::size_t b) { return p[b / 64] >> (b % 64) & 1U; }
    Word any(const Word* p) const {
        Word acc = 0;
        for (std::size_t w = 0; w < W; ++w) acc |= p[w];
        return acc != 0;
    }
    Word intersects(const Word* p, const Word* q) const {
        Word acc = 0;
        for (std::size_t w = 0; w < W; ++w) acc |= p[w] & q[w];
        return acc != 0;
    }
    // The masked updates below take on (0 or 1) and do nothing when it is 0.
    void grow(Word* into, const Word* from, Word on) {
        const Word m = Word{0} - on;
        for (std::size_t w = 0; w < W; ++w) {
            const Word add = from[w] & ~into[w] & m;
            into[w] |= add;
            changed |= add;
        }
    }
    void add(Word* into, std::size_t b, Word on) {
        const Word add = (on << (b % 64)) & ~into[b / 64];
        into[b / 64] |= add;
        changed |= add;
    }
    void close(std::size_t k, Word on) {
        changed |= on & ~closed[k];
        closed[k] |= on;
    }
};

void load_set(Fix::Word* into, const LabelSet& from) { boost::to_block_range(from, into); }

LabelSet store_set(const Fix::Word* from, std::size_t words, std::size_t bits) {
    LabelSet out(from, from + words);
    out.resize(bits);
    return out;
}

Letter write_letter(const Alphabet& sigma, int t, int y) { return sigma.letter({t, Op::Write, y}, true); }

struct Rules {
    Letter last;  // index of the prior node
    Letter a;
    int x;
    bool top;
    int owner;
    const std::vector<Fix::Word>& dep;
    const std::vector<Fix::Word>& had_block;
    const std::vector<Letter>& write_letters;  // by slot within a node
};

// Runs the rules to their least fixpoint. N fixes the set width at compile
// time; 0 reads it from f. All rules are monotone, so each pass gathers what
// every node can pull from the nodes it reaches and merges it afterwards.
template <std::size_t N>
void settle(Fix& f, const Rules& r) {
    using Word = Fix::Word;
    const std::size_t W = N ? N : f.W;
    const int T = f.T, X = f.X;
    const std::size_t TX = static_cast<std::size_t>(T * X);
    std::vector<Word> pull_a(W), pull_f(TX * W), pull_c(TX);
    auto mask_of = [](const Word* p, Letter d) { return Word{0} - (p[d / 64] >> (d % 64) & 1U); };
    auto clear = [](std::vector<Word>& v) { std::fill(v.begin(), v.end(), 0); };
    do {
        f.changed = 0;
        for (Letter c = 0; c <= r.last; ++c) {
            Word* ac = f.A(c);
            f.add(ac, r.a, f.intersects(ac, r.dep.data()));
            if (r.top) f.close(f.slot(c, r.owner, r.x), r.had_block[c] & Fix::bit(ac, r.a));

            clear(pull_a), clear(pull_f), clear(pull_c);
            for (Letter d = 0; d <= r.last; ++d) {
                const Word m = d == c ? 0 : mask_of(ac, d);
                const Word* ad = f.A(d);
                const Word* fd = f.F(d * TX);
                const Word* cd = &f.closed[d * TX];
                for (std::size_t w = 0; w < W; ++w) pull_a[w] |= ad[w] & m;
                for (std::size_t i = 0; i < TX * W; ++i) pull_f[i] |= fd[i] & m;
                for (std::size_t i = 0; i < TX; ++i) pull_c[i] |= cd[i] & m & 1U;
            }
            f.grow(ac, pull_a.data(), 1);
            for (std::size_t i = 0; i < TX; ++i) {
                f.grow(f.F(c * TX + i), &pull_f[i * W], 1);
                f.close(c * TX + i, pull_c[i]);
            }

            for (int t = 0; t < T; ++t)
                for (int y = 0; y < X; ++y) {
                    const std::size_t k = f.slot(c, t, y);
                    Word* fk = f.F(k);
                    // Reaching two blocks of one thread means reaching the
                    // later one's write, hence the latest such write.
                    f.add(ac, r.write_letters[k - c * TX], f.closed[k]);
                    f.add(fk, r.a, f.intersects(fk, r.dep.data()));
                    // A different block on the new event's variable that reaches
                    // it is ordered before the new event's whole block.
                    if (r.top && y == r.x && c != r.a)
                        f.grow(ac, f.F(f.slot(r.a, r.owner, r.x)),
                               Fix::bit(fk, r.a) &
                                   static_cast<Word>(t != r.owner || f.closed[k] || r.had_block[c]));

                    // pull_f and pull_c hold one entry per thread here.
                    clear(pull_a), clear(pull_f), clear(pull_c);
                    for (Letter d = 0; d <= r.last; ++d) {
                        const Word m = mask_of(fk, d);
                        const Word* ad = f.A(d);
                        for (std::size_t w = 0; w < W; ++w) pull_a[w] |= ad[w] & m;
                        for (int t2 = 0; t2 < T; ++t2) {
                            const std::size_t kd = f.slot(d, t2, y);
                            const Word* fd = f.F(kd);
                            Word live = 0;
                            for (std::size_t w = 0; w < W; ++w) {
                                pull_f[t2 * W + w] |= fd[w] & m;
                                live |= fd[w];
                            }
                            pull_c[t2] |= f.closed[kd] & static_cast<Word>(live != 0) & m & 1U;
                        }
                    }
                    f.grow(fk, pull_a.data(), 1);
                    for (int t2 = 0; t2 < T; ++t2) {
                        const Word* from = &pull_f[t2 * W];
                        f.grow(fk, from, 1);
                        if (t2 == t) {
                            f.close(k, pull_c[t2]);
                        } else {
                            // d's first block of another thread is a block
                            // distinct from this one that it reaches.
                            f.grow(ac, from, 1);
                            f.grow(f.F(f.slot(c, t2, y)), from, 1);
                            f.close(f.slot(c, t2, y), pull_c[t2]);
                        }
                    }
                }
        }
    } while (f.changed);
}

}  // namespace

SatState sat_step(const Alphabet& sigma, const SatState& state, Letter a) {
    using Word = Fix::Word;
    const int x = sigma.var(a);
    const bool top = sigma.top(a);
    const int rf = state.rf[x];
    if (sigma.op(a) == Op::Read) {
        if (rf == kNoLetter) throw TraceError("read without a tracked writer");
        if (sigma.top(static_cast<Letter>(rf)) != top) throw TraceError("read annotation differs from its writer's");
    }
    const int T = sigma.threads(), X = sigma.vars();
    const auto L = static_cast<Letter>(sigma.letters());
    const int owner = !top ? -1
                      : sigma.op(a) == Op::Write ? sigma.thread(a)
                                                 : sigma.thread(static_cast<Letter>(rf));

    const Letter prior = L;
    Fix f(T, X, L + 1);
    // Copies a state set into a working set, marking prior when it held a.
    auto widen = [&](Word* into, const LabelSet& set) {
        load_set(into, set);
        if (set.test(a)) into[prior / 64] |= Word{1} << (prior % 64);
    };
    std::vector<Word> dep(f.W, 0);
    load_set(dep.data(), dep_set(sigma, state, a));

    auto load = [&](Letter node, Letter from) {
        widen(f.A(node), state.aft[from]);
        for (int t = 0; t < T; ++t)
            for (int y = 0; y < X; ++y) {
                const std::size_t k = state.slot(from, t, y, sigma);
                widen(f.F(f.slot(node, t, y)), state.fst_aft[k]);
                f.closed[f.slot(node, t, y)] = !state.fst_open[k];
            }
    };
    for (Letter c = 0; c < L; ++c) load(c, c);
    load(prior, a);

    // The new event's own entries start from scratch.
    std::fill_n(f.A(a), f.W, 0);
    f.add(f.A(a), a, 1);
    for (int t = 0; t < T; ++t)
        for (int y = 0; y < X; ++y) {
            std::fill_n(f.F(f.slot(a, t, y)), f.W, 0);
            f.closed[f.slot(a, t, y)] = 0;
        }
    if (top) {
        Word* own = f.F(f.slot(a, owner, x));
        f.add(own, a, 1);
        if (sigma.op(a) == Op::Read) f.add(own, static_cast<Letter>(rf), 1);
    }

    // A fresh write block is reached by everything that reaches the new event;
    // whoever already reached an older block of the same thread now sees two.
    std::vector<Letter> write_letters;
    for (int t = 0; t < T; ++t)
        for (int y = 0; y < X; ++y) write_letters.push_back(write_letter(sigma, t, y));
    std::vector<Word> had_block(L + 1, 0);
    if (top && sigma.op(a) == Op::Write)
        for (Letter c = 0; c <= L; ++c) had_block[c] = c != a && f.any(f.F(f.slot(c, owner, x)));

    const Rules rules{L, a, x, top, owner, dep, had_block, write_letters};
    switch (f.W) {
        case 1: settle<1>(f, rules); break;
        case 2: settle<2>(f, rules); break;
        default: settle<0>(f, rules); break;
    }

    SatState next = state;
    for (Letter c = 0; c < L; ++c) {
        next.aft[c] = store_set(f.A(c), f.W, L);
        for (int t = 0; t < T; ++t)
            for (int y = 0; y < X; ++y) {
                const std::size_t k = f.slot(c, t, y);
                next.fst_aft[k] = store_set(f.F(k), f.W, L);
                next.fst_open[k] = !f.closed[k];
            }
    }
    if (sigma.op(a) == Op::Write) next.rf[x] = static_cast<int>(a);
    if (!top)
        next.blk[x] = sigma.empty_set();
    else if (sigma.op(a) == Op::Write) {
        next.blk[x] = sigma.empty_set();
        next.blk[x].set(a);
    } else
        next.blk[x].set(a);
    return next;
}

SatState sat_run(const Alphabet& sigma, std::span<const Letter> word) {
    SatState s = sat_initial(sigma);
    for (Letter a : word) s = sat_step(sigma, s, a);
    return s;
}

namespace {

void put_set(std::ostringstream& os, const Alphabet& sigma, const LabelSet& set, const Run& names) {
    std::vector<std::string> items;
    for (std::size_t b = set.find_first(); b != LabelSet::npos; b = set.find_next(b))
        items.push_back(sigma.name(static_cast<Letter>(b), names));
    std::sort(items.begin(), items.end());
    os << '{';
    for (std::size_t i = 0; i < items.size(); ++i) os << (i ? ", " : "") << items[i];
    os << '}';
}

}  // namespace

std::string dump_state(const Alphabet& sigma, const SatState& state, const Run& names) {
    // Lines are sorted so the dump is independent of internal index order.
    std::vector<std::string> lines;
    for (int x = 0; x < sigma.vars(); ++x) {
        std::ostringstream os;
        os << "Blk(" << names.var_names()[x] << ") = ";
        put_set(os, sigma, state.blk[x], names);
        lines.push_back(os.str());
        std::ostringstream rf;
        rf << "RF(" << names.var_names()[x] << ") = "
           << (state.rf[x] == kNoLetter ? std::string("undefined") : sigma.name(static_cast<Letter>(state.rf[x]), names));
        lines.push_back(rf.str());
    }
    for (Letter a = 0; a < sigma.letters(); ++a) {
        if (state.aft[a].any()) {
            std::ostringstream os;
            os << "Aft(" << sigma.name(a, names) << ") = ";
            put_set(os, sigma, state.aft[a], names);
            lines.push_back(os.str());
        }
        for (int t = 0; t < sigma.threads(); ++t)
            for (int x = 0; x < sigma.vars(); ++x) {
                std::size_t k = state.slot(a, t, x, sigma);
                std::string key = sigma.name(a, names) + ", " + names.thread_names()[t] + ", " + names.var_names()[x];
                if (state.fst_aft[k].any()) {
                    std::ostringstream os;
                    os << "FstBlkAft(" << key << ") = ";
                    put_set(os, sigma, state.fst_aft[k], names);
                    lines.push_back(os.str());
                }
                if (!state.fst_open[k]) lines.push_back("FstBlkOpen(" + key + ") = no");
            }
    }
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) out += l + '\n';
    return out;
}

std::vector<std::uint8_t> serialize_state(const Alphabet& sigma, const SatState& state) {
    // Fixed-width encoding: every set as ceil(letters / 8) bytes, every flag and
    // writer slot at a fixed offset.
    std::vector<std::uint8_t> out;
    const std::size_t n = sigma.letters();
    auto put = [&](const LabelSet& set) {
        for (std::size_t byte = 0; byte < (n + 7) / 8; ++byte) {
            std::uint8_t v = 0;
            for (std::size_t bit = 0; bit < 8 && byte * 8 + bit < n; ++bit)
                if (set.test(byte * 8 + bit)) v |= static_cast<std::uint8_t>(1u << bit);
            out.push_back(v);
        }
    };
    for (const auto& s : state.blk) put(s);
    for (int w : state.rf) {
        auto v = static_cast<std::uint32_t>(w);
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    for (const auto& s : state.aft) put(s);
    for (const auto& s : state.fst_aft) put(s);
    for (bool b : state.fst_open) out.push_back(b ? 1 : 0);
    return out;
}

}  // namespace blockeq
