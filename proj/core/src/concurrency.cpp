#include "blockeq/concurrency.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace blockeq {

namespace {

void check_labels(const Run& run, const Label& l) {
    if (l.thread < 0 || l.thread >= run.thread_count() || l.var < 0 || l.var >= run.var_count())
        throw TraceError("label outside the run's threads or variables");
}

Letter marked_letter(const ConcQuery& q, Letter symbol, bool top) { return q.sigma.letter_of_symbol(symbol, top); }

std::vector<std::uint8_t> key_of(const ConcQuery& q, const ConcBranch& b) {
    auto key = serialize_state(q.sigma, b.libat);
    key.push_back(static_cast<std::uint8_t>(b.phase));
    return key;
}

// Some c event precedes some d event.
bool occurs_in_order(const Run& run, const Label& c, const Label& d) {
    bool seen_c = false;
    for (const Label& l : run.labels()) {
        if (seen_c && l == d) return true;
        seen_c = seen_c || l == c;
    }
    return false;
}

std::vector<Letter> letters_of(const Alphabet& sigma, const Run& run, const Annotation& annot) {
    if (!is_well_annotated(run, annot)) throw BlockError("annotation is not consistent with block boundaries");
    return sigma.letters_of(run, annot);
}

}  // namespace

bool conc_symbols_maz(const Run& run, const Label& c, const Label& d) {
    check_labels(run, c);
    check_labels(run, d);
    // Labels whose last occurrence is after the last c event.
    std::vector<Label> after;
    bool seen_c = false;
    for (const Label& a : run.labels()) {
        if (seen_c) {
            bool hit = false;
            for (const Label& b : after) hit = hit || dependent(a, b);
            if (a == d && !hit) return true;
            if (hit && std::find(after.begin(), after.end(), a) == after.end()) after.push_back(a);
        }
        if (a == c) {
            seen_c = true;
            after.assign(1, c);
        }
    }
    return false;
}

ConcQuery make_query(const Run& run, const Label& c, const Label& d, bool guess_annotation) {
    check_labels(run, c);
    check_labels(run, d);
    ConcQuery q;
    q.sigma = Alphabet::for_run(run);
    q.c_mark_symbol = static_cast<Letter>(q.sigma.add_marked(c));
    q.d_mark_symbol = static_cast<Letter>(q.sigma.add_marked(d));
    q.c_letters = q.sigma.empty_set();
    q.d_letters = q.sigma.empty_set();
    for (bool top : {false, true}) {
        q.c_letters.set(q.sigma.letter(c, top));
        q.d_letters.set(q.sigma.letter(d, top));
    }
    q.guess_annotation = guess_annotation;
    return q;
}

ConcState conc_initial(const ConcQuery& q) { return {{ConcBranch{libat_initial(q.sigma), 0}}}; }

ConcState conc_step(const ConcQuery& q, const ConcState& state, Letter a) {
    ConcState next;
    std::set<std::vector<std::uint8_t>> seen;
    auto push = [&](ConcBranch b) {
        if (b.libat.rejected) return;
        if (seen.insert(key_of(q, b)).second) next.branches.push_back(std::move(b));
    };
    const int x = q.sigma.var(a);
    for (const ConcBranch& b : state.branches) {
        std::vector<Letter> choices;
        if (!q.guess_annotation)
            choices.push_back(a);
        else if (q.sigma.op(a) == Op::Write) {
            choices.push_back(a & ~1u);
            choices.push_back(a | 1u);
        } else {
            const int rf = b.libat.sat.rf[x];
            if (rf == kNoLetter) throw TraceError("read without a tracked writer");
            choices.push_back(q.sigma.top(static_cast<Letter>(rf)) ? (a | 1u) : (a & ~1u));
        }
        for (Letter l : choices) {
            push({libat_step(q.sigma, b.libat, l), b.phase});
            if (b.phase == 0 && q.c_letters.test(l))
                push({libat_step(q.sigma, b.libat, marked_letter(q, q.c_mark_symbol, q.sigma.top(l))), 1});
            if (b.phase == 1 && q.d_letters.test(l))
                push({libat_step(q.sigma, b.libat, marked_letter(q, q.d_mark_symbol, q.sigma.top(l))), 2});
        }
    }
    return next;
}

bool conc_accepts(const ConcQuery& q, const ConcState& state) {
    for (const ConcBranch& b : state.branches) {
        if (b.phase != 2 || b.libat.rejected) continue;
        const auto& aft = b.libat.sat.aft;
        bool ordered = false;
        for (bool ct : {false, true})
            for (bool dt : {false, true})
                ordered = ordered || aft[marked_letter(q, q.c_mark_symbol, ct)].test(marked_letter(q, q.d_mark_symbol, dt));
        if (!ordered) return true;
    }
    return false;
}

namespace {

bool run_query(const ConcQuery& q, std::span<const Letter> word) {
    ConcState s = conc_initial(q);
    for (Letter a : word) {
        s = conc_step(q, s, a);
        if (s.branches.empty()) return false;
    }
    return conc_accepts(q, s);
}

}  // namespace

bool conc_symbols_blocks(const Run& run, const Annotation& annot, const Label& c, const Label& d) {
    if (c == d || !occurs_in_order(run, c, d)) return false;
    ConcQuery q = make_query(run, c, d, false);
    return run_query(q, letters_of(q.sigma, run, annot));
}

bool conc_symbols_blocks(const Run& run, const Annotation& annot, const AnnotatedLabel& c,
                         const AnnotatedLabel& d) {
    if (c.base == d.base || !occurs_in_order(run, c.base, d.base)) return false;
    ConcQuery q = make_query(run, c.base, d.base, false);
    q.c_letters = q.sigma.empty_set();
    q.d_letters = q.sigma.empty_set();
    q.c_letters.set(q.sigma.letter(c.base, c.top));
    q.d_letters.set(q.sigma.letter(d.base, d.top));
    return run_query(q, letters_of(q.sigma, run, annot));
}

bool conc_symbols_general(const Run& run, const Label& c, const Label& d, GeneralStrategy strategy) {
    if (c == d || !occurs_in_order(run, c, d)) return false;
    if (strategy == GeneralStrategy::Streaming) {
        ConcQuery q = make_query(run, c, d, true);
        return run_query(q, q.sigma.letters_of(run, Annotation(run.size(), false)));
    }
    std::vector<std::size_t> writes;
    for (std::size_t i = 0; i < run.size(); ++i)
        if (run[i].op == Op::Write) writes.push_back(i);
    if (writes.size() >= 63) throw std::length_error("too many writes to enumerate block choices");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << writes.size()); ++mask) {
        Annotation annot(run.size(), false);
        for (std::size_t k = 0; k < writes.size(); ++k) annot[writes[k]] = (mask >> k) & 1;
        for (std::size_t i = 0; i < run.size(); ++i)
            if (auto w = run.writer(i)) annot[i] = annot[*w];
        if (conc_symbols_blocks(run, annot, c, d)) return true;
    }
    return false;
}

bool conc_events(const Run& run, std::size_t e, std::size_t f, ConcMode mode, const Annotation& annot) {
    if (e >= run.size() || f >= run.size()) throw TraceError("event outside the run");
    if (e == f || run[e].thread == run[f].thread) return false;
    if (e > f) std::swap(e, f);
    // e and f become the only occurrences of two fresh marked letters.
    ConcQuery q = make_query(run, run[e], run[f], mode == ConcMode::MostGeneral);
    const Letter c_sym = q.c_mark_symbol, d_sym = q.d_mark_symbol;
    Annotation base = mode == ConcMode::GivenBlocks ? annot : Annotation(run.size(), false);
    if (mode == ConcMode::GivenBlocks && !is_well_annotated(run, base))
        throw BlockError("annotation is not consistent with block boundaries");
    std::vector<Letter> word = q.sigma.letters_of(run, base);
    word[e] = q.sigma.letter_of_symbol(c_sym, base[e]);
    word[f] = q.sigma.letter_of_symbol(d_sym, base[f]);
    q.c_letters = q.sigma.empty_set();
    q.d_letters = q.sigma.empty_set();
    for (bool top : {false, true}) {
        q.c_letters.set(q.sigma.letter_of_symbol(c_sym, top));
        q.d_letters.set(q.sigma.letter_of_symbol(d_sym, top));
    }
    if (mode == ConcMode::Mazurkiewicz) {
        // Conflict after set of e over letters; no block rule applies.
        LabelSet after = q.sigma.empty_set();
        for (std::size_t i = e; i <= f; ++i) {
            const Letter a = word[i];
            bool hit = i == e;
            for (auto b = after.find_first(); b != Bits::npos && !hit; b = after.find_next(b))
                hit = dependent(q.sigma.base(a), q.sigma.base(static_cast<Letter>(b)));
            if (hit) after.set(a);
        }
        return !after.test(word[f]);
    }
    return run_query(q, word);
}

}  // namespace blockeq
