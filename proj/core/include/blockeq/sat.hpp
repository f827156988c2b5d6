#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "blockeq/blocks.hpp"
#include "blockeq/orders.hpp"
#include "blockeq/trace.hpp"

namespace blockeq {

// Index of an annotated symbol: symbol * 2 + annotation bit.
using Letter = std::uint32_t;
using LabelSet = Bits;

// Finite annotated alphabet over fixed thread and variable universes. Symbols
// are every (thread, op, variable) triple plus optional marked copies, which
// share their base label's dependence but are distinct letters.
class Alphabet {
public:
    Alphabet() = default;
    Alphabet(int threads, int vars);
    static Alphabet for_run(const Run& run) { return Alphabet(run.thread_count(), run.var_count()); }

    // Adds a marked copy of base and returns its symbol index.
    std::size_t add_marked(const Label& base);

    int threads() const noexcept { return threads_; }
    int vars() const noexcept { return vars_; }
    std::size_t symbols() const noexcept { return base_.size(); }
    std::size_t letters() const noexcept { return 2 * base_.size(); }

    Letter letter(const Label& l, bool top) const { return letter_of_symbol(symbol_of(l), top); }
    Letter letter_of_symbol(std::size_t symbol, bool top) const {
        return static_cast<Letter>(2 * symbol + (top ? 1 : 0));
    }
    std::size_t symbol_of(const Label& l) const;

    const Label& base(Letter a) const { return base_[a / 2]; }
    bool top(Letter a) const noexcept { return a % 2 == 1; }
    int thread(Letter a) const { return base(a).thread; }
    int var(Letter a) const { return base(a).var; }
    Op op(Letter a) const { return base(a).op; }
    bool marked(Letter a) const { return a / 2 >= unmarked_; }

    // Conflict dependence with cross-thread pairs that are both annotated removed.
    bool extended_dep(Letter a, Letter b) const { return dep_[a].test(b); }
    const LabelSet& dep_row(Letter a) const { return dep_[a]; }

    LabelSet empty_set() const { return LabelSet(letters()); }
    std::string name(Letter a, const Run& names) const;
    std::vector<Letter> letters_of(const Run& run, const Annotation& annot) const;

private:
    void rebuild_dep();

    int threads_ = 0;
    int vars_ = 0;
    std::size_t unmarked_ = 0;
    std::vector<Label> base_;
    std::vector<LabelSet> dep_;
};

constexpr int kNoLetter = -1;

// State of the saturation monitor; every component is sized by the alphabet.
struct SatState {
    std::vector<LabelSet> blk;        // per variable: labels of the running block
    std::vector<int> rf;              // per variable: label of the last write, or kNoLetter
    std::vector<LabelSet> aft;        // per letter: after set of its last event
    std::vector<LabelSet> fst_aft;    // per (letter, thread, variable)
    std::vector<bool> fst_open;       // per (letter, thread, variable)

    std::size_t slot(Letter a, int t, int x, const Alphabet& sigma) const {
        return (static_cast<std::size_t>(a) * sigma.threads() + t) * sigma.vars() + x;
    }

    friend bool operator==(const SatState&, const SatState&) = default;
};

SatState sat_initial(const Alphabet& sigma);
LabelSet dep_set(const Alphabet& sigma, const SatState& state, Letter c);
// Throws TraceError on a read with no tracked writer.
SatState sat_step(const Alphabet& sigma, const SatState& state, Letter a);
SatState sat_run(const Alphabet& sigma, std::span<const Letter> word);

// Offline ground truth for the monitor's state after the whole word.
SatState sat_reference(const Alphabet& sigma, const Run& run, const Annotation& annot,
                       std::span<const Letter> letters);

// Annotated labels f with e before-or-equal f under the saturated order.
LabelSet after_set(const Alphabet& sigma, const Saturation& sat, std::span<const Letter> letters, std::size_t e);
std::vector<AnnotatedLabel> after_set(const Run& run, const BlockSet& blocks, std::size_t e);

// Sorted canonical text of every component.
std::string dump_state(const Alphabet& sigma, const SatState& state, const Run& names);
std::vector<std::uint8_t> serialize_state(const Alphabet& sigma, const SatState& state);

}  // namespace blockeq
