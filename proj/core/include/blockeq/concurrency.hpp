#pragma once

#include <cstddef>
#include <vector>

#include "blockeq/atomicity.hpp"
#include "blockeq/blocks.hpp"
#include "blockeq/sat.hpp"
#include "blockeq/trace.hpp"

namespace blockeq {

enum class ConcMode { Mazurkiewicz, GivenBlocks, MostGeneral };
enum class GeneralStrategy { Enumerate, Streaming };

// Symbol queries ask for events e before f in the run with labels c and d
// that no equivalent run keeps in that order.

// One pass over the run keeping the conflict after set of the last c event.
bool conc_symbols_maz(const Run& run, const Label& c, const Label& d);

// Streaming check under the given well-annotated blocks. False when the
// blocks are not liberally atomic. Both annotations of c and d count.
bool conc_symbols_blocks(const Run& run, const Annotation& annot, const Label& c, const Label& d);
bool conc_symbols_blocks(const Run& run, const Annotation& annot, const AnnotatedLabel& c,
                         const AnnotatedLabel& d);

// True iff some liberally atomic block choice makes c and d concurrent.
bool conc_symbols_general(const Run& run, const Label& c, const Label& d,
                          GeneralStrategy strategy = GeneralStrategy::Enumerate);

// Events are positions. GivenBlocks needs annot; the other modes ignore it.
bool conc_events(const Run& run, std::size_t e, std::size_t f, ConcMode mode, const Annotation& annot = {});

// Streaming machinery, exposed for tests and benchmarks. A branch guesses
// the witness pair by relabeling its events to marked copies of c and d.
struct ConcBranch {
    LibAtState libat;
    int phase = 0;  // 0: no c picked, 1: c picked, 2: c and d picked

    friend bool operator==(const ConcBranch&, const ConcBranch&) = default;
};

struct ConcState {
    std::vector<ConcBranch> branches;
};

struct ConcQuery {
    Alphabet sigma;       // run alphabet plus marked copies of c and d
    LabelSet c_letters;   // letters that may be picked as c
    LabelSet d_letters;
    Letter c_mark_symbol = 0;
    Letter d_mark_symbol = 0;
    bool guess_annotation = false;  // choose every write's annotation
};

ConcQuery make_query(const Run& run, const Label& c, const Label& d, bool guess_annotation);
ConcState conc_initial(const ConcQuery& q);
ConcState conc_step(const ConcQuery& q, const ConcState& state, Letter a);
bool conc_accepts(const ConcQuery& q, const ConcState& state);

}  // namespace blockeq
