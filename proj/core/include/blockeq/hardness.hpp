#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "blockeq/oracle.hpp"
#include "blockeq/trace.hpp"

namespace blockeq {

// Two bit strings of equal length n >= 1.
struct EqualityInstance {
    std::vector<bool> a;
    std::vector<bool> b;
};

// Parses strings like "1101"; throws std::invalid_argument otherwise.
std::vector<bool> parse_bits(std::string_view text);

struct HardnessTrace {
    Run run;
    std::size_t theta1 = 0;  // the t1 read of u
    std::size_t theta2 = 0;  // the t2 write of u
};

// Two threads, variables c, x0, x1, y0, y1, u; 3 + 4(n-1) + 4 + 2n + 1 events.
HardnessTrace gen_equality_trace(const EqualityInstance& inst);

// True iff every reads-from equivalent run keeps e before f.
// Throws OracleBoundExceeded when the run is too long.
bool rf_ordered(const Run& run, std::size_t e, std::size_t f, const OracleBounds& bounds = {});

// (a == b) iff theta1 stays before theta2 in every reads-from equivalent run.
bool check_reduction(const EqualityInstance& inst, const OracleBounds& bounds = {});

}  // namespace blockeq
