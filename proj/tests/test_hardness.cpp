#include <gtest/gtest.h>

#include "blockeq/hardness.hpp"
#include "blockeq/oracle.hpp"

using namespace blockeq;

TEST(Bits, Parse) {
    EXPECT_EQ(parse_bits("101"), (std::vector<bool>{true, false, true}));
    EXPECT_THROW(parse_bits(""), std::invalid_argument);
    EXPECT_THROW(parse_bits("10a"), std::invalid_argument);
}

TEST(Trace, Shape) {
    for (std::size_t n = 1; n <= 4; ++n) {
        EqualityInstance inst{std::vector<bool>(n, true), std::vector<bool>(n, false)};
        HardnessTrace h = gen_equality_trace(inst);
        EXPECT_EQ(h.run.size(), 3 + 4 * (n - 1) + 4 + 2 * n + 1);
        EXPECT_EQ(h.run.thread_count(), 2);
        EXPECT_EQ(h.run.var_count(), 6);
        EXPECT_EQ(h.run[h.theta1].op, Op::Read);
        EXPECT_EQ(h.run[h.theta2].op, Op::Write);
        EXPECT_EQ(h.run[h.theta1].var, h.run[h.theta2].var);
        EXPECT_LT(h.theta1, h.theta2);
    }
    EXPECT_THROW(gen_equality_trace({{true}, {true, false}}), std::invalid_argument);
}

TEST(Reduction, AllInstancesUpToTwoBits) {
    for (std::size_t n = 1; n <= 2; ++n)
        for (unsigned a = 0; a < (1U << n); ++a)
            for (unsigned b = 0; b < (1U << n); ++b) {
                EqualityInstance inst;
                for (std::size_t i = 0; i < n; ++i) {
                    inst.a.push_back(a >> i & 1U);
                    inst.b.push_back(b >> i & 1U);
                }
                HardnessTrace h = gen_equality_trace(inst);
                EXPECT_EQ(rf_ordered(h.run, h.theta1, h.theta2), a == b) << n << " " << a << " " << b;
                EXPECT_TRUE(check_reduction(inst));
            }
}

namespace {

// Counts two-thread interleavings keeping every read's writer.
std::size_t count_rf_interleavings(const blockeq::Run& r) {
    std::size_t n = r.size(), first = 0, count = 0;
    for (std::size_t i = 0; i < n; ++i) first += r[i].thread == 0;
    std::vector<std::size_t> t0, t1;
    for (std::size_t i = 0; i < n; ++i) (r[i].thread == 0 ? t0 : t1).push_back(i);
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != first) continue;
        std::vector<std::size_t> order;
        std::size_t a = 0, b = 0;
        for (std::size_t k = 0; k < n; ++k) order.push_back(mask >> k & 1U ? t0[a++] : t1[b++]);
        std::vector<int> last(r.var_count(), -1);
        bool ok = true;
        for (std::size_t p : order) {
            if (r[p].op == Op::Write) {
                last[r[p].var] = static_cast<int>(p);
            } else if (last[r[p].var] != static_cast<int>(*r.writer(p))) {
                ok = false;
                break;
            }
        }
        count += ok;
    }
    return count;
}

}  // namespace

TEST(Reduction, ClassSizes) {
    struct Case {
        const char *a, *b;
        std::size_t size;
    };
    for (auto [a, b, size] : {Case{"01", "01", 1}, Case{"00", "01", 46}, Case{"00", "10", 33}, Case{"01", "10", 105}}) {
        HardnessTrace h = gen_equality_trace({parse_bits(a), parse_bits(b)});
        EXPECT_EQ(count_rf_interleavings(h.run), size) << a << " " << b;
        EXPECT_EQ(enum_rf_class(h.run).size(), size) << a << " " << b;
    }
}

TEST(Reduction, BoundEnforced) {
    OracleBounds tight;
    tight.rf_events = 10;
    HardnessTrace h = gen_equality_trace({parse_bits("11"), parse_bits("11")});
    EXPECT_THROW(rf_ordered(h.run, h.theta1, h.theta2, tight), OracleBoundExceeded);
}
