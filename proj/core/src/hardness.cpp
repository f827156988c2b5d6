#include "blockeq/hardness.hpp"

#include <stdexcept>
#include <string>

namespace blockeq {

std::vector<bool> parse_bits(std::string_view text) {
    std::vector<bool> out;
    for (char ch : text) {
        if (ch != '0' && ch != '1') throw std::invalid_argument("bit string may contain only 0 and 1");
        out.push_back(ch == '1');
    }
    if (out.empty()) throw std::invalid_argument("bit string is empty");
    return out;
}

HardnessTrace gen_equality_trace(const EqualityInstance& inst) {
    const std::size_t n = inst.a.size();
    if (n == 0 || inst.b.size() != n) throw std::invalid_argument("bit strings must be non-empty and of equal length");
    enum Var { C, X0, X1, Y0, Y1, U };
    constexpr int t1 = 0, t2 = 1;
    auto x = [](bool bit) { return bit ? X1 : X0; };
    auto y = [](bool bit) { return bit ? Y1 : Y0; };
    std::vector<Label> w;
    auto put = [&w](int t, Op op, int v) { w.push_back({t, op, v}); };

    put(t1, Op::Write, x(!inst.a[0]));
    put(t1, Op::Write, C);
    put(t1, Op::Write, x(inst.a[0]));
    for (std::size_t i = 1; i < n; ++i) {
        put(t1, Op::Write, y(inst.a[i]));
        put(t1, Op::Read, C);
        put(t1, Op::Write, C);
        put(t1, Op::Read, y(inst.a[i]));
    }
    HardnessTrace out;
    put(t1, Op::Write, U);
    put(t1, Op::Read, C);
    out.theta1 = w.size();
    put(t1, Op::Read, U);
    out.theta2 = w.size();
    put(t2, Op::Write, U);
    put(t2, Op::Read, x(inst.b[0]));
    put(t2, Op::Write, C);
    for (std::size_t i = 1; i < n; ++i) {
        put(t2, Op::Write, y(inst.b[i]));
        put(t2, Op::Write, C);
    }
    put(t2, Op::Read, U);
    out.run = Run({"t1", "t2"}, {"c", "x0", "x1", "y0", "y1", "u"}, std::move(w));
    return out;
}

bool rf_ordered(const Run& run, std::size_t e, std::size_t f, const OracleBounds& bounds) {
    bool ordered = true;
    for_each_rf_member(
        run,
        [&](const Linearization& m) {
            for (std::uint8_t p : m) {
                if (p == e) return true;
                if (p == f) {
                    ordered = false;
                    return false;
                }
            }
            return true;
        },
        bounds);
    return ordered;
}

bool check_reduction(const EqualityInstance& inst, const OracleBounds& bounds) {
    HardnessTrace h = gen_equality_trace(inst);
    return (inst.a == inst.b) == rf_ordered(h.run, h.theta1, h.theta2, bounds);
}

}  // namespace blockeq
