#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace blockeq {

enum class Op : std::uint8_t { Read, Write };

// Thread and variable ids index into the owning Run's name tables.
struct Label {
    int thread = 0;
    Op op = Op::Read;
    int var = 0;

    friend auto operator<=>(const Label&, const Label&) = default;
};

// Conflict relation: same thread, or same variable with at least one write.
constexpr bool dependent(const Label& a, const Label& b) noexcept {
    if (a.thread == b.thread) return true;
    return a.var == b.var && (a.op == Op::Write || b.op == Op::Write);
}

struct Event {
    Label label;
    int occurrence = 1;  // 1-based count of this label so far

    friend auto operator<=>(const Event&, const Event&) = default;
};

class TraceError : public std::runtime_error {
public:
    TraceError(const std::string& what, int line = 0)
        : std::runtime_error(what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

// An immutable, validated run. Positions are 0-based.
class Run {
public:
    Run() = default;
    // Validates read-before-write; throws TraceError.
    Run(std::vector<std::string> thread_names, std::vector<std::string> var_names,
        std::vector<Label> labels, std::vector<bool> marks = {});

    std::size_t size() const noexcept { return labels_.size(); }
    bool empty() const noexcept { return labels_.empty(); }
    const Label& operator[](std::size_t pos) const { return labels_[pos]; }
    std::span<const Label> labels() const noexcept { return labels_; }

    // Trailing '@' marks from the trace text, one per position.
    const std::vector<bool>& marks() const noexcept { return marks_; }
    bool has_marks() const noexcept;

    int thread_count() const noexcept { return static_cast<int>(threads_.size()); }
    int var_count() const noexcept { return static_cast<int>(vars_.size()); }
    const std::vector<std::string>& thread_names() const noexcept { return threads_; }
    const std::vector<std::string>& var_names() const noexcept { return vars_; }

    Event event_at(std::size_t pos) const { return {labels_[pos], occurrence_[pos]}; }
    std::optional<std::size_t> position(const Event& e) const;

    // Nearest preceding write on the same variable; defined exactly on reads.
    std::optional<std::size_t> writer(std::size_t pos) const { return writer_[pos]; }

    // Reorders events; order[i] is the base position placed at i. The result
    // shares this run's name tables. Throws TraceError if the reordering
    // leaves a read without a prior write.
    Run permuted(std::span<const std::size_t> order) const;
    Run with_marks(std::vector<bool> marks) const;
    Run prefix(std::size_t len) const;

    std::string label_text(const Label& l) const;
    std::string line_text(std::size_t pos, bool with_mark = false) const;

private:
    std::vector<std::string> threads_;
    std::vector<std::string> vars_;
    std::vector<Label> labels_;
    std::vector<bool> marks_;
    std::vector<int> occurrence_;
    std::vector<std::optional<std::size_t>> writer_;
};

Run parse_run(std::string_view text);
Label parse_label(const Run& run, std::string_view text);  // "T1 r x"
std::string format_run(const Run& run, bool with_marks = false);

using PairList = std::vector<std::pair<std::size_t, std::size_t>>;

PairList program_order(const Run& run);
std::vector<std::optional<std::size_t>> reads_from(const Run& run);
bool same_equiv_rf(const Run& a, const Run& b);

}  // namespace blockeq
