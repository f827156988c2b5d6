#include "blockeq/trace.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <tuple>

namespace blockeq {

namespace {

bool is_ident(std::string_view s) {
    if (s.empty()) return false;
    auto ok = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    return !std::isdigit(static_cast<unsigned char>(s.front())) && std::all_of(s.begin(), s.end(), ok);
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

int intern(std::vector<std::string>& names, std::string_view name) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it != names.end()) return static_cast<int>(it - names.begin());
    names.emplace_back(name);
    return static_cast<int>(names.size() - 1);
}

int lookup(const std::vector<std::string>& names, std::string_view name, const char* what) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw TraceError(std::string("unknown ") + what + " '" + std::string(name) + "'");
    return static_cast<int>(it - names.begin());
}

Op parse_op(std::string_view s, int line) {
    if (s == "r") return Op::Read;
    if (s == "w") return Op::Write;
    throw TraceError("unknown op '" + std::string(s) + "'", line);
}

}  // namespace

Run::Run(std::vector<std::string> thread_names, std::vector<std::string> var_names,
         std::vector<Label> labels, std::vector<bool> marks)
    : threads_(std::move(thread_names)),
      vars_(std::move(var_names)),
      labels_(std::move(labels)),
      marks_(std::move(marks)) {
    if (marks_.empty()) marks_.assign(labels_.size(), false);
    if (marks_.size() != labels_.size()) throw TraceError("mark count does not match run length");
    occurrence_.resize(labels_.size());
    writer_.resize(labels_.size());
    std::map<Label, int> seen;
    std::vector<std::optional<std::size_t>> last_write(vars_.size());
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        const Label& l = labels_[i];
        if (l.thread < 0 || l.thread >= thread_count() || l.var < 0 || l.var >= var_count())
            throw TraceError("label outside the run's thread/variable universe");
        occurrence_[i] = ++seen[l];
        if (l.op == Op::Read) {
            if (!last_write[l.var])
                throw TraceError("read of '" + vars_[l.var] + "' at event " + std::to_string(i + 1) +
                                 " has no preceding write");
            writer_[i] = last_write[l.var];
        } else {
            last_write[l.var] = i;
        }
    }
}

bool Run::has_marks() const noexcept {
    return std::any_of(marks_.begin(), marks_.end(), [](bool b) { return b; });
}

std::optional<std::size_t> Run::position(const Event& e) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == e.label && occurrence_[i] == e.occurrence) return i;
    return std::nullopt;
}

Run Run::permuted(std::span<const std::size_t> order) const {
    if (order.size() != size()) throw TraceError("permutation length mismatch");
    std::vector<Label> ls;
    std::vector<bool> ms;
    ls.reserve(size());
    ms.reserve(size());
    for (std::size_t p : order) {
        ls.push_back(labels_.at(p));
        ms.push_back(marks_.at(p));
    }
    return Run(threads_, vars_, std::move(ls), std::move(ms));
}

Run Run::with_marks(std::vector<bool> marks) const {
    return Run(threads_, vars_, labels_, std::move(marks));
}

Run Run::prefix(std::size_t len) const {
    len = std::min(len, size());
    std::vector<Label> ls(labels_.begin(), labels_.begin() + static_cast<std::ptrdiff_t>(len));
    std::vector<bool> ms(marks_.begin(), marks_.begin() + static_cast<std::ptrdiff_t>(len));
    return Run(threads_, vars_, std::move(ls), std::move(ms));
}

std::string Run::label_text(const Label& l) const {
    return threads_.at(l.thread) + (l.op == Op::Read ? " r " : " w ") + vars_.at(l.var);
}

std::string Run::line_text(std::size_t pos, bool with_mark) const {
    std::string s = label_text(labels_.at(pos));
    if (with_mark && marks_.at(pos)) s += " @";
    return s;
}

Run parse_run(std::string_view text) {
    std::vector<std::string> threads, vars;
    std::vector<Label> labels;
    std::vector<bool> marks;
    std::vector<bool> written;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        ++line_no;
        start = end + 1;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto tok = split_ws(line);
        if (tok.empty()) {
            if (end == text.size()) break;
            continue;
        }
        bool mark = false;
        if (tok.size() == 4 && tok[3] == "@") {
            mark = true;
            tok.pop_back();
        } else if (tok.size() == 3 && tok[2].size() > 1 && tok[2].back() == '@') {
            mark = true;
            tok[2].remove_suffix(1);
        }
        if (tok.size() != 3)
            throw TraceError("line " + std::to_string(line_no) + ": expected '<thread> <r|w> <variable> [@]'",
                             line_no);
        if (!is_ident(tok[0]) || !is_ident(tok[2]))
            throw TraceError("line " + std::to_string(line_no) + ": malformed identifier", line_no);
        Op op;
        try {
            op = parse_op(tok[1], line_no);
        } catch (const TraceError& e) {
            throw TraceError("line " + std::to_string(line_no) + ": " + e.what(), line_no);
        }
        Label l{intern(threads, tok[0]), op, intern(vars, tok[2])};
        written.resize(vars.size(), false);
        if (op == Op::Read && !written[l.var])
            throw TraceError("line " + std::to_string(line_no) + ": read of '" + vars[l.var] + "' has no preceding write",
                             line_no);
        if (op == Op::Write) written[l.var] = true;
        labels.push_back(l);
        marks.push_back(mark);
        if (end == text.size()) break;
    }
    return Run(std::move(threads), std::move(vars), std::move(labels), std::move(marks));
}

Label parse_label(const Run& run, std::string_view text) {
    auto tok = split_ws(text);
    if (tok.size() != 3) throw TraceError("expected '<thread> <r|w> <variable>', got '" + std::string(text) + "'");
    return {lookup(run.thread_names(), tok[0], "thread"), parse_op(tok[1], 0),
            lookup(run.var_names(), tok[2], "variable")};
}

std::string format_run(const Run& run, bool with_marks) {
    std::string out;
    for (std::size_t i = 0; i < run.size(); ++i) {
        out += run.line_text(i, with_marks);
        out += '\n';
    }
    return out;
}

PairList program_order(const Run& run) {
    PairList out;
    for (std::size_t i = 0; i < run.size(); ++i)
        for (std::size_t j = i + 1; j < run.size(); ++j)
            if (run[i].thread == run[j].thread) out.emplace_back(i, j);
    return out;
}

std::vector<std::optional<std::size_t>> reads_from(const Run& run) {
    std::vector<std::optional<std::size_t>> out(run.size());
    for (std::size_t i = 0; i < run.size(); ++i) out[i] = run.writer(i);
    return out;
}

namespace {

// Name-keyed view so runs parsed separately compare by identity, not by id.
using NamedLabel = std::tuple<std::string, Op, std::string>;
using NamedEvent = std::pair<NamedLabel, int>;

NamedEvent named_event(const Run& run, std::size_t pos) {
    const Label& l = run[pos];
    return {{run.thread_names()[l.thread], l.op, run.var_names()[l.var]}, run.event_at(pos).occurrence};
}

}  // namespace

bool same_equiv_rf(const Run& a, const Run& b) {
    if (a.size() != b.size()) return false;
    // Equal per-thread sequences give equal event sets and equal program order.
    using Seq = std::map<std::string, std::vector<NamedEvent>>;
    auto per_thread = [](const Run& r) {
        Seq s;
        for (std::size_t i = 0; i < r.size(); ++i) s[r.thread_names()[r[i].thread]].push_back(named_event(r, i));
        return s;
    };
    if (per_thread(a) != per_thread(b)) return false;
    auto rf_map = [](const Run& r) {
        std::map<NamedEvent, NamedEvent> m;
        for (std::size_t i = 0; i < r.size(); ++i)
            if (auto w = r.writer(i)) m.emplace(named_event(r, i), named_event(r, *w));
        return m;
    };
    return rf_map(a) == rf_map(b);
}

}  // namespace blockeq
