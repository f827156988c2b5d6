// blockeq: command-line front end for the analysis library.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "blockeq/atomicity.hpp"
#include "blockeq/concurrency.hpp"
#include "blockeq/hardness.hpp"
#include "blockeq/oracle.hpp"
#include "blockeq/orders.hpp"
#include "blockeq/sat.hpp"

using namespace blockeq;
using json = nlohmann::json;

namespace {

enum class Format { Text, Dot, JsonLines };

struct Config {
    OracleBounds bounds;
    std::uint64_t seed = 0;
    Format format = Format::Text;
};

// Exit codes.
constexpr int kOk = 0, kNegative = 1, kUsage = 2, kBound = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ostringstream ss;
    if (path == "-") {
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    ss << in.rdbuf();
    return ss.str();
}

Run load_run(const std::string& path) {
    try {
        return parse_run(read_file(path));
    } catch (const TraceError& e) {
        throw TraceError(path + ": " + e.what(), e.line());
    }
}

void load_config(const std::string& path, Config& cfg) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw UsageError("config '" + path + "': " + e.what());
    }
    auto positive = [&](const char* key, std::size_t& into) {
        if (!j.contains("oracle") || !j["oracle"].contains(key)) return;
        auto v = j["oracle"][key].get<long long>();
        if (v <= 0) throw UsageError(std::string("config: oracle.") + key + " must be positive");
        into = static_cast<std::size_t>(v);
    };
    positive("swap_events", cfg.bounds.swap_events);
    positive("rf_events", cfg.bounds.rf_events);
    positive("max_members", cfg.bounds.max_members);
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("format")) {
        auto f = j["format"].get<std::string>();
        if (f == "text") cfg.format = Format::Text;
        else if (f == "dot") cfg.format = Format::Dot;
        else if (f == "json-lines") cfg.format = Format::JsonLines;
        else throw UsageError("config: unknown format '" + f + "'");
    }
}

// "--blocks all|none|writes=i,j,k" or, when empty, the trace's own marks.
BlockSet select_blocks(const Run& run, const std::string& spec) {
    if (spec.empty()) return run.has_marks() ? blocks_from_annotation(run, run.marks()) : BlockSet(run, {});
    if (spec == "all") return all_blocks(run);
    if (spec == "none") return BlockSet(run, {});
    if (spec.rfind("writes=", 0) == 0) {
        std::vector<std::size_t> writes;
        std::stringstream ss(spec.substr(7));
        for (std::string item; std::getline(ss, item, ',');) {
            std::size_t used = 0;
            unsigned long v = 0;
            try {
                v = std::stoul(item, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != item.size() || v == 0) throw UsageError("bad write position '" + item + "' in --blocks");
            writes.push_back(v - 1);
        }
        return blocks_for_writes(run, writes);
    }
    throw UsageError("--blocks expects all, none or writes=i,j,k");
}

std::string event_name(std::size_t pos) { return "e" + std::to_string(pos + 1); }

int emit_order(const Run& run, const PartialOrder& order, bool cyclic, const Config& cfg, const std::string& name) {
    PairList edges = order.acyclic() ? order.cover() : order.pairs();
    if (cyclic) std::cerr << "warning: order is cyclic; printing all pairs\n";
    switch (cfg.format) {
    case Format::Dot:
        std::cout << "digraph " << name << " {\n";
        for (std::size_t i = 0; i < run.size(); ++i)
            std::cout << "  " << event_name(i) << " [label=\"" << run.line_text(i) << "\"];\n";
        for (auto [a, b] : edges) std::cout << "  " << event_name(a) << " -> " << event_name(b) << ";\n";
        std::cout << "}\n";
        break;
    case Format::JsonLines:
        for (auto [a, b] : edges) std::cout << json{{"from", a + 1}, {"to", b + 1}}.dump() << '\n';
        break;
    case Format::Text:
        for (auto [a, b] : edges) std::cout << event_name(a) << " -> " << event_name(b) << '\n';
        break;
    }
    return kOk;
}

std::string relation_name(Relation r) {
    switch (r) {
    case Relation::Maz: return "maz";
    case Relation::Block: return "blocks";
    case Relation::ReadsFrom: return "rf";
    }
    return "";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Happens-before, block equivalence and atomicity checks for concurrent runs"};
    app.require_subcommand(1);

    Config cfg;
    std::string config_path, format = "text";
    std::size_t swap_bound = 0, rf_bound = 0;
    app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "dot", "json-lines"}));
    app.add_option("--seed", cfg.seed, "Tie-break seed for witnesses");
    app.add_option("--max-swap-events", swap_bound, "Oracle bound for maz and block enumeration")
        ->check(CLI::PositiveNumber);
    app.add_option("--max-rf-events", rf_bound, "Oracle bound for rf enumeration")->check(CLI::PositiveNumber);
    app.fallthrough();

    std::string trace, blocks_spec;

    auto* validate = app.add_subcommand("validate", "Check that a trace is well formed");
    validate->add_option("trace", trace)->required();

    auto* hb = app.add_subcommand("hb", "Conflict happens-before order");
    hb->add_option("trace", trace)->required();

    bool unsaturated = false;
    auto* bhb = app.add_subcommand("bhb", "Block happens-before order");
    bhb->add_option("trace", trace)->required();
    bhb->add_option("--blocks", blocks_spec, "all, none or writes=i,j,k");
    bhb->add_flag("--unsaturated", unsaturated, "Skip the block saturation rules");

    bool witness = false;
    auto* atom = app.add_subcommand("atomicity", "Liberal atomicity and conflict serializability");
    atom->add_option("trace", trace)->required();
    atom->add_option("--blocks", blocks_spec, "all, none or writes=i,j,k");
    atom->add_flag("--witness", witness, "Print a serial equivalent run");

    std::string c_text, d_text, mode = "maz";
    std::vector<std::size_t> events;
    bool streaming = false;
    auto* conc = app.add_subcommand("concurrent", "Causal concurrency between symbols or events");
    conc->add_option("trace", trace)->required();
    conc->add_option("--c", c_text, "First label, e.g. \"T1 r x\"");
    conc->add_option("--d", d_text, "Second label");
    conc->add_option("--mode", mode)->check(CLI::IsMember({"maz", "blocks", "general"}));
    conc->add_option("--events", events, "Two 1-based event positions")->expected(2);
    conc->add_option("--blocks", blocks_spec, "all, none or writes=i,j,k");
    conc->add_flag("--streaming", streaming, "General mode: track reachable states instead of enumerating");

    std::string relation = "maz";
    std::size_t limit = 0;
    auto* enumerate = app.add_subcommand("enumerate", "Enumerate an equivalence class");
    enumerate->add_option("trace", trace)->required();
    enumerate->add_option("--relation", relation)->check(CLI::IsMember({"maz", "blocks", "rf"}));
    enumerate->add_option("--limit", limit, "Print up to N members");
    enumerate->add_option("--blocks", blocks_spec, "all, none or writes=i,j,k");

    std::string bits_a, bits_b;
    bool check = false;
    auto* gen = app.add_subcommand("gen-hardness", "Emit the equality reduction trace");
    gen->add_option("--a", bits_a)->required();
    gen->add_option("--b", bits_b)->required();
    gen->add_flag("--check", check, "Verify the reduction with the rf oracle (n <= 3)");

    auto* annot = app.add_subcommand("annotate", "Print the trace with block marks");
    annot->add_option("trace", trace)->required();
    annot->add_option("--blocks", blocks_spec, "all, none or writes=i,j,k");

    std::size_t every = 0;
    auto* sat = app.add_subcommand("sat", "Run the saturation monitor");
    sat->add_option("trace", trace)->required();
    sat->add_option("--blocks", blocks_spec, "all, none or writes=i,j,k");
    sat->add_option("--dump-state-every", every, "Print the state after every k events");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (!config_path.empty()) load_config(config_path, cfg);
        if (app.count("--format")) cfg.format = format == "dot" ? Format::Dot
                                                : format == "json-lines" ? Format::JsonLines
                                                                         : Format::Text;
        if (swap_bound) cfg.bounds.swap_events = swap_bound;
        if (rf_bound) cfg.bounds.rf_events = rf_bound;

        if (*validate) {
            Run run = load_run(trace);
            std::cout << "ok: " << run.size() << " events, " << run.thread_count() << " threads, "
                      << run.var_count() << " variables\n";
            return kOk;
        }
        if (*hb) {
            Run run = load_run(trace);
            return emit_order(run, mazurkiewicz_hb(run), false, cfg, "hb");
        }
        if (*bhb) {
            Run run = load_run(trace);
            BlockSet blocks = select_blocks(run, blocks_spec);
            if (unsaturated) return emit_order(run, block_hb(run, blocks), false, cfg, "bhb");
            Saturation s = saturate(run, blocks);
            return emit_order(run, s.order, s.cyclic, cfg, "bhb");
        }
        if (*atom) {
            Run run = load_run(trace);
            BlockSet blocks = select_blocks(run, blocks_spec);
            const bool la = is_liberally_atomic(run, blocks);
            const bool cs = is_conflict_serializable(run, blocks);
            if (cfg.format == Format::JsonLines)
                std::cout << json{{"liberally_atomic", la}, {"conflict_serializable", cs}}.dump() << '\n';
            else
                std::cout << "liberally-atomic: " << (la ? "yes" : "no") << "\nconflict-serializable: "
                          << (cs ? "yes" : "no") << '\n';
            if (witness) {
                if (!la) {
                    std::cerr << "warning: no serial witness; blocks are not liberally atomic\n";
                } else {
                    std::vector<std::size_t> rank;
                    if (cfg.seed != 0) {
                        rank.resize(block_graph(run, blocks).size());
                        std::iota(rank.begin(), rank.end(), 0);
                        std::shuffle(rank.begin(), rank.end(), std::mt19937_64(cfg.seed));
                    }
                    auto order = serial_witness(run, blocks, rank);
                    Run serial = run.with_marks(annotate(run, blocks)).permuted(order);
                    std::cout << "witness:\n" << format_run(serial, true);
                }
            }
            return la ? kOk : kNegative;
        }
        if (*conc) {
            Run run = load_run(trace);
            const ConcMode m = mode == "maz" ? ConcMode::Mazurkiewicz
                               : mode == "blocks" ? ConcMode::GivenBlocks
                                                  : ConcMode::MostGeneral;
            bool result = false;
            if (!events.empty()) {
                if (!c_text.empty() || !d_text.empty()) throw UsageError("use either --events or --c/--d");
                for (std::size_t& e : events) {
                    if (e == 0 || e > run.size()) throw UsageError("event position out of range");
                    --e;
                }
                Annotation annot = m == ConcMode::GivenBlocks ? annotate(run, select_blocks(run, blocks_spec))
                                                              : Annotation{};
                result = conc_events(run, events[0], events[1], m, annot);
            } else {
                if (c_text.empty() || d_text.empty()) throw UsageError("--c and --d are required without --events");
                Label c = parse_label(run, c_text), d = parse_label(run, d_text);
                switch (m) {
                case ConcMode::Mazurkiewicz: result = conc_symbols_maz(run, c, d); break;
                case ConcMode::GivenBlocks:
                    result = conc_symbols_blocks(run, annotate(run, select_blocks(run, blocks_spec)), c, d);
                    break;
                case ConcMode::MostGeneral:
                    result = conc_symbols_general(run, c, d,
                                                  streaming ? GeneralStrategy::Streaming : GeneralStrategy::Enumerate);
                    break;
                }
            }
            if (cfg.format == Format::JsonLines)
                std::cout << json{{"concurrent", result}, {"mode", mode}}.dump() << '\n';
            else
                std::cout << (result ? "concurrent" : "ordered") << '\n';
            return result ? kOk : kNegative;
        }
        if (*enumerate) {
            Run run = load_run(trace);
            EquivClass cls;
            if (relation == "maz") cls = enum_maz_class(run, cfg.bounds);
            else if (relation == "blocks") cls = enum_block_class(run, select_blocks(run, blocks_spec), cfg.bounds);
            else cls = enum_rf_class(run, cfg.bounds);
            if (cfg.format == Format::JsonLines) {
                std::cout << json{{"relation", relation_name(cls.relation)}, {"members", cls.size()}}.dump() << '\n';
                for (std::size_t i = 0; i < std::min(limit, cls.size()); ++i)
                    std::cout << json{{"member", format_run(run.permuted(to_order(cls.members[i])))}}.dump() << '\n';
            } else {
                std::cout << "members: " << cls.size() << '\n';
                for (std::size_t i = 0; i < std::min(limit, cls.size()); ++i)
                    std::cout << "--- member " << i + 1 << '\n' << format_run(run.permuted(to_order(cls.members[i])));
            }
            return kOk;
        }
        if (*gen) {
            EqualityInstance inst;
            try {
                inst = {parse_bits(bits_a), parse_bits(bits_b)};
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            if (inst.a.size() != inst.b.size()) throw UsageError("--a and --b must have equal length");
            HardnessTrace h = gen_equality_trace(inst);
            std::cout << format_run(h.run);
            std::cout << "# theta1 = e" << h.theta1 + 1 << ", theta2 = e" << h.theta2 + 1 << '\n';
            if (check) {
                if (inst.a.size() > 3) {
                    std::cerr << "warning: --check skipped for n > 3\n";
                    return kOk;
                }
                const bool ordered = rf_ordered(h.run, h.theta1, h.theta2, cfg.bounds);
                const bool holds = ordered == (inst.a == inst.b);
                std::cout << "# ordered: " << (ordered ? "yes" : "no") << ", reduction "
                          << (holds ? "holds" : "fails") << '\n';
                return holds ? kOk : kNegative;
            }
            return kOk;
        }
        if (*annot) {
            Run run = load_run(trace);
            BlockSet blocks = select_blocks(run, blocks_spec);
            std::cout << format_run(run.with_marks(annotate(run, blocks)), true);
            return kOk;
        }
        if (*sat) {
            Run run = load_run(trace);
            Annotation a = annotate(run, select_blocks(run, blocks_spec));
            Alphabet sigma = Alphabet::for_run(run);
            auto word = sigma.letters_of(run, a);
            SatState s = sat_initial(sigma);
            for (std::size_t i = 0; i < word.size(); ++i) {
                s = sat_step(sigma, s, word[i]);
                if (every > 0 && (i + 1) % every == 0 && i + 1 < word.size())
                    std::cout << "--- after " << i + 1 << " events\n" << dump_state(sigma, s, run);
            }
            std::cout << "--- after " << word.size() << " events\n" << dump_state(sigma, s, run);
            return kOk;
        }
    } catch (const OracleBoundExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBound;
    } catch (const TraceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const BlockError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
