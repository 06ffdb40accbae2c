#include "mapcheck/cli.hpp"

#include <chrono>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mapcheck/chase.hpp"
#include "mapcheck/containment.hpp"
#include "mapcheck/dummies.hpp"
#include "mapcheck/homomorphism.hpp"
#include "mapcheck/model.hpp"
#include "mapcheck/parse.hpp"
#include "mapcheck/query.hpp"

namespace mapcheck::cli {
namespace {

using nlohmann::json;

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

std::optional<std::uint64_t> parse_bound(const std::string& text) {
    if (text == "auto") return std::nullopt;
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(text, &used);
        if (used != text.size()) throw error("");
        return v;
    } catch (const std::exception&) {
        throw error("--bound expects 'auto' or a non-negative integer, got '" + text + "'");
    }
}

json facts_json(const Instance& i) {
    json arr = json::array();
    for (const auto& [atom, level] : i.facts()) arr.push_back(atom.to_string());
    return arr;
}

json witness_json(const WitnessRecord& w) {
    json j;
    j["direction"] = w.direction;
    j["instance"] = facts_json(w.instance);
    j["left_chase_facts"] = w.left_chase_facts;
    j["level_reached"] = w.level_reached;
    j["right_chase_complete"] = w.right_chase_complete;
    j["hom_found"] = w.hom.has_value();
    if (w.hom) {
        json h = json::object();
        for (const auto& [from, to] : w.hom->assignment) h[from.to_string()] = to.to_string();
        j["hom"] = h;
    }
    j["time_ms"] = w.time_ms;
    return j;
}

json verdict_json(const std::string& command, const Verdict& v, double time_ms) {
    json j;
    j["format"] = 1;
    j["command"] = command;
    j["verdict"] = to_string(v.outcome);
    j["reason"] = v.reason;
    j["bound_used"] = v.bound_used;
    j["bounded"] = v.bounded;
    j["instances_checked"] = v.instances_checked;
    j["weakly_acyclic"] = {{"left", v.left_weakly_acyclic}, {"right", v.right_weakly_acyclic}};
    json ws = json::array();
    for (const auto& w : v.witnesses) ws.push_back(witness_json(w));
    j["witnesses"] = ws;
    j["time_ms"] = time_ms;
    return j;
}

void print_witnesses(const Verdict& v, std::ostream& out) {
    for (const auto& w : v.witnesses) {
        std::string fact = "(empty)";
        if (!w.instance.empty()) fact = w.instance.facts().begin()->first.to_string();
        out << "  [" << w.direction << "] " << fact << ": left " << w.left_chase_facts
            << " facts, right level " << w.level_reached
            << (w.right_chase_complete ? " (saturated)" : "") << ", hom "
            << (w.hom ? "yes" : "no") << "\n";
    }
}

int outcome_exit(Outcome o) {
    switch (o) {
        case Outcome::contained: return 0;
        case Outcome::not_contained: return 1;
        case Outcome::inconclusive: return 2;
    }
    return 2;
}

struct ValidateOpts {
    std::string mapping_path;
    bool as_json = false;
};

int cmd_validate(const ValidateOpts& o, std::ostream& out) {
    const SourceText text = load_file(o.mapping_path);
    const ParsedMapping pm = parse_mapping_raw(text);
    const ValidationReport report = validate_mapping(pm.mapping);

    const auto position_of = [&](const Violation& v) -> std::optional<SourcePos> {
        if (v.index < 0) return std::nullopt;
        const auto idx = static_cast<std::size_t>(v.index);
        if (v.group == "st" && idx < pm.st_positions.size()) return pm.st_positions[idx];
        if (v.group == "t" && idx < pm.t_positions.size()) return pm.t_positions[idx];
        return std::nullopt;
    };

    if (o.as_json) {
        json j;
        j["format"] = 1;
        j["command"] = "validate";
        j["valid"] = report.valid();
        json vs = json::array();
        for (const auto& v : report.violations) {
            json jv = {{"where", v.where}, {"message", v.message}};
            if (const auto pos = position_of(v)) {
                jv["line"] = pos->line;
                jv["column"] = pos->column;
            }
            vs.push_back(jv);
        }
        j["violations"] = vs;
        out << j.dump(2) << "\n";
    } else if (report.valid()) {
        out << "ok\n";
    } else {
        for (const auto& v : report.violations) {
            out << text.origin;
            if (const auto pos = position_of(v)) out << ":" << pos->line << ":" << pos->column;
            out << ": " << v.where << ": " << v.message << "\n";
        }
    }
    return report.valid() ? 0 : 1;
}

struct ChaseOpts {
    std::string mapping_path;
    std::string instance_path;
    std::string mode = "oblivious";
    std::optional<std::uint64_t> levels;
    std::uint64_t max_facts = 100000;
    bool as_json = false;
};

int cmd_chase(const ChaseOpts& o, std::ostream& out, std::ostream& err) {
    const SchemaMapping m = parse_mapping(load_file(o.mapping_path));
    const Instance input = parse_instance(load_file(o.instance_path), m.union_schema());

    ChaseConfig cfg;
    if (o.mode == "oblivious") {
        cfg.mode = ChaseMode::oblivious;
    } else if (o.mode == "restricted") {
        cfg.mode = ChaseMode::restricted;
    } else {
        throw error("--mode expects 'oblivious' or 'restricted', got '" + o.mode + "'");
    }
    cfg.max_facts = o.max_facts == 0 ? std::nullopt : std::optional<std::uint64_t>(o.max_facts);
    cfg.max_level = o.levels;

    const ChaseResult result = chase(input, m.all_tgds(), cfg);
    const bool done = result.status == ChaseStatus::terminated;

    if (o.as_json) {
        json j;
        j["format"] = 1;
        j["command"] = "chase";
        j["status"] = done ? "terminated" : "budget_exhausted";
        j["steps"] = result.steps;
        json facts = json::array();
        for (const auto& [atom, level] : result.instance.facts())
            facts.push_back({{"atom", atom.to_string()}, {"level", level}});
        j["facts"] = facts;
        out << j.dump(2) << "\n";
    } else {
        for (const auto& [atom, level] : result.instance.facts())
            out << atom.to_string() << ".  -- level " << level << "\n";
        err << (done ? "terminated" : "budget exhausted") << " after " << result.steps
            << " steps, " << result.instance.size() << " facts\n";
    }
    return done ? 0 : 4;
}

struct DummiesOpts {
    std::string mapping_path;
    bool as_json = false;
};

int cmd_dummies(const DummiesOpts& o, std::ostream& out) {
    const SchemaMapping m = parse_mapping(load_file(o.mapping_path));
    const DummySet ds = dummy_instances(m);

    if (o.as_json) {
        json j;
        j["format"] = 1;
        j["command"] = "dummies";
        j["count"] = ds.instances.size();
        json arr = json::array();
        for (std::size_t k = 0; k < ds.instances.size(); ++k) {
            const DummyInstance& d = ds.instances[k];
            arr.push_back({{"index", k + 1},
                           {"predicate", d.predicate},
                           {"partition", d.partition},
                           {"facts", facts_json(d.instance)}});
        }
        j["dummies"] = arr;
        out << j.dump(2) << "\n";
    } else {
        for (std::size_t k = 0; k < ds.instances.size(); ++k) {
            out << "--- " << (k + 1) << " ---\n";
            out << serialize_instance(ds.instances[k].instance);
        }
    }
    return 0;
}

struct HomOpts {
    std::string src_path;
    std::string dst_path;
    std::string mapping_path;
    bool as_json = false;
};

int cmd_hom(const HomOpts& o, std::ostream& out) {
    const SchemaMapping m = parse_mapping(load_file(o.mapping_path));
    const Schema schema = m.union_schema();
    const Instance src = parse_instance(load_file(o.src_path), schema);
    const Instance dst = parse_instance(load_file(o.dst_path), schema);

    const auto hom = find_homomorphism(src, dst);
    if (o.as_json) {
        json j;
        j["format"] = 1;
        j["command"] = "hom";
        j["found"] = hom.has_value();
        if (hom) {
            json h = json::object();
            for (const auto& [from, to] : hom->assignment) h[from.to_string()] = to.to_string();
            j["assignment"] = h;
        }
        out << j.dump(2) << "\n";
    } else {
        out << (hom ? hom->to_string() : std::string("none")) << "\n";
    }
    return hom ? 0 : 1;
}

struct DecideOpts {
    std::string left_path;
    std::string right_path;
    std::string bound = "auto";
    std::uint64_t step = 4;
    unsigned threads = 1;
    std::uint64_t max_facts = 100000;
    bool verbose = false;
    bool as_json = false;
};

int cmd_decide(const DecideOpts& o, bool equivalence, std::ostream& out) {
    const SchemaMapping left = parse_mapping(load_file(o.left_path));
    const SchemaMapping right = parse_mapping(load_file(o.right_path));

    ContainmentConfig cfg;
    cfg.level_bound = parse_bound(o.bound);
    cfg.deepening_step = o.step == 0 ? 1 : o.step;
    cfg.threads = o.threads == 0 ? 1 : o.threads;
    cfg.chase_budget.max_facts =
        o.max_facts == 0 ? std::nullopt : std::optional<std::uint64_t>(o.max_facts);

    const auto start = std::chrono::steady_clock::now();
    const Verdict v = equivalence ? check_equivalence(left, right, cfg)
                                  : check_containment(left, right, cfg);
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();

    if (o.as_json) {
        out << verdict_json(equivalence ? "equiv" : "contains", v, ms).dump(2) << "\n";
    } else {
        std::string text = to_string(v.outcome);
        if (equivalence) {
            if (v.outcome == Outcome::contained) text = "equivalent";
            if (v.outcome == Outcome::not_contained) text = "not_equivalent";
        }
        out << "verdict: " << text << "\n";
        if (!v.reason.empty()) out << "reason: " << v.reason << "\n";
        out << "level bound: " << v.bound_used << "\n";
        out << "dummies checked: " << v.instances_checked << "\n";
        if (o.verbose) {
            out << "weakly acyclic: left " << (v.left_weakly_acyclic ? "yes" : "no") << ", right "
                << (v.right_weakly_acyclic ? "yes" : "no") << "\n";
            print_witnesses(v, out);
        }
    }
    return outcome_exit(v.outcome);
}

struct CertainOpts {
    std::string mapping_path;
    std::string instance_path;
    std::string query_path;
    std::uint64_t max_facts = 100000;
    bool as_json = false;
};

int cmd_certain(const CertainOpts& o, std::ostream& out, std::ostream& err) {
    const SchemaMapping m = parse_mapping(load_file(o.mapping_path));
    const Instance input = parse_instance(load_file(o.instance_path), m.source);
    const ConjunctiveQuery q = parse_query(load_file(o.query_path), m.target);

    ChaseConfig budget;
    budget.max_facts = o.max_facts == 0 ? std::nullopt : std::optional<std::uint64_t>(o.max_facts);
    const AnswerSet answers = certain_answers(q, input, m, budget);

    if (o.as_json) {
        json j;
        j["format"] = 1;
        j["command"] = "certain";
        json tuples = json::array();
        for (const auto& tuple : answers.tuples) {
            json row = json::array();
            for (const Term& t : tuple) row.push_back(t.to_string());
            tuples.push_back(row);
        }
        j["tuples"] = tuples;
        j["lower_bound"] = answers.lower_bound;
        out << j.dump(2) << "\n";
    } else {
        for (const auto& tuple : answers.tuples) {
            out << "(";
            for (std::size_t i = 0; i < tuple.size(); ++i) {
                if (i > 0) out << ", ";
                out << tuple[i].to_string();
            }
            out << ")\n";
        }
        if (answers.lower_bound)
            err << "chase budget exhausted: the answers are a lower bound\n";
    }
    return answers.lower_bound ? 4 : 0;
}

struct OracleOpts {
    std::string left_path;
    std::string right_path;
    std::size_t max_facts = 2;
    std::string domain = "a,b";
    std::uint64_t chase_facts = 100000;
    bool find_query = false;
    bool verbose = false;
    bool as_json = false;
};

int cmd_oracle(const OracleOpts& o, std::ostream& out) {
    const SchemaMapping left = parse_mapping(load_file(o.left_path));
    const SchemaMapping right = parse_mapping(load_file(o.right_path));
    const std::vector<std::string> domain = split_csv(o.domain);

    ChaseConfig budget;
    budget.max_facts =
        o.chase_facts == 0 ? std::nullopt : std::optional<std::uint64_t>(o.chase_facts);

    const auto start = std::chrono::steady_clock::now();
    const Verdict v = oracle_containment(left, right, o.max_facts, domain, budget);
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();

    std::optional<std::pair<Instance, ConjunctiveQuery>> separation;
    if (o.find_query && v.outcome == Outcome::not_contained)
        separation = find_separating_example(left, right, o.max_facts, domain, budget);

    if (o.as_json) {
        json j = verdict_json("oracle", v, ms);
        if (separation) {
            j["separating"] = {{"instance", facts_json(separation->first)},
                               {"query", separation->second.to_string()}};
        }
        out << j.dump(2) << "\n";
    } else {
        out << "verdict: " << to_string(v.outcome) << "\n";
        if (!v.reason.empty()) out << "reason: " << v.reason << "\n";
        out << "instances checked: " << v.instances_checked << "\n";
        if (v.outcome == Outcome::contained)
            out << "holds for all source instances with at most " << o.max_facts << " facts over {"
                << o.domain << "}\n";
        if (separation) {
            out << "separating instance:\n";
            for (const auto& [atom, level] : separation->first.facts())
                out << "  " << atom.to_string() << ".\n";
            out << "separating query:\n  " << separation->second.to_string() << "\n";
        }
        if (o.verbose) print_witnesses(v, out);
    }
    return outcome_exit(v.outcome);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"containment and equivalence of schema mappings with LAV dependencies"};
    app.name("mapcheck");
    app.require_subcommand(1);

    int code = 0;

    ValidateOpts vo;
    auto* validate = app.add_subcommand("validate", "parse a mapping and report shape violations");
    validate->add_option("mapping", vo.mapping_path, "mapping file")->required();
    validate->add_flag("--json", vo.as_json, "machine-readable output");
    validate->callback([&] { code = cmd_validate(vo, out); });

    ChaseOpts co;
    auto* chase_cmd = app.add_subcommand("chase", "chase an instance with a mapping's dependencies");
    chase_cmd->add_option("mapping", co.mapping_path, "mapping file")->required();
    chase_cmd->add_option("instance", co.instance_path, "instance file")->required();
    chase_cmd->add_option("--mode", co.mode, "oblivious or restricted (default oblivious)");
    chase_cmd->add_option("--levels", co.levels, "stop after this chase level");
    chase_cmd->add_option("--max-facts", co.max_facts, "fact budget, 0 = unbounded (default 100000)");
    chase_cmd->add_flag("--json", co.as_json, "machine-readable output");
    chase_cmd->callback([&] { code = cmd_chase(co, out, err); });

    DummiesOpts duo;
    auto* dummies_cmd = app.add_subcommand("dummies", "print the canonical single-fact instances");
    dummies_cmd->add_option("mapping", duo.mapping_path, "mapping file")->required();
    dummies_cmd->add_flag("--json", duo.as_json, "machine-readable output");
    dummies_cmd->callback([&] { code = cmd_dummies(duo, out); });

    HomOpts ho;
    auto* hom_cmd = app.add_subcommand("hom", "search a homomorphism between two instances");
    hom_cmd->add_option("src", ho.src_path, "source instance file")->required();
    hom_cmd->add_option("dst", ho.dst_path, "destination instance file")->required();
    hom_cmd->add_option("--schema", ho.mapping_path, "mapping file declaring the predicates")
        ->required();
    hom_cmd->add_flag("--json", ho.as_json, "machine-readable output");
    hom_cmd->callback([&] { code = cmd_hom(ho, out); });

    DecideOpts deco;
    const auto add_decide_options = [&](CLI::App* sub) {
        sub->add_option("left", deco.left_path, "mapping file")->required();
        sub->add_option("right", deco.right_path, "mapping file")->required();
        sub->add_option("--bound", deco.bound, "level horizon: auto or a number (default auto)");
        sub->add_option("--step", deco.step, "level deepening step (default 4)");
        sub->add_option("--threads", deco.threads, "parallel dummy checks (default 1)");
        sub->add_option("--max-facts", deco.max_facts,
                        "left chase fact budget, 0 = unbounded (default 100000)");
        sub->add_flag("-v,--verbose", deco.verbose, "per-dummy detail");
        sub->add_flag("--json", deco.as_json, "machine-readable output");
    };
    auto* contains_cmd =
        app.add_subcommand("contains", "decide whether left is contained in right");
    add_decide_options(contains_cmd);
    contains_cmd->callback([&] { code = cmd_decide(deco, false, out); });

    auto* equiv_cmd = app.add_subcommand("equiv", "decide whether the two mappings are equivalent");
    add_decide_options(equiv_cmd);
    equiv_cmd->callback([&] { code = cmd_decide(deco, true, out); });

    CertainOpts ceo;
    auto* certain_cmd =
        app.add_subcommand("certain", "certain answers of a target query on a source instance");
    certain_cmd->add_option("mapping", ceo.mapping_path, "mapping file")->required();
    certain_cmd->add_option("instance", ceo.instance_path, "source instance file")->required();
    certain_cmd->add_option("query", ceo.query_path, "query file")->required();
    certain_cmd->add_option("--max-facts", ceo.max_facts,
                            "chase fact budget, 0 = unbounded (default 100000)");
    certain_cmd->add_flag("--json", ceo.as_json, "machine-readable output");
    certain_cmd->callback([&] { code = cmd_certain(ceo, out, err); });

    OracleOpts oo;
    auto* oracle_cmd = app.add_subcommand(
        "oracle", "brute-force containment check over small source instances");
    oracle_cmd->add_option("left", oo.left_path, "mapping file")->required();
    oracle_cmd->add_option("right", oo.right_path, "mapping file")->required();
    oracle_cmd->add_option("--max-facts", oo.max_facts,
                           "largest source instance size (default 2)");
    oracle_cmd->add_option("--domain", oo.domain,
                           "comma-separated constants (default a,b)");
    oracle_cmd->add_option("--chase-facts", oo.chase_facts,
                           "chase fact budget, 0 = unbounded (default 100000)");
    oracle_cmd->add_flag("--find-query", oo.find_query,
                         "on failure, derive a separating query");
    oracle_cmd->add_flag("-v,--verbose", oo.verbose, "per-instance detail");
    oracle_cmd->add_flag("--json", oo.as_json, "machine-readable output");
    oracle_cmd->callback([&] { code = cmd_oracle(oo, out); });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int r = app.exit(e, out, err);
        return r == 0 ? 0 : 3;
    } catch (const parse_error& e) {
        err << e.what() << "\n";
        return 3;
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    }
    return code;
}

}  // namespace mapcheck::cli
