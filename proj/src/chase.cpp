#include "mapcheck/chase.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <set>

namespace mapcheck {

std::optional<std::map<std::string, Term>> match_atom(const Atom& pattern, const Atom& fact) {
    if (pattern.predicate != fact.predicate) return std::nullopt;
    if (pattern.args.size() != fact.args.size()) return std::nullopt;
    std::map<std::string, Term> binding;
    for (std::size_t i = 0; i < pattern.args.size(); ++i) {
        const Term& p = pattern.args[i];
        const Term& v = fact.args[i];
        if (p.is_variable()) {
            auto [it, inserted] = binding.emplace(p.name(), v);
            if (!inserted && !(it->second == v)) return std::nullopt;
        } else if (!(p == v)) {
            return std::nullopt;
        }
    }
    return binding;
}

std::optional<Trigger> make_trigger(const Tgd& tgd, const Fact& fact) {
    auto binding = match_atom(tgd.body_atom(), fact.atom);
    if (!binding) return std::nullopt;
    return Trigger{&tgd, fact, std::move(*binding)};
}

std::vector<Fact> chase_step(const Instance& i, const Trigger& trigger, NullGenerator& gen) {
    const Tgd& tgd = *trigger.tgd;
    std::map<std::string, Term> binding = trigger.binding;

    // One fresh null per existential variable, shared across the head and
    // numbered by first occurrence, scanning head atoms left to right.
    for (const Atom& a : tgd.head)
        for (const Term& t : a.args)
            if (t.is_variable() && binding.count(t.name()) == 0)
                binding.emplace(t.name(), gen.fresh());

    std::vector<Fact> delta;
    std::set<Atom> seen;
    const std::uint64_t level = trigger.body_fact.level + 1;
    for (const Atom& a : tgd.head) {
        Atom instantiated;
        instantiated.predicate = a.predicate;
        instantiated.args.reserve(a.args.size());
        for (const Term& t : a.args)
            instantiated.args.push_back(t.is_variable() ? binding.at(t.name()) : t);
        if (i.contains(instantiated)) continue;
        if (!seen.insert(instantiated).second) continue;
        delta.push_back(Fact{std::move(instantiated), level});
    }
    return delta;
}

namespace {

void validate_tgds_against(const Schema& schema, const std::vector<Tgd>& tgds) {
    for (const Tgd& tgd : tgds) {
        if (tgd.body.size() != 1)
            throw error("chase requires single-atom dependency bodies, got: " + tgd.to_string());
        if (tgd.head.empty())
            throw error("dependency has an empty head: " + tgd.to_string());
        auto check = [&](const Atom& a) {
            auto arity = schema.arity_of(a.predicate);
            if (!arity)
                throw error("dependency uses predicate '" + a.predicate +
                            "' not declared in the instance schema");
            if (*arity != a.args.size())
                throw error("dependency atom " + a.to_string() + " does not match arity " +
                            std::to_string(*arity));
        };
        for (const Atom& a : tgd.body) check(a);
        for (const Atom& a : tgd.head) check(a);
    }
}

// Is there an extension of `binding` to the existential variables placing
// every head atom inside the instance?
bool head_satisfied(const Instance& inst, const Tgd& tgd,
                    const std::map<std::string, Term>& binding) {
    std::map<std::string, Term> bound = binding;
    std::function<bool(std::size_t)> match_from = [&](std::size_t idx) -> bool {
        if (idx == tgd.head.size()) return true;
        const Atom& pattern = tgd.head[idx];
        for (const auto& [atom, level] : inst.facts()) {
            if (atom.predicate != pattern.predicate) continue;
            if (atom.args.size() != pattern.args.size()) continue;
            std::vector<std::string> added;
            bool ok = true;
            for (std::size_t i = 0; i < pattern.args.size() && ok; ++i) {
                const Term& p = pattern.args[i];
                if (p.is_variable()) {
                    auto it = bound.find(p.name());
                    if (it == bound.end()) {
                        bound.emplace(p.name(), atom.args[i]);
                        added.push_back(p.name());
                    } else if (!(it->second == atom.args[i])) {
                        ok = false;
                    }
                } else if (!(p == atom.args[i])) {
                    ok = false;
                }
            }
            if (ok && match_from(idx + 1)) return true;
            for (const std::string& name : added) bound.erase(name);
        }
        return false;
    };
    return match_from(0);
}

}  // namespace

ChaseResult chase(const Instance& i, const std::vector<Tgd>& tgds, const ChaseConfig& cfg,
                  NullGenerator& gen) {
    validate_tgds_against(i.schema(), tgds);

    ChaseResult result{i, ChaseStatus::terminated, 0};
    Instance& working = result.instance;

    std::vector<Fact> worklist;
    worklist.reserve(working.size());
    for (const auto& [atom, level] : working.facts()) worklist.push_back(Fact{atom, level});
    std::stable_sort(worklist.begin(), worklist.end(),
                     [](const Fact& a, const Fact& b) { return a.level < b.level; });

    bool beyond_level = false;
    bool beyond_facts = false;

    for (std::size_t next = 0; next < worklist.size() && !beyond_facts; ++next) {
        const Fact fact = worklist[next];  // copy: worklist grows below
        for (const Tgd& tgd : tgds) {
            auto trigger = make_trigger(tgd, fact);
            if (!trigger) continue;
            if (cfg.mode == ChaseMode::restricted &&
                head_satisfied(working, tgd, trigger->binding))
                continue;
            if (cfg.max_level && fact.level + 1 > *cfg.max_level) {
                beyond_level = true;
                continue;
            }
            if (cfg.max_facts && working.size() >= *cfg.max_facts) {
                beyond_facts = true;
                break;
            }
            std::vector<Fact> delta = chase_step(working, *trigger, gen);
            ++result.steps;
            for (const Fact& produced : delta) {
                working.insert(produced);
                worklist.push_back(produced);
            }
        }
    }

    result.status = (beyond_level || beyond_facts) ? ChaseStatus::budget_exhausted
                                                   : ChaseStatus::terminated;
    return result;
}

ChaseResult chase(const Instance& i, const std::vector<Tgd>& tgds, const ChaseConfig& cfg) {
    NullGenerator gen(i.max_null_id() + 1);
    return chase(i, tgds, cfg, gen);
}

Instance chase_to_level(const Instance& i, const std::vector<Tgd>& tgds, std::uint64_t level) {
    ChaseConfig cfg;
    cfg.mode = ChaseMode::oblivious;
    cfg.max_facts = std::nullopt;
    cfg.max_level = level;
    return chase(i, tgds, cfg).instance;
}

namespace {

using Position = std::pair<std::string, std::size_t>;

}  // namespace

bool is_weakly_acyclic(const std::vector<Tgd>& tgds) {
    std::map<Position, std::size_t> node_of;
    auto node = [&](const std::string& predicate, std::size_t pos) {
        return node_of.emplace(Position{predicate, pos}, node_of.size()).first->second;
    };
    for (const Tgd& tgd : tgds) {
        for (const Atom& a : tgd.body)
            for (std::size_t p = 0; p < a.args.size(); ++p) node(a.predicate, p);
        for (const Atom& a : tgd.head)
            for (std::size_t p = 0; p < a.args.size(); ++p) node(a.predicate, p);
    }

    std::vector<std::set<std::size_t>> edges(node_of.size());
    std::vector<std::pair<std::size_t, std::size_t>> special;

    for (const Tgd& tgd : tgds) {
        std::map<std::string, std::vector<std::size_t>> body_positions;
        for (const Atom& a : tgd.body)
            for (std::size_t p = 0; p < a.args.size(); ++p)
                if (a.args[p].is_variable())
                    body_positions[a.args[p].name()].push_back(node(a.predicate, p));

        std::map<std::string, std::vector<std::size_t>> head_positions;
        std::vector<std::size_t> existential_positions;
        const auto existentials = tgd.existential_vars();
        for (const Atom& a : tgd.head)
            for (std::size_t p = 0; p < a.args.size(); ++p) {
                if (!a.args[p].is_variable()) continue;
                const std::string& name = a.args[p].name();
                if (existentials.count(name) != 0)
                    existential_positions.push_back(node(a.predicate, p));
                else
                    head_positions[name].push_back(node(a.predicate, p));
            }

        for (const auto& [var, from_nodes] : body_positions) {
            auto it = head_positions.find(var);
            if (it == head_positions.end()) continue;  // variable dropped by the head
            for (std::size_t from : from_nodes) {
                for (std::size_t to : it->second) edges[from].insert(to);
                for (std::size_t to : existential_positions) {
                    edges[from].insert(to);
                    special.emplace_back(from, to);
                }
            }
        }
    }

    auto reachable = [&](std::size_t from, std::size_t to) {
        std::vector<bool> seen(edges.size(), false);
        std::vector<std::size_t> stack{from};
        seen[from] = true;
        while (!stack.empty()) {
            std::size_t at = stack.back();
            stack.pop_back();
            if (at == to) return true;
            for (std::size_t next : edges[at])
                if (!seen[next]) {
                    seen[next] = true;
                    stack.push_back(next);
                }
        }
        return false;
    };

    for (const auto& [from, to] : special)
        if (reachable(to, from)) return false;
    return true;
}

std::uint64_t default_level_bound(const std::vector<Tgd>& tgds) {
    if (tgds.empty()) return 0;
    std::uint64_t width = 0;
    for (const Tgd& tgd : tgds) {
        for (const Atom& a : tgd.body) width = std::max<std::uint64_t>(width, a.args.size());
        for (const Atom& a : tgd.head) width = std::max<std::uint64_t>(width, a.args.size());
    }
    const std::uint64_t base = width + 1;
    std::uint64_t power = 1;
    for (std::uint64_t k = 0; k < width; ++k) {
        if (power > std::numeric_limits<std::uint64_t>::max() / base)
            return std::numeric_limits<std::uint64_t>::max();
        power *= base;
    }
    const std::uint64_t count = tgds.size();
    if (power > std::numeric_limits<std::uint64_t>::max() / count)
        return std::numeric_limits<std::uint64_t>::max();
    return count * power;
}

}  // namespace mapcheck
