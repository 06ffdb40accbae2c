#include "mapcheck/query.hpp"

#include <algorithm>
#include <functional>

#include "mapcheck/dummies.hpp"
#include "mapcheck/homomorphism.hpp"
#include "mapcheck/parse.hpp"

namespace mapcheck {

AnswerSet evaluate_query(const ConjunctiveQuery& q, const Instance& i) {
    if (q.body.empty()) throw error("query body must not be empty");
    for (const Atom& a : q.body) {
        auto arity = i.schema().arity_of(a.predicate);
        if (!arity)
            throw error("query predicate '" + a.predicate + "' is not declared in the schema");
        if (*arity != a.args.size())
            throw error("query atom " + a.to_string() + " does not match arity " +
                        std::to_string(*arity));
        for (const Term& t : a.args)
            if (t.is_null()) throw error("labelled nulls cannot appear in queries");
    }
    auto body_vars = q.body_var_names();
    for (const std::string& v : q.head_vars)
        if (body_vars.count(v) == 0)
            throw error("unsafe head variable '" + v + "' does not occur in the body");

    // The body as a transient instance: each variable becomes a null.
    std::map<std::string, Term> null_of;
    std::uint64_t next = 1;
    Instance pattern(i.schema());
    for (const Atom& a : q.body) {
        Atom fact;
        fact.predicate = a.predicate;
        for (const Term& t : a.args) {
            if (t.is_variable()) {
                auto [it, inserted] = null_of.emplace(t.name(), Term::null(next));
                if (inserted) ++next;
                fact.args.push_back(it->second);
            } else {
                fact.args.push_back(t);
            }
        }
        pattern.insert(fact, 0);
    }

    AnswerSet out;
    for_each_homomorphism(pattern, i, [&](const Homomorphism& h) {
        std::vector<Term> tuple;
        tuple.reserve(q.head_vars.size());
        for (const std::string& v : q.head_vars) tuple.push_back(h.apply(null_of.at(v)));
        out.tuples.insert(std::move(tuple));
        return true;
    });
    return out;
}

AnswerSet certain_answers(const ConjunctiveQuery& q, const Instance& i, const SchemaMapping& m,
                          const ChaseConfig& budget) {
    if (!(i.schema() == m.source))
        throw error("certain answers expect an instance over the mapping's source schema");
    for (const Atom& a : q.body)
        if (!m.target.contains(a.predicate))
            throw error("query predicate '" + a.predicate + "' is not part of the target schema");

    Instance lifted = i.with_schema(m.union_schema());
    ChaseResult result = chase(lifted, m.all_tgds(), budget);
    AnswerSet all = evaluate_query(q, result.instance);

    AnswerSet out;
    out.null_free = true;
    out.lower_bound = result.status == ChaseStatus::budget_exhausted;
    for (const auto& tuple : all.tuples) {
        bool has_null = std::any_of(tuple.begin(), tuple.end(),
                                    [](const Term& t) { return t.is_null(); });
        if (!has_null) out.tuples.insert(tuple);
    }
    return out;
}

namespace {

// Sorted predicate multisets of the given size.
void predicate_multisets(const std::vector<std::string>& predicates, std::size_t size,
                         std::size_t from, std::vector<std::string>& current,
                         const std::function<void(const std::vector<std::string>&)>& yield) {
    if (current.size() == size) {
        yield(current);
        return;
    }
    for (std::size_t i = from; i < predicates.size(); ++i) {
        current.push_back(predicates[i]);
        predicate_multisets(predicates, size, i, current, yield);
        current.pop_back();
    }
}

// Canonical key of an instance under renaming of the domain constants: the
// minimal serialization over all permutations of the domain.
std::string renaming_key(const Instance& inst, const std::vector<std::string>& domain) {
    std::vector<std::string> perm = domain;
    std::sort(perm.begin(), perm.end());
    std::string best;
    do {
        std::map<std::string, std::string> rename;
        for (std::size_t i = 0; i < domain.size(); ++i) rename[domain[i]] = perm[i];
        Instance renamed(inst.schema());
        for (const auto& [atom, level] : inst.facts()) {
            Atom image;
            image.predicate = atom.predicate;
            for (const Term& t : atom.args)
                image.args.push_back(Term::constant(rename.at(t.name())));
            renamed.insert(image, 0);
        }
        std::string key = serialize_instance(renamed);
        if (best.empty() || key < best) best = key;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace

std::vector<Instance> enumerate_source_instances(const Schema& source, std::size_t max_facts,
                                                 const std::vector<std::string>& domain) {
    if (domain.empty()) throw error("the oracle domain must contain at least one constant");
    {
        std::set<std::string> unique(domain.begin(), domain.end());
        if (unique.size() != domain.size())
            throw error("the oracle domain must not repeat constants");
    }

    std::vector<std::string> predicates;
    for (const auto& [name, arity] : source.relations()) predicates.push_back(name);

    std::vector<Instance> out;
    out.emplace_back(source);  // the empty instance
    std::set<std::string> seen;

    for (std::size_t k = 1; k <= max_facts; ++k) {
        std::vector<std::string> current;
        predicate_multisets(predicates, k, 0, current, [&](const std::vector<std::string>& preds) {
            std::size_t positions = 0;
            for (const std::string& p : preds) positions += *source.arity_of(p);
            for (const auto& code : set_partitions(positions)) {
                std::size_t blocks = 0;
                for (std::size_t b : code) blocks = std::max(blocks, b + 1);
                if (blocks > domain.size()) continue;

                Instance inst(source);
                std::size_t at = 0;
                for (const std::string& p : preds) {
                    Atom fact;
                    fact.predicate = p;
                    const std::size_t arity = *source.arity_of(p);
                    for (std::size_t i = 0; i < arity; ++i)
                        fact.args.push_back(Term::constant(domain[code[at + i]]));
                    at += arity;
                    inst.insert(fact, 0);
                }
                if (inst.size() < k) continue;  // collapsed: covered at a smaller size
                if (seen.insert(renaming_key(inst, domain)).second) out.push_back(inst);
            }
        });
    }
    return out;
}

Verdict oracle_containment(const SchemaMapping& m, const SchemaMapping& m2,
                           std::size_t max_facts, const std::vector<std::string>& domain,
                           const ChaseConfig& budget) {
    {
        ValidationReport left = validate_mapping(m);
        if (!left.valid()) throw error("invalid mapping (m1):\n" + left.to_string());
        ValidationReport right = validate_mapping(m2);
        if (!right.valid()) throw error("invalid mapping (m2):\n" + right.to_string());
        if (!(m.source == m2.source) || !(m.target == m2.target))
            throw error("mappings must share the source and target schemas");
    }

    const std::vector<Tgd> sigma = m.all_tgds();
    const std::vector<Tgd> sigma2 = m2.all_tgds();
    const Schema union_schema = m.union_schema();

    Verdict verdict;
    verdict.bounded = true;
    verdict.left_weakly_acyclic = is_weakly_acyclic(sigma);
    verdict.right_weakly_acyclic = is_weakly_acyclic(sigma2);

    const std::vector<Instance> instances = enumerate_source_instances(m.source, max_facts, domain);
    verdict.instances_checked = 0;

    auto max_level = [](const Instance& inst) {
        std::uint64_t level = 0;
        for (const auto& [atom, l] : inst.facts()) level = std::max(level, l);
        return level;
    };

    for (const Instance& inst : instances) {
        ++verdict.instances_checked;
        Instance lifted = inst.with_schema(union_schema);

        ChaseResult left = chase(lifted, sigma, budget);
        if (left.status == ChaseStatus::budget_exhausted) {
            verdict.outcome = Outcome::inconclusive;
            verdict.reason = "left chase budget exhausted";
            verdict.witnesses.push_back(
                {"m1⊆m2", inst, left.instance.size(), 0, false, std::nullopt, 0.0});
            return verdict;
        }

        ChaseResult right = chase(lifted, sigma2, budget);
        auto hom = find_homomorphism(left.instance, right.instance);
        if (hom) continue;

        WitnessRecord record{"m1⊆m2",
                             inst,
                             left.instance.size(),
                             max_level(right.instance),
                             right.status == ChaseStatus::terminated,
                             std::nullopt,
                             0.0};
        if (right.status == ChaseStatus::terminated) {
            verdict.outcome = Outcome::not_contained;
            verdict.reason = "separating instance found";
            verdict.witnesses.push_back(std::move(record));
        } else {
            verdict.outcome = Outcome::inconclusive;
            verdict.reason = "right chase budget exhausted without homomorphism";
            verdict.witnesses.push_back(std::move(record));
        }
        return verdict;
    }

    verdict.outcome = Outcome::contained;
    return verdict;
}

ConjunctiveQuery canonical_boolean_query(const Instance& i) {
    ConjunctiveQuery q;
    for (const auto& [atom, level] : i.facts()) {
        Atom pattern;
        pattern.predicate = atom.predicate;
        for (const Term& t : atom.args) {
            if (t.is_null())
                pattern.args.push_back(Term::variable("V" + std::to_string(t.null_id())));
            else
                pattern.args.push_back(t);
        }
        q.body.push_back(std::move(pattern));
    }
    return q;
}

std::optional<std::pair<Instance, ConjunctiveQuery>> find_separating_example(
    const SchemaMapping& m, const SchemaMapping& m2, std::size_t max_facts,
    const std::vector<std::string>& domain, const ChaseConfig& budget) {
    Verdict verdict = oracle_containment(m, m2, max_facts, domain, budget);
    if (verdict.outcome != Outcome::not_contained) return std::nullopt;

    const Instance& separating = verdict.witnesses.front().instance;
    Instance lifted = separating.with_schema(m.union_schema());
    ChaseResult left = chase(lifted, m.all_tgds(), budget);
    ConjunctiveQuery q = canonical_boolean_query(left.instance.restricted_to(m.target));
    if (q.body.empty()) return std::nullopt;

    AnswerSet under_m = certain_answers(q, separating, m, budget);
    AnswerSet under_m2 = certain_answers(q, separating, m2, budget);
    const std::vector<Term> empty_tuple;
    if (under_m.tuples.count(empty_tuple) != 0 && under_m2.tuples.count(empty_tuple) == 0)
        return std::make_pair(separating, std::move(q));
    return std::nullopt;
}

}  // namespace mapcheck
