#pragma once

#include <optional>
#include <utility>

#include "mapcheck/chase.hpp"
#include "mapcheck/verdict.hpp"

namespace mapcheck {

struct AnswerSet {
    std::set<std::vector<Term>> tuples;  // lexicographic order
    bool null_free = false;    // tuples with nulls were dropped
    bool lower_bound = false;  // chase budget truncated the solution; sound but maybe incomplete
};

// All images of the head variables under homomorphisms from the query body
// into the instance. Query variables are treated as nulls of a transient
// instance, so the evaluation shares the homomorphism engine. A Boolean
// query answers {()} or {}.
AnswerSet evaluate_query(const ConjunctiveQuery& q, const Instance& i);

// Answers certain under m for the source instance i: chase i with all of m's
// dependencies, evaluate q on the result, and drop every tuple containing a
// null. If the chase budget runs out the answers are marked a lower bound.
AnswerSet certain_answers(const ConjunctiveQuery& q, const Instance& i, const SchemaMapping& m,
                          const ChaseConfig& budget = {});

// All instances with at most max_facts facts over the given constants, one
// canonical representative per renaming class, deterministically ordered.
std::vector<Instance> enumerate_source_instances(const Schema& source, std::size_t max_facts,
                                                 const std::vector<std::string>& domain);

// Brute-force containment reference: for every enumerated source instance,
// the chase under m must map homomorphically into the chase under m2. Stops
// at the first separating instance; a fully passed sweep yields a verdict
// explicitly bounded to the enumerated instances.
Verdict oracle_containment(const SchemaMapping& m, const SchemaMapping& m2,
                           std::size_t max_facts, const std::vector<std::string>& domain,
                           const ChaseConfig& budget = {});

// The Boolean query matching an instance's fact pattern: nulls become
// variables, constants stay.
ConjunctiveQuery canonical_boolean_query(const Instance& i);

// On a separating instance found by the oracle, builds the query that tells
// the two mappings apart and re-checks the separation through
// certain_answers before returning it.
std::optional<std::pair<Instance, ConjunctiveQuery>> find_separating_example(
    const SchemaMapping& m, const SchemaMapping& m2, std::size_t max_facts,
    const std::vector<std::string>& domain, const ChaseConfig& budget = {});

}  // namespace mapcheck
