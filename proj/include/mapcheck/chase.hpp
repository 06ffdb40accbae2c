#pragma once

#include <optional>

#include "mapcheck/model.hpp"

namespace mapcheck {

// oblivious: every (dependency, fact) trigger fires exactly once, whether or
// not its head is already satisfied. restricted: a trigger fires only when no
// extension of its binding satisfies the head in the current instance.
enum class ChaseMode { oblivious, restricted };

enum class ChaseStatus { terminated, budget_exhausted };

struct ChaseConfig {
    ChaseMode mode = ChaseMode::oblivious;
    std::optional<std::uint64_t> max_facts = 100000;  // guardrail; empty = unbounded
    std::optional<std::uint64_t> max_level;           // empty = unbounded
};

struct ChaseResult {
    Instance instance;
    ChaseStatus status = ChaseStatus::terminated;
    std::uint64_t steps = 0;  // fired triggers
};

// A dependency applied to one fact, with the variable binding obtained by
// matching the single body atom against the fact.
struct Trigger {
    const Tgd* tgd = nullptr;
    Fact body_fact;
    std::map<std::string, Term> binding;
};

// Unifies a body atom with a ground atom: repeated variables must meet equal
// values, non-variable pattern arguments must match literally.
std::optional<std::map<std::string, Term>> match_atom(const Atom& pattern, const Atom& fact);

std::optional<Trigger> make_trigger(const Tgd& tgd, const Fact& fact);

// Instantiates the head once, drawing one fresh null per existential
// variable; produced facts sit one level above the body fact. Facts already
// present in i are dropped from the delta.
std::vector<Fact> chase_step(const Instance& i, const Trigger& trigger, NullGenerator& gen);

// Fair FIFO chase seeded with the instance's facts. The instance schema must
// declare every predicate the dependencies use; bodies must be single atoms.
ChaseResult chase(const Instance& i, const std::vector<Tgd>& tgds, const ChaseConfig& cfg = {});
ChaseResult chase(const Instance& i, const std::vector<Tgd>& tgds, const ChaseConfig& cfg,
                  NullGenerator& gen);

// Exactly the facts of the oblivious chase whose level is at most `level`;
// no fact budget applies.
Instance chase_to_level(const Instance& i, const std::vector<Tgd>& tgds, std::uint64_t level);

// Position dependency graph test: regular edges run from body positions of a
// variable occurring in the head to that variable's head positions, special
// edges from those same body positions to every existential position. True
// iff no cycle passes through a special edge. Guarantees termination of the
// restricted chase; the oblivious chase re-fires on its own output and can
// still grow without bound (e.g. r(X,Y) -> r(X,Z)), so finiteness there is
// established operationally, by a chase that completes within its budget.
bool is_weakly_acyclic(const std::vector<Tgd>& tgds);

// Level horizon used by containment when no explicit bound is given:
// |tgds| * (W+1)^W with W the maximum arity among predicates occurring in
// the dependencies; 0 for an empty set. Saturates on overflow.
std::uint64_t default_level_bound(const std::vector<Tgd>& tgds);

}  // namespace mapcheck
