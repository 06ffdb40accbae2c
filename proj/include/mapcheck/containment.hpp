#pragma once

#include "mapcheck/chase.hpp"
#include "mapcheck/verdict.hpp"

namespace mapcheck {

struct ContainmentConfig {
    // Level horizon for the right-hand chase prefixes; empty derives
    // default_level_bound from the right-hand dependencies.
    std::optional<std::uint64_t> level_bound;
    // Guardrail for the left-hand chase. The mode field is ignored: the
    // decision procedure always chases obliviously.
    ChaseConfig chase_budget{};
    // Right-hand prefixes are examined at levels step, 2*step, ... up to the
    // bound (which is always included).
    std::uint64_t deepening_step = 4;
    // Dummies may be checked concurrently; results are folded in dummy order
    // either way, so the verdict does not depend on this.
    unsigned threads = 1;
};

// Decides whether every certain answer under m is a certain answer under m2,
// for mappings sharing both schemas. For each canonical single-fact dummy of
// m: chase it under m's dependencies (Inconclusive if the guardrail stops the
// chase), then look for a homomorphism into deepening level prefixes of the
// chase under m2's dependencies. A homomorphism at any prefix certifies the
// dummy; absence is final once the prefix saturates or the bound is reached.
Verdict check_containment(const SchemaMapping& m, const SchemaMapping& m2,
                          const ContainmentConfig& cfg = {});

// Containment both ways. Equivalence reports Outcome::contained with both
// witness sets; a definite failure in either direction wins over an
// inconclusive opposite direction.
Verdict check_equivalence(const SchemaMapping& m, const SchemaMapping& m2,
                          const ContainmentConfig& cfg = {});

}  // namespace mapcheck
