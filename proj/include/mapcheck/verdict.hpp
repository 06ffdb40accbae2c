#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mapcheck/homomorphism.hpp"
#include "mapcheck/model.hpp"

namespace mapcheck {

enum class Outcome { contained, not_contained, inconclusive };

std::string to_string(Outcome o);

// One examined instance: a dummy for the containment test, a concrete source
// instance for the enumeration oracle.
struct WitnessRecord {
    std::string direction;        // "m1⊆m2" or "m2⊆m1"
    Instance instance;
    std::size_t left_chase_facts = 0;
    std::uint64_t level_reached = 0;     // deepest right-hand prefix examined
    bool right_chase_complete = false;   // the prefix saturated: it is the full chase
    std::optional<Homomorphism> hom;     // empty = no homomorphism at level_reached
    double time_ms = 0.0;
};

struct Verdict {
    Outcome outcome = Outcome::inconclusive;
    std::string reason;                  // set for inconclusive and failing directions
    std::vector<WitnessRecord> witnesses;
    std::uint64_t bound_used = 0;
    bool bounded = false;                // oracle verdicts hold over the enumerated instances only
    std::size_t instances_checked = 0;
    bool left_weakly_acyclic = false;    // advisory metadata
    bool right_weakly_acyclic = false;
};

}  // namespace mapcheck
