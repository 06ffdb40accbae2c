#pragma once

#include <functional>
#include <optional>

#include "mapcheck/model.hpp"

namespace mapcheck {

// A value association between two instances over the same schema: identity
// on constants, total on the source instance's values. Applying it to every
// source fact must land inside the destination instance.
struct Homomorphism {
    std::map<Term, Term> assignment;

    // Constants not listed in the assignment map to themselves; unlisted
    // nulls throw.
    Term apply(const Term& t) const;
    Atom apply(const Atom& a) const;
    std::string to_string() const;
};

// Backtracking search over null assignments: nulls ordered by descending
// occurrence count, candidate values drawn from the destination's value set,
// pruned per predicate after every decision. The returned witness is
// deterministic for fixed inputs.
std::optional<Homomorphism> find_homomorphism(const Instance& src, const Instance& dst);

// Visits every homomorphism from src into dst; the visitor returns false to
// stop the enumeration.
void for_each_homomorphism(const Instance& src, const Instance& dst,
                           const std::function<bool(const Homomorphism&)>& visit);

// Mechanical check: total on src values, identity on constants, image of
// every src fact present in dst.
bool verify_homomorphism(const Homomorphism& h, const Instance& src, const Instance& dst);

// True when some bijection between the null sets, fixing all constants, maps
// the facts of a exactly onto the facts of b ("equal up to null renaming").
bool is_isomorphic(const Instance& a, const Instance& b);

// Homomorphisms in both directions.
bool hom_equivalent(const Instance& a, const Instance& b);

// Composition: (compose(f, g))(x) = g(f(x)).
Homomorphism compose(const Homomorphism& first, const Homomorphism& then);

}  // namespace mapcheck
