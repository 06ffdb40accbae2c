#include "mapcheck/homomorphism.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace mapcheck {

Term Homomorphism::apply(const Term& t) const {
    auto it = assignment.find(t);
    if (it != assignment.end()) return it->second;
    if (t.is_constant()) return t;
    throw error("homomorphism is not defined on " + t.to_string());
}

Atom Homomorphism::apply(const Atom& a) const {
    Atom out;
    out.predicate = a.predicate;
    out.args.reserve(a.args.size());
    for (const Term& t : a.args) out.args.push_back(apply(t));
    return out;
}

std::string Homomorphism::to_string() const {
    std::string out;
    for (const auto& [from, to] : assignment) {
        if (!out.empty()) out += ", ";
        out += from.to_string() + " -> " + to.to_string();
    }
    return "{" + out + "}";
}

namespace {

// Shared backtracking engine. Decisions assign destination values to source
// nulls; after each decision only the facts touching that null are
// re-examined: fully assigned facts must already be present in dst, partially
// assigned ones must still have a compatible dst fact with the same
// predicate.
class HomSearch {
public:
    HomSearch(const Instance& src, const Instance& dst) : src_(src), dst_(dst) {
        if (!(src.schema() == dst.schema()))
            throw error("homomorphism search requires a common schema");

        std::map<Term, std::size_t> occurrences;
        for (const auto& [atom, level] : src_.facts()) {
            facts_.push_back(&atom);
            for (const Term& t : atom.args)
                if (t.is_null()) ++occurrences[t];
        }
        for (const auto& [atom, level] : dst_.facts())
            dst_index_[atom.predicate].push_back(&atom);

        for (const Term& v : dst_.values()) candidates_.push_back(v);

        std::vector<Term> nulls;
        for (const auto& [t, count] : occurrences) nulls.push_back(t);
        std::sort(nulls.begin(), nulls.end(), [&](const Term& a, const Term& b) {
            if (occurrences[a] != occurrences[b]) return occurrences[a] > occurrences[b];
            return a < b;
        });
        for (std::size_t i = 0; i < nulls.size(); ++i) {
            decision_of_[nulls[i]] = i;
            order_.push_back(nulls[i]);
        }
        assigned_.assign(order_.size(), std::optional<Term>{});

        touching_.resize(order_.size());
        for (std::size_t f = 0; f < facts_.size(); ++f) {
            std::set<std::size_t> seen;
            for (const Term& t : facts_[f]->args)
                if (t.is_null()) seen.insert(decision_of_[t]);
            for (std::size_t d : seen) touching_[d].push_back(f);
        }
    }

    // Runs the search; the visitor receives each complete assignment and
    // returns false to stop.
    void run(const std::function<bool(const Homomorphism&)>& visit) {
        // Ground facts never touch a decision; check them once up front.
        for (const Atom* fact : facts_) {
            bool ground = true;
            for (const Term& t : fact->args)
                if (t.is_null()) ground = false;
            if (ground && !dst_.contains(*fact)) return;
        }
        visit_ = &visit;
        descend(0);
        visit_ = nullptr;
    }

private:
    bool descend(std::size_t depth) {  // returns false to abort the search
        if (depth == order_.size()) return emit();
        for (const Term& value : candidates_) {
            assigned_[depth] = value;
            if (feasible(depth) && !descend(depth + 1)) return false;
        }
        assigned_[depth] = std::nullopt;
        return true;
    }

    bool feasible(std::size_t depth) const {
        for (std::size_t f : touching_[depth]) {
            const Atom& fact = *facts_[f];
            bool complete = true;
            for (const Term& t : fact.args) {
                if (!t.is_null()) continue;
                if (!assigned_[decision_of_.at(t)]) {
                    complete = false;
                    break;
                }
            }
            if (complete) {
                if (!dst_.contains(mapped(fact))) return false;
            } else if (!some_compatible(fact)) {
                return false;
            }
        }
        return true;
    }

    Atom mapped(const Atom& fact) const {
        Atom out;
        out.predicate = fact.predicate;
        out.args.reserve(fact.args.size());
        for (const Term& t : fact.args)
            out.args.push_back(t.is_null() ? *assigned_[decision_of_.at(t)] : t);
        return out;
    }

    bool some_compatible(const Atom& fact) const {
        auto it = dst_index_.find(fact.predicate);
        if (it == dst_index_.end()) return false;
        for (const Atom* candidate : it->second) {
            bool ok = true;
            for (std::size_t i = 0; i < fact.args.size(); ++i) {
                const Term& t = fact.args[i];
                if (t.is_null()) {
                    const auto& slot = assigned_[decision_of_.at(t)];
                    if (slot && !(*slot == candidate->args[i])) ok = false;
                } else if (!(t == candidate->args[i])) {
                    ok = false;
                }
                if (!ok) break;
            }
            if (ok) return true;
        }
        return false;
    }

    bool emit() {
        Homomorphism h;
        for (const Term& v : src_.values())
            if (v.is_constant()) h.assignment.emplace(v, v);
        for (std::size_t d = 0; d < order_.size(); ++d)
            h.assignment.emplace(order_[d], *assigned_[d]);
        return (*visit_)(h);
    }

    const Instance& src_;
    const Instance& dst_;
    std::vector<const Atom*> facts_;
    std::map<std::string, std::vector<const Atom*>> dst_index_;
    std::vector<Term> candidates_;
    std::vector<Term> order_;                       // nulls in decision order
    std::map<Term, std::size_t> decision_of_;
    std::vector<std::optional<Term>> assigned_;     // per decision
    std::vector<std::vector<std::size_t>> touching_;  // decision -> fact indices
    const std::function<bool(const Homomorphism&)>* visit_ = nullptr;
};

}  // namespace

std::optional<Homomorphism> find_homomorphism(const Instance& src, const Instance& dst) {
    std::optional<Homomorphism> found;
    HomSearch(src, dst).run([&](const Homomorphism& h) {
        found = h;
        return false;
    });
    return found;
}

void for_each_homomorphism(const Instance& src, const Instance& dst,
                           const std::function<bool(const Homomorphism&)>& visit) {
    HomSearch(src, dst).run(visit);
}

bool verify_homomorphism(const Homomorphism& h, const Instance& src, const Instance& dst) {
    for (const Term& v : src.values()) {
        auto it = h.assignment.find(v);
        if (it == h.assignment.end()) {
            // Constants default to the identity, exactly as apply() does.
            if (v.is_null()) return false;
            continue;
        }
        if (v.is_constant() && !(it->second == v)) return false;
        if (it->second.is_variable()) return false;
    }
    for (const auto& [atom, level] : src.facts()) {
        if (!dst.contains(h.apply(atom))) return false;
    }
    return true;
}

namespace {

// Occurrence profile of a value: how often it appears at each (predicate,
// position) slot. Matching nulls must share profiles, which prunes the
// bijection search sharply.
std::map<Term, std::map<std::pair<std::string, std::size_t>, std::size_t>>
value_profiles(const Instance& i) {
    std::map<Term, std::map<std::pair<std::string, std::size_t>, std::size_t>> out;
    for (const auto& [atom, level] : i.facts())
        for (std::size_t p = 0; p < atom.args.size(); ++p)
            ++out[atom.args[p]][{atom.predicate, p}];
    return out;
}

}  // namespace

bool is_isomorphic(const Instance& a, const Instance& b) {
    if (!(a.schema() == b.schema()))
        throw error("isomorphism check requires a common schema");
    if (a.size() != b.size()) return false;

    auto profiles_a = value_profiles(a);
    auto profiles_b = value_profiles(b);

    std::vector<Term> nulls_a, nulls_b;
    std::set<Term> constants_a, constants_b;
    for (const auto& [v, profile] : profiles_a) {
        if (v.is_null()) nulls_a.push_back(v);
        else constants_a.insert(v);
    }
    for (const auto& [v, profile] : profiles_b) {
        if (v.is_null()) nulls_b.push_back(v);
        else constants_b.insert(v);
    }

    // Constants must match literally, including their occurrence profiles.
    if (constants_a != constants_b) return false;
    for (const Term& c : constants_a)
        if (profiles_a[c] != profiles_b[c]) return false;
    if (nulls_a.size() != nulls_b.size()) return false;

    // Facts without nulls must be shared literally.
    for (const auto& [atom, level] : a.facts()) {
        bool ground = true;
        for (const Term& t : atom.args)
            if (t.is_null()) ground = false;
        if (ground && !b.contains(atom)) return false;
    }

    std::map<Term, Term> mapping;     // null of a -> null of b
    std::set<Term> used;              // nulls of b already taken
    std::map<std::string, std::vector<const Atom*>> b_index;
    for (const auto& [atom, level] : b.facts()) b_index[atom.predicate].push_back(&atom);

    std::vector<const Atom*> a_facts;
    for (const auto& [atom, level] : a.facts()) a_facts.push_back(&atom);

    auto compatible_exists = [&](const Atom& fact) {
        for (const Atom* candidate : b_index[fact.predicate]) {
            bool ok = true;
            for (std::size_t i = 0; i < fact.args.size() && ok; ++i) {
                const Term& t = fact.args[i];
                if (t.is_null()) {
                    auto it = mapping.find(t);
                    if (it != mapping.end() && !(it->second == candidate->args[i])) ok = false;
                } else if (!(t == candidate->args[i])) {
                    ok = false;
                }
            }
            if (ok) return true;
        }
        return false;
    };

    std::function<bool(std::size_t)> assign = [&](std::size_t idx) -> bool {
        if (idx == nulls_a.size()) {
            for (const Atom* fact : a_facts) {
                Atom image;
                image.predicate = fact->predicate;
                for (const Term& t : fact->args)
                    image.args.push_back(t.is_null() ? mapping.at(t) : t);
                if (!b.contains(image)) return false;
            }
            return true;
        }
        const Term& source = nulls_a[idx];
        for (const Term& candidate : nulls_b) {
            if (used.count(candidate) != 0) continue;
            if (profiles_a[source] != profiles_b[candidate]) continue;
            mapping.insert_or_assign(source, candidate);
            used.insert(candidate);
            bool ok = true;
            for (const Atom* fact : a_facts) {
                bool touches = false;
                for (const Term& t : fact->args)
                    if (t == source) touches = true;
                if (touches && !compatible_exists(*fact)) {
                    ok = false;
                    break;
                }
            }
            if (ok && assign(idx + 1)) return true;
            mapping.erase(source);
            used.erase(candidate);
        }
        return false;
    };

    return assign(0);
}

bool hom_equivalent(const Instance& a, const Instance& b) {
    return find_homomorphism(a, b).has_value() && find_homomorphism(b, a).has_value();
}

Homomorphism compose(const Homomorphism& first, const Homomorphism& then) {
    Homomorphism out;
    for (const auto& [from, via] : first.assignment) out.assignment.emplace(from, then.apply(via));
    return out;
}

}  // namespace mapcheck
