#include "mapcheck/model.hpp"

#include <algorithm>
#include <sstream>

namespace mapcheck {

namespace {

std::string join_terms(const std::vector<Term>& terms) {
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i > 0) out += ",";
        out += terms[i].to_string();
    }
    return out;
}

std::string join_atoms(const std::vector<Atom>& atoms) {
    std::string out;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (i > 0) out += ", ";
        out += atoms[i].to_string();
    }
    return out;
}

}  // namespace

const std::string& Term::name() const {
    if (kind_ == Kind::null) throw error("labelled nulls have no name");
    return name_;
}

std::uint64_t Term::null_id() const {
    if (kind_ != Kind::null) throw error("term is not a labelled null");
    return id_;
}

std::string Term::to_string() const {
    if (kind_ == Kind::null) return "_" + std::to_string(id_);
    return name_;
}

std::strong_ordering Term::operator<=>(const Term& other) const {
    if (auto c = kind_ <=> other.kind_; c != 0) return c;
    if (kind_ == Kind::null) return id_ <=> other.id_;
    return name_ <=> other.name_;
}

std::string Atom::to_string() const {
    return predicate + "(" + join_terms(args) + ")";
}

Schema::Schema(std::initializer_list<std::pair<std::string, std::size_t>> relations) {
    for (const auto& [name, arity] : relations) add_relation(name, arity);
}

void Schema::add_relation(const std::string& name, std::size_t arity) {
    if (name.empty()) throw error("relation name must not be empty");
    if (arity == 0) throw error("relation '" + name + "' must have arity at least 1");
    if (relations_.count(name) != 0)
        throw error("relation '" + name + "' declared twice");
    relations_.emplace(name, arity);
}

std::optional<std::size_t> Schema::arity_of(const std::string& name) const {
    auto it = relations_.find(name);
    if (it == relations_.end()) return std::nullopt;
    return it->second;
}

Schema Schema::merged(const Schema& a, const Schema& b) {
    Schema out = a;
    for (const auto& [name, arity] : b.relations_) {
        auto existing = out.arity_of(name);
        if (!existing) {
            out.add_relation(name, arity);
        } else if (*existing != arity) {
            throw error("relation '" + name + "' declared with conflicting arities");
        }
    }
    return out;
}

bool Instance::insert(const Atom& atom, std::uint64_t level) {
    auto arity = schema_.arity_of(atom.predicate);
    if (!arity)
        throw error("fact " + atom.to_string() + ": predicate '" + atom.predicate +
                    "' is not declared in the schema");
    if (*arity != atom.args.size())
        throw error("fact " + atom.to_string() + ": predicate '" + atom.predicate +
                    "' has arity " + std::to_string(*arity) + ", got " +
                    std::to_string(atom.args.size()) + " arguments");
    for (const Term& t : atom.args)
        if (t.is_variable())
            throw error("fact " + atom.to_string() + ": variables cannot appear in instances");
    return facts_.emplace(atom, level).second;
}

std::optional<std::uint64_t> Instance::level_of(const Atom& atom) const {
    auto it = facts_.find(atom);
    if (it == facts_.end()) return std::nullopt;
    return it->second;
}

std::set<Term> Instance::values() const {
    std::set<Term> out;
    for (const auto& [atom, level] : facts_)
        out.insert(atom.args.begin(), atom.args.end());
    return out;
}

std::uint64_t Instance::max_null_id() const {
    std::uint64_t max_id = 0;
    for (const auto& [atom, level] : facts_)
        for (const Term& t : atom.args)
            if (t.is_null()) max_id = std::max(max_id, t.null_id());
    return max_id;
}

Instance Instance::restricted_to(const Schema& sub) const {
    Instance out(sub);
    for (const auto& [atom, level] : facts_)
        if (sub.contains(atom.predicate)) out.insert(atom, level);
    return out;
}

Instance Instance::with_schema(Schema wider) const {
    Instance out(std::move(wider));
    for (const auto& [atom, level] : facts_) out.insert(atom, level);
    return out;
}

Instance Instance::union_of(const Instance& a, const Instance& b) {
    if (!(a.schema() == b.schema()))
        throw error("instance union requires a common schema");
    Instance out = a;
    for (const auto& [atom, level] : b.facts_) out.insert(atom, level);
    return out;
}

bool Instance::operator==(const Instance& other) const {
    if (!(schema_ == other.schema_)) return false;
    if (facts_.size() != other.facts_.size()) return false;
    auto it = other.facts_.begin();
    for (const auto& [atom, level] : facts_) {
        if (!(atom == it->first)) return false;
        ++it;
    }
    return true;
}

std::set<std::string> Tgd::body_vars() const {
    std::set<std::string> out;
    for (const Atom& a : body)
        for (const Term& t : a.args)
            if (t.is_variable()) out.insert(t.name());
    return out;
}

std::set<std::string> Tgd::head_vars() const {
    std::set<std::string> out;
    for (const Atom& a : head)
        for (const Term& t : a.args)
            if (t.is_variable()) out.insert(t.name());
    return out;
}

std::set<std::string> Tgd::existential_vars() const {
    std::set<std::string> out = head_vars();
    for (const std::string& v : body_vars()) out.erase(v);
    return out;
}

std::string Tgd::to_string() const {
    return join_atoms(body) + " -> " + join_atoms(head);
}

std::vector<Tgd> SchemaMapping::all_tgds() const {
    std::vector<Tgd> out = st_tgds;
    out.insert(out.end(), t_tgds.begin(), t_tgds.end());
    return out;
}

std::set<std::string> ConjunctiveQuery::body_var_names() const {
    std::set<std::string> out;
    for (const Atom& a : body)
        for (const Term& t : a.args)
            if (t.is_variable()) out.insert(t.name());
    return out;
}

std::string ConjunctiveQuery::to_string() const {
    std::string head = "q(";
    for (std::size_t i = 0; i < head_vars.size(); ++i) {
        if (i > 0) head += ",";
        head += head_vars[i];
    }
    return head + ") :- " + join_atoms(body) + ".";
}

std::string ValidationReport::to_string() const {
    std::string out;
    for (const Violation& v : violations) {
        if (!out.empty()) out += "\n";
        out += v.where + ": " + v.message;
    }
    return out;
}

namespace {

void check_atom_vocabulary(const Atom& atom, const Schema& schema, const std::string& role,
                           const std::string& where, const std::string& group,
                           std::ptrdiff_t index, std::vector<Violation>& out) {
    auto arity = schema.arity_of(atom.predicate);
    if (!arity) {
        out.push_back({where, role + " predicate '" + atom.predicate +
                                  "' is not declared in the expected schema",
                       group, index});
        return;
    }
    if (*arity != atom.args.size())
        out.push_back({where, role + " atom " + atom.to_string() + " has " +
                                  std::to_string(atom.args.size()) + " arguments, predicate '" +
                                  atom.predicate + "' has arity " + std::to_string(*arity),
                       group, index});
}

void check_tgd_set(const std::vector<Tgd>& tgds, const Schema& body_schema,
                   const Schema& head_schema, const std::string& group,
                   std::vector<Violation>& out) {
    for (std::size_t i = 0; i < tgds.size(); ++i) {
        const Tgd& tgd = tgds[i];
        const std::string where = group + " tgd " + std::to_string(i + 1);
        const auto idx = static_cast<std::ptrdiff_t>(i);

        if (tgd.body.empty()) {
            out.push_back({where, "dependency has no body atom", group, idx});
        } else if (tgd.body.size() != 1) {
            out.push_back({where, "body must be a single atom, found " +
                                      std::to_string(tgd.body.size()),
                           group, idx});
        }
        for (const Atom& a : tgd.body) {
            check_atom_vocabulary(a, body_schema, "body", where, group, idx, out);
            for (const Term& t : a.args) {
                if (t.is_null()) {
                    out.push_back({where, "labelled nulls cannot appear in dependencies",
                                   group, idx});
                } else if (t.is_constant()) {
                    out.push_back({where, "body arguments must be variables, found constant '" +
                                              t.name() + "'",
                                   group, idx});
                }
            }
        }

        if (tgd.head.empty())
            out.push_back({where, "head must contain at least one atom", group, idx});
        for (const Atom& a : tgd.head) {
            check_atom_vocabulary(a, head_schema, "head", where, group, idx, out);
            for (const Term& t : a.args)
                if (t.is_null())
                    out.push_back({where, "labelled nulls cannot appear in dependencies",
                                   group, idx});
        }
    }
}

}  // namespace

ValidationReport validate_mapping(const SchemaMapping& m) {
    ValidationReport report;
    for (const auto& [name, arity] : m.source.relations())
        if (m.target.contains(name))
            report.violations.push_back({"mapping", "relation '" + name +
                                                        "' declared in both source and target",
                                         "mapping", -1});
    check_tgd_set(m.st_tgds, m.source, m.target, "st", report.violations);
    check_tgd_set(m.t_tgds, m.target, m.target, "t", report.violations);
    return report;
}

}  // namespace mapcheck
