#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mapcheck {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A symbol appearing in an atom. Constants and labelled nulls are instance
// values; variables occur only in dependencies and queries, never in
// instances. Ordering puts constants before nulls before variables, which is
// the order canonical serialization relies on.
class Term {
public:
    enum class Kind : std::uint8_t { constant, null, variable };

    static Term constant(std::string name) { return Term(Kind::constant, 0, std::move(name)); }
    static Term null(std::uint64_t id) { return Term(Kind::null, id, {}); }
    static Term variable(std::string name) { return Term(Kind::variable, 0, std::move(name)); }

    Kind kind() const { return kind_; }
    bool is_constant() const { return kind_ == Kind::constant; }
    bool is_null() const { return kind_ == Kind::null; }
    bool is_variable() const { return kind_ == Kind::variable; }

    // Name of a constant or variable.
    const std::string& name() const;
    std::uint64_t null_id() const;

    // Constants print bare, nulls as "_k", variables as written.
    std::string to_string() const;

    std::strong_ordering operator<=>(const Term& other) const;
    bool operator==(const Term& other) const { return (*this <=> other) == 0; }

private:
    Term(Kind kind, std::uint64_t id, std::string name)
        : kind_(kind), id_(id), name_(std::move(name)) {}

    Kind kind_;
    std::uint64_t id_;
    std::string name_;
};

struct Atom {
    std::string predicate;
    std::vector<Term> args;

    std::size_t arity() const { return args.size(); }
    std::string to_string() const;

    auto operator<=>(const Atom&) const = default;
};

// A ground atom together with the chase depth at which it first appeared.
// Input facts sit at level 0. Fact identity is the atom alone; the level is
// metadata and never takes part in equality.
struct Fact {
    Atom atom;
    std::uint64_t level = 0;
};

// Relation names with arities. Names are unique, arities are at least one.
class Schema {
public:
    Schema() = default;
    Schema(std::initializer_list<std::pair<std::string, std::size_t>> relations);

    void add_relation(const std::string& name, std::size_t arity);
    bool contains(const std::string& name) const { return relations_.count(name) != 0; }
    std::optional<std::size_t> arity_of(const std::string& name) const;
    const std::map<std::string, std::size_t>& relations() const { return relations_; }
    bool empty() const { return relations_.empty(); }

    bool operator==(const Schema&) const = default;

    // Combined schema; identical declarations merge, conflicting arities throw.
    static Schema merged(const Schema& a, const Schema& b);

private:
    std::map<std::string, std::size_t> relations_;
};

// A finite set of ground facts over a schema. Set semantics: re-inserting a
// fact keeps its original level. Iteration order over facts() is canonical
// (predicate name, then argument order with constants before nulls, nulls by
// id).
class Instance {
public:
    Instance() = default;
    explicit Instance(Schema schema) : schema_(std::move(schema)) {}

    const Schema& schema() const { return schema_; }
    const std::map<Atom, std::uint64_t>& facts() const { return facts_; }

    // Returns true when the fact is new. Throws on undeclared predicates,
    // arity mismatches, and variable arguments.
    bool insert(const Atom& atom, std::uint64_t level = 0);
    bool insert(const Fact& f) { return insert(f.atom, f.level); }

    bool contains(const Atom& atom) const { return facts_.count(atom) != 0; }
    std::optional<std::uint64_t> level_of(const Atom& atom) const;

    std::size_t size() const { return facts_.size(); }
    bool empty() const { return facts_.empty(); }

    // All constants and nulls occurring in some fact.
    std::set<Term> values() const;
    std::uint64_t max_null_id() const;

    // Facts whose predicate belongs to the given schema.
    Instance restricted_to(const Schema& sub) const;
    // Same facts re-validated against a wider schema.
    Instance with_schema(Schema wider) const;
    // Fact union over a common schema; on a shared fact the left level wins.
    static Instance union_of(const Instance& a, const Instance& b);

    // Equality is order-insensitive fact-set equality (levels ignored).
    bool operator==(const Instance& other) const;

private:
    Schema schema_;
    std::map<Atom, std::uint64_t> facts_;
};

// A tuple-generating dependency body -> head. The valid form is LAV: exactly
// one body atom, all body arguments variables (repetition allowed). Head
// variables missing from the body are implicitly existentially quantified.
// The body is kept as a list so that malformed dependencies can be
// represented and reported by validate_mapping.
struct Tgd {
    std::vector<Atom> body;
    std::vector<Atom> head;

    const Atom& body_atom() const { return body.front(); }
    std::set<std::string> body_vars() const;
    std::set<std::string> head_vars() const;
    // Head variables that do not occur in the body.
    std::set<std::string> existential_vars() const;
    std::string to_string() const;

    bool operator==(const Tgd&) const = default;
};

struct SchemaMapping {
    Schema source;
    Schema target;
    std::vector<Tgd> st_tgds;  // bodies over source, heads over target
    std::vector<Tgd> t_tgds;   // bodies and heads over target

    std::vector<Tgd> all_tgds() const;  // st followed by t
    Schema union_schema() const { return Schema::merged(source, target); }
};

// head_vars may repeat; every head variable must occur in the body. An empty
// head makes the query Boolean.
struct ConjunctiveQuery {
    std::vector<std::string> head_vars;
    std::vector<Atom> body;

    std::set<std::string> body_var_names() const;
    std::string to_string() const;
};

// Hands out labelled nulls with strictly increasing ids; the first call on a
// default-constructed generator yields _1. Generators started at disjoint
// ranges never produce colliding nulls.
class NullGenerator {
public:
    explicit NullGenerator(std::uint64_t first = 1) : next_(first) {}
    Term fresh() { return Term::null(next_++); }
    std::uint64_t next_id() const { return next_; }

private:
    std::uint64_t next_;
};

struct Violation {
    std::string where;    // human label, e.g. "st tgd 2"
    std::string message;
    std::string group;    // "mapping", "st" or "t"
    std::ptrdiff_t index = -1;  // tgd index within the group, -1 otherwise
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool valid() const { return violations.empty(); }
    std::string to_string() const;
};

// Checks the LAV shape, vocabulary and arity of every dependency: source and
// target relation names must be disjoint, st bodies range over the source
// schema and st heads over the target, t dependencies stay within the target
// schema, bodies are single atoms with variable arguments, heads are
// nonempty, and labelled nulls appear nowhere.
ValidationReport validate_mapping(const SchemaMapping& m);

}  // namespace mapcheck
