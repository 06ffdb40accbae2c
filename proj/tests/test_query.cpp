#include <doctest.h>

#include "generators.hpp"
#include "mapcheck/query.hpp"
#include "support.hpp"

using namespace mapcheck;
using testutil::c;
using testutil::n;

TEST_SUITE("query") {

TEST_CASE("evaluation projects head variables over all matches") {
    const Schema s{{"person", 2}, {"salary", 2}};
    Instance i(s);
    i.insert(Atom{"person", {c("john"), n(1)}});
    i.insert(Atom{"salary", {c("john"), c("50")}});

    const auto q = testutil::query_from("q(X) :- person(X,Y).", s);
    const AnswerSet a = evaluate_query(q, i);
    CHECK(a.tuples == std::set<std::vector<Term>>{{c("john")}});
    CHECK_FALSE(a.null_free);

    const auto q2 = testutil::query_from("q(X,Y) :- person(X,Y).", s);
    CHECK(evaluate_query(q2, i).tuples == std::set<std::vector<Term>>{{c("john"), n(1)}});
}

TEST_CASE("boolean queries answer with the empty tuple") {
    const Schema s{{"r2", 2}, {"r3", 2}};
    Instance j(s);
    j.insert(Atom{"r2", {c("b"), n(1)}});
    j.insert(Atom{"r3", {n(2), c("b")}});

    const auto yes = testutil::query_from("q() :- r3(Z,X).", s);
    CHECK(evaluate_query(yes, j).tuples == std::set<std::vector<Term>>{{}});

    const auto no = testutil::query_from("q() :- r2(X,X).", s);
    CHECK(evaluate_query(no, j).tuples.empty());
}

TEST_CASE("joins respect shared variables and constants") {
    const Schema s{{"r2", 2}, {"r3", 2}};
    Instance joined(s);
    joined.insert(Atom{"r2", {c("b"), n(1)}});
    joined.insert(Atom{"r3", {n(1), c("b")}});

    Instance split(s);
    split.insert(Atom{"r2", {c("b"), n(1)}});
    split.insert(Atom{"r3", {n(2), c("b")}});

    const auto cycle = testutil::query_from("q() :- r2(X,Y), r3(Y,X).", s);
    CHECK(evaluate_query(cycle, joined).tuples.size() == 1);
    CHECK(evaluate_query(cycle, split).tuples.empty());
}

TEST_CASE("any query over the empty instance is empty") {
    const Schema s{{"r", 2}};
    const auto q = testutil::query_from("q(X) :- r(X,Y).", s);
    CHECK(evaluate_query(q, Instance(s)).tuples.empty());
}

TEST_CASE("evaluation rejects malformed queries") {
    const Schema s{{"r", 2}};
    Instance i(s);

    ConjunctiveQuery empty_body;
    CHECK_THROWS_AS(evaluate_query(empty_body, i), error);

    ConjunctiveQuery unknown;
    unknown.body.push_back(Atom{"zzz", {Term::variable("X")}});
    CHECK_THROWS_AS(evaluate_query(unknown, i), error);

    ConjunctiveQuery unsafe;
    unsafe.head_vars.push_back("W");
    unsafe.body.push_back(Atom{"r", {Term::variable("X"), Term::variable("Y")}});
    CHECK_THROWS_AS(evaluate_query(unsafe, i), error);
}

TEST_CASE("evaluation is monotone under instance growth") {
    testutil::Rng rng(4096);
    const Schema s{{"p", 2}, {"q", 1}};
    for (int trial = 0; trial < 40; ++trial) {
        Instance small = testutil::random_instance(rng, s, 5, {"a", "b"}, 3);
        Instance big = small;
        const Instance extra = testutil::random_instance(rng, s, 4, {"a", "b", "c"}, 4);
        for (const auto& [atom, level] : extra.facts()) big.insert(atom);

        const ConjunctiveQuery q = testutil::random_query(rng, s);
        const AnswerSet before = evaluate_query(q, small);
        const AnswerSet after = evaluate_query(q, big);
        for (const auto& tuple : before.tuples) CHECK(after.tuples.count(tuple) == 1);
    }
}

TEST_CASE("certain answers of the opening example") {
    const SchemaMapping m = testutil::fixture_mapping("intro.map");
    const Instance i = testutil::fixture_instance("intro.inst", m.source);

    const auto q_salary = testutil::fixture_query("q_salary.q", m.target);
    const AnswerSet sal = certain_answers(q_salary, i, m);
    CHECK(sal.tuples == std::set<std::vector<Term>>{{c("john"), c("50")}});
    CHECK(sal.null_free);
    CHECK_FALSE(sal.lower_bound);

    // person pairs john only with invented values, so filtering nulls leaves
    // nothing even though the relation is nonempty.
    const auto q_person = testutil::fixture_query("q_person.q", m.target);
    const AnswerSet per = certain_answers(q_person, i, m);
    CHECK(per.tuples.empty());
    CHECK(per.null_free);

    const auto q_name = testutil::query_from("q(X) :- person(X,Y).", m.target);
    CHECK(certain_answers(q_name, i, m).tuples ==
          std::set<std::vector<Term>>{{c("john")}});
}

TEST_CASE("certain answers on the empty source are empty") {
    const SchemaMapping m = testutil::fixture_mapping("intro.map");
    const auto q = testutil::fixture_query("q_salary.q", m.target);
    CHECK(certain_answers(q, Instance(m.source), m).tuples.empty());
}

TEST_CASE("certain answers checks the instance schema") {
    const SchemaMapping m = testutil::fixture_mapping("intro.map");
    const auto q = testutil::fixture_query("q_salary.q", m.target);
    CHECK_THROWS_AS(certain_answers(q, Instance(m.target), m), error);
}

TEST_CASE("a truncated chase marks answers as a lower bound") {
    const SchemaMapping spin = testutil::mapping_from(
        "source { r0/1; } target { r/2; } st { r0(X) -> r(X,Z); } t { r(X,Y) -> r(Y,Z); }");
    Instance i(spin.source);
    i.insert(Atom{"r0", {c("a")}});

    const auto q = testutil::query_from("q(X) :- r(X,Y).", spin.target);
    ChaseConfig tiny;
    tiny.max_facts = 5;
    const AnswerSet a = certain_answers(q, i, spin, tiny);
    CHECK(a.lower_bound);
    CHECK(a.tuples == std::set<std::vector<Term>>{{c("a")}});  // still sound
}

TEST_CASE("source enumeration is canonical and complete at small sizes") {
    const Schema src{{"r1", 2}};
    const auto one = enumerate_source_instances(src, 1, {"a", "b"});
    REQUIRE(one.size() == 3);
    CHECK(one[0].empty());
    CHECK(one[1].contains(Atom{"r1", {c("a"), c("b")}}));
    CHECK(one[2].contains(Atom{"r1", {c("a"), c("a")}}));

    // Up to renaming over a two-constant domain there are 6 nonempty
    // instances with at most two r1 facts: 2 singletons and 4 pairs.
    const auto two = enumerate_source_instances(src, 2, {"a", "b"});
    CHECK(two.size() == 7);

    // No two entries coincide after any domain permutation: swapping a and b
    // must not turn one enumerated instance into another.
    for (std::size_t i = 0; i < two.size(); ++i) {
        for (std::size_t j = i + 1; j < two.size(); ++j) {
            Instance swapped(src);
            for (const auto& [atom, level] : two[j].facts()) {
                Atom im;
                im.predicate = atom.predicate;
                for (const Term& t : atom.args)
                    im.args.push_back(t == c("a") ? c("b")
                                                  : (t == c("b") ? c("a") : t));
                swapped.insert(im);
            }
            CHECK_FALSE(two[i] == two[j]);
            CHECK_FALSE(two[i] == swapped);
        }
    }
}

TEST_CASE("enumeration validates its arguments") {
    const Schema src{{"r1", 2}};
    CHECK_THROWS_AS(enumerate_source_instances(src, 1, {}), error);
    CHECK_THROWS_AS(enumerate_source_instances(src, 1, {"a", "a"}), error);
}

TEST_CASE("the oracle separates the strict pair and blesses the contained one") {
    const SchemaMapping mp = testutil::fixture_mapping("Mp.map");
    const SchemaMapping mpp = testutil::fixture_mapping("Mpp.map");

    const Verdict ok = oracle_containment(mp, mpp, 1, {"a", "b"});
    CHECK(ok.outcome == Outcome::contained);
    CHECK(ok.bounded);
    CHECK(ok.instances_checked == 3);

    const Verdict bad = oracle_containment(mpp, mp, 1, {"a", "b"});
    CHECK(bad.outcome == Outcome::not_contained);
    CHECK(bad.reason == "separating instance found");
    REQUIRE_FALSE(bad.witnesses.empty());
    CHECK(bad.witnesses.back().instance.contains(Atom{"r1", {c("a"), c("b")}}));
}

TEST_CASE("the oracle blesses every mapping against itself") {
    for (const char* f : {"M.map", "Mp.map", "Mpp.map", "intro.map"}) {
        const SchemaMapping m = testutil::fixture_mapping(f);
        const Verdict v = oracle_containment(m, m, 1, {"a", "b"});
        CHECK(v.outcome == Outcome::contained);
        CHECK(v.bounded);
    }
}

TEST_CASE("oracle budget exhaustion is inconclusive") {
    const SchemaMapping spin = testutil::mapping_from(
        "source { r0/1; } target { r/2; } st { r0(X) -> r(X,Z); } t { r(X,Y) -> r(Y,Z); }");
    ChaseConfig tiny;
    tiny.max_facts = 4;
    const Verdict v = oracle_containment(spin, spin, 1, {"a"}, tiny);
    CHECK(v.outcome == Outcome::inconclusive);
}

TEST_CASE("a canonical boolean query matches exactly the instance pattern") {
    const Schema s{{"r2", 2}, {"r3", 2}};
    Instance j(s);
    j.insert(Atom{"r2", {c("b"), n(1)}});
    j.insert(Atom{"r3", {n(1), c("b")}});

    const ConjunctiveQuery q = canonical_boolean_query(j);
    CHECK(q.head_vars.empty());
    CHECK(q.body.size() == 2);
    CHECK(evaluate_query(q, j).tuples.size() == 1);

    Instance split(s);
    split.insert(Atom{"r2", {c("b"), n(1)}});
    split.insert(Atom{"r3", {n(2), c("b")}});
    CHECK(evaluate_query(q, split).tuples.empty());
}

TEST_CASE("a separating example is found and independently verified") {
    const SchemaMapping mp = testutil::fixture_mapping("Mp.map");
    const SchemaMapping mpp = testutil::fixture_mapping("Mpp.map");

    const auto none = find_separating_example(mp, mpp, 1, {"a", "b"});
    CHECK_FALSE(none.has_value());

    const auto sep = find_separating_example(mpp, mp, 1, {"a", "b"});
    REQUIRE(sep.has_value());
    const auto& [inst, query] = *sep;
    CHECK(inst.contains(Atom{"r1", {c("a"), c("b")}}));

    // The query is certain under the left mapping but not under the right.
    const AnswerSet under_left = certain_answers(query, inst, mpp);
    const AnswerSet under_right = certain_answers(query, inst, mp);
    CHECK(under_left.tuples.count({}) == 1);
    CHECK(under_right.tuples.count({}) == 0);
}

}  // TEST_SUITE
