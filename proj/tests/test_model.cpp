#include <doctest.h>

#include "mapcheck/model.hpp"
#include "support.hpp"

using namespace mapcheck;
using testutil::c;
using testutil::n;
using testutil::v;

TEST_SUITE("model") {

TEST_CASE("terms order constants before nulls before variables") {
    CHECK(c("a") < c("b"));
    CHECK(c("z") < n(1));
    CHECK(n(1) < n(2));
    CHECK(n(99) < v("A"));
    CHECK(c("a") == c("a"));
    CHECK(n(3) == n(3));
    CHECK_FALSE(c("1") == n(1));
}

TEST_CASE("term accessors guard their kind") {
    CHECK(c("john").name() == "john");
    CHECK(n(7).null_id() == 7);
    CHECK(v("X").name() == "X");
    CHECK_THROWS_AS((void)n(1).name(), error);
    CHECK_THROWS_AS((void)c("a").null_id(), error);
}

TEST_CASE("term and atom rendering") {
    CHECK(c("50").to_string() == "50");
    CHECK(n(2).to_string() == "_2");
    CHECK(v("X").to_string() == "X");
    Atom a{"r2", {c("b"), n(1)}};
    CHECK(a.to_string() == "r2(b,_1)");
}

TEST_CASE("schema rejects empty names, zero arity, duplicates") {
    Schema s;
    s.add_relation("r", 2);
    CHECK(s.contains("r"));
    CHECK(s.arity_of("r") == 2);
    CHECK_FALSE(s.arity_of("missing").has_value());
    CHECK_THROWS_AS(s.add_relation("r", 2), error);
    CHECK_THROWS_AS(s.add_relation("", 1), error);
    CHECK_THROWS_AS(s.add_relation("q", 0), error);
}

TEST_CASE("schema merge unions relations and rejects arity conflicts") {
    Schema a{{"r1", 2}};
    Schema b{{"r2", 3}, {"r1", 2}};
    Schema u = Schema::merged(a, b);
    CHECK(u.relations().size() == 2);
    Schema clash{{"r1", 1}};
    CHECK_THROWS_AS(Schema::merged(a, clash), error);
}

TEST_CASE("instance validates inserts") {
    Instance i(Schema{{"r", 2}});
    CHECK(i.insert(Atom{"r", {c("a"), n(1)}}));
    CHECK_FALSE(i.insert(Atom{"r", {c("a"), n(1)}}, 5));  // duplicate, level kept
    CHECK(i.level_of(Atom{"r", {c("a"), n(1)}}) == 0);
    CHECK_THROWS_AS(i.insert(Atom{"q", {c("a"), c("b")}}), error);
    CHECK_THROWS_AS(i.insert(Atom{"r", {c("a")}}), error);
    CHECK_THROWS_AS(i.insert(Atom{"r", {v("X"), c("a")}}), error);
    CHECK(i.size() == 1);
}

TEST_CASE("instance equality ignores levels and order") {
    Schema s{{"r", 1}};
    Instance a(s), b(s);
    a.insert(Atom{"r", {c("x")}}, 0);
    a.insert(Atom{"r", {c("y")}}, 1);
    b.insert(Atom{"r", {c("y")}}, 9);
    b.insert(Atom{"r", {c("x")}}, 3);
    CHECK(a == b);
    b.insert(Atom{"r", {n(1)}});
    CHECK_FALSE(a == b);
}

TEST_CASE("instance values and max null id") {
    Instance i(Schema{{"r", 2}});
    i.insert(Atom{"r", {c("a"), n(4)}});
    i.insert(Atom{"r", {n(2), n(4)}});
    const auto vals = i.values();
    CHECK(vals.size() == 3);
    CHECK(vals.count(c("a")) == 1);
    CHECK(vals.count(n(2)) == 1);
    CHECK(i.max_null_id() == 4);
    CHECK(Instance{}.max_null_id() == 0);
}

TEST_CASE("restriction, widening and union of instances") {
    Schema src{{"r1", 1}};
    Schema tgt{{"r2", 1}};
    Schema both = Schema::merged(src, tgt);
    Instance i(both);
    i.insert(Atom{"r1", {c("a")}});
    i.insert(Atom{"r2", {c("b")}}, 1);

    Instance only_target = i.restricted_to(tgt);
    CHECK(only_target.size() == 1);
    CHECK(only_target.contains(Atom{"r2", {c("b")}}));

    Instance widened = only_target.with_schema(both);
    CHECK(widened.schema().contains("r1"));

    Instance j(both);
    j.insert(Atom{"r2", {c("b")}}, 7);
    j.insert(Atom{"r1", {c("c")}});
    Instance u = Instance::union_of(i, j);
    CHECK(u.size() == 3);
    CHECK(u.level_of(Atom{"r2", {c("b")}}) == 1);  // left level wins
}

TEST_CASE("tgd variable classification") {
    // r1(X,Y) -> r2(Y,Z): Z is existential, X and Y are body variables.
    Tgd t;
    t.body.push_back(Atom{"r1", {v("X"), v("Y")}});
    t.head.push_back(Atom{"r2", {v("Y"), v("Z")}});
    CHECK(t.body_vars() == std::set<std::string>{"X", "Y"});
    CHECK(t.head_vars() == std::set<std::string>{"Y", "Z"});
    CHECK(t.existential_vars() == std::set<std::string>{"Z"});
    CHECK(t.to_string() == "r1(X,Y) -> r2(Y,Z)");
}

TEST_CASE("null generator is monotone and disjoint ranges never collide") {
    NullGenerator g;
    CHECK(g.fresh() == n(1));
    CHECK(g.fresh() == n(2));
    CHECK(g.fresh() == n(3));

    NullGenerator a(1), b(1000);
    std::set<Term> seen;
    for (int i = 0; i < 100; ++i) {
        CHECK(seen.insert(a.fresh()).second);
        CHECK(seen.insert(b.fresh()).second);
    }
}

TEST_CASE("validate accepts the bundled mappings") {
    for (const char* f : {"M.map", "Mp.map", "Mpp.map", "intro.map"}) {
        const SchemaMapping m = testutil::fixture_mapping(f);
        CHECK(validate_mapping(m).valid());
    }
}

TEST_CASE("validate flags multi-atom bodies") {
    SchemaMapping m;
    m.source = Schema{{"r1", 2}};
    m.target = Schema{{"r2", 2}};
    Tgd t;
    t.body.push_back(Atom{"r1", {v("X"), v("Y")}});
    t.body.push_back(Atom{"r1", {v("Y"), v("Z")}});
    t.head.push_back(Atom{"r2", {v("X"), v("Z")}});
    m.st_tgds.push_back(t);
    const auto report = validate_mapping(m);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].message == "body must be a single atom, found 2");
    CHECK(report.violations[0].group == "st");
    CHECK(report.violations[0].index == 0);
}

TEST_CASE("validate allows head-only variables, repeated and shared") {
    // r1(X,Y) -> r2(W,Z), r2(Z,W): W and Z existential in several positions.
    SchemaMapping m;
    m.source = Schema{{"r1", 2}};
    m.target = Schema{{"r2", 2}};
    Tgd t;
    t.body.push_back(Atom{"r1", {v("X"), v("Y")}});
    t.head.push_back(Atom{"r2", {v("W"), v("Z")}});
    t.head.push_back(Atom{"r2", {v("Z"), v("W")}});
    m.st_tgds.push_back(t);
    CHECK(validate_mapping(m).valid());
}

TEST_CASE("validate flags vocabulary, arity, constants, nulls") {
    SchemaMapping m;
    m.source = Schema{{"r1", 2}};
    m.target = Schema{{"r2", 2}};

    SUBCASE("source and target names must be disjoint") {
        m.target.add_relation("r1", 2);
        CHECK_FALSE(validate_mapping(m).valid());
    }
    SUBCASE("t tgd must stay in the target schema") {
        Tgd t;
        t.body.push_back(Atom{"r2", {v("X"), v("Y")}});
        t.head.push_back(Atom{"r1", {v("Y"), v("X")}});
        m.t_tgds.push_back(t);
        const auto report = validate_mapping(m);
        REQUIRE_FALSE(report.valid());
        CHECK(report.violations[0].group == "t");
    }
    SUBCASE("body arguments must be variables") {
        Tgd t;
        t.body.push_back(Atom{"r1", {c("a"), v("Y")}});
        t.head.push_back(Atom{"r2", {v("Y"), v("Y")}});
        m.st_tgds.push_back(t);
        const auto report = validate_mapping(m);
        REQUIRE_FALSE(report.valid());
        CHECK(report.violations[0].message ==
              "body arguments must be variables, found constant 'a'");
    }
    SUBCASE("nulls cannot appear in dependencies") {
        Tgd t;
        t.body.push_back(Atom{"r1", {v("X"), v("Y")}});
        t.head.push_back(Atom{"r2", {v("X"), n(1)}});
        m.st_tgds.push_back(t);
        REQUIRE_FALSE(validate_mapping(m).valid());
    }
    SUBCASE("arity mismatches are reported") {
        Tgd t;
        t.body.push_back(Atom{"r1", {v("X")}});
        t.head.push_back(Atom{"r2", {v("X"), v("X")}});
        m.st_tgds.push_back(t);
        REQUIRE_FALSE(validate_mapping(m).valid());
    }
    SUBCASE("heads must be nonempty") {
        Tgd t;
        t.body.push_back(Atom{"r1", {v("X"), v("Y")}});
        m.st_tgds.push_back(t);
        REQUIRE_FALSE(validate_mapping(m).valid());
    }
}

TEST_CASE("all_tgds keeps source-target dependencies first") {
    const SchemaMapping m = testutil::fixture_mapping("M.map");
    REQUIRE(m.st_tgds.size() == 2);
    REQUIRE(m.t_tgds.size() == 1);
    const auto all = m.all_tgds();
    REQUIRE(all.size() == 3);
    CHECK(all[0] == m.st_tgds[0]);
    CHECK(all[2] == m.t_tgds[0]);
}

}  // TEST_SUITE
