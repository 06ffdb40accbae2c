#include <doctest.h>

#include <numeric>

#include "generators.hpp"
#include "mapcheck/dummies.hpp"
#include "support.hpp"

using namespace mapcheck;
using testutil::c;

namespace {

// Equality pattern of a fact's argument list: block index per position,
// blocks numbered by first occurrence (same encoding the generator uses).
std::vector<std::size_t> pattern_of(const Atom& a) {
    std::vector<std::size_t> code;
    std::vector<Term> seen;
    for (const Term& t : a.args) {
        std::size_t block = seen.size();
        for (std::size_t i = 0; i < seen.size(); ++i)
            if (seen[i] == t) block = i;
        if (block == seen.size()) seen.push_back(t);
        code.push_back(block);
    }
    return code;
}

std::size_t bell(std::size_t n) {
    // Bell triangle, plenty for test-sized arities.
    std::vector<std::vector<std::size_t>> tri{{1}};
    for (std::size_t i = 1; i <= n; ++i) {
        std::vector<std::size_t> row{tri.back().back()};
        for (std::size_t j = 0; j < tri.back().size(); ++j)
            row.push_back(row.back() + tri.back()[j]);
        tri.push_back(row);
    }
    return tri[n][0];
}

}  // namespace

TEST_SUITE("dummies") {

TEST_CASE("set partitions come finest first with Bell-number counts") {
    CHECK(set_partitions(0) == std::vector<std::vector<std::size_t>>{{}});
    CHECK(set_partitions(1) == std::vector<std::vector<std::size_t>>{{0}});
    CHECK(set_partitions(2) == std::vector<std::vector<std::size_t>>{{0, 1}, {0, 0}});

    const auto three = set_partitions(3);
    REQUIRE(three.size() == 5);
    CHECK(three.front() == std::vector<std::size_t>{0, 1, 2});  // all distinct
    CHECK(three.back() == std::vector<std::size_t>{0, 0, 0});   // all equal

    for (std::size_t n = 0; n <= 5; ++n) CHECK(set_partitions(n).size() == bell(n));

    // Every code is a restricted-growth string and no code repeats.
    std::set<std::vector<std::size_t>> uniq;
    for (const auto& code : set_partitions(4)) {
        std::size_t max_block = 0;
        for (std::size_t i = 0; i < code.size(); ++i) {
            CHECK(code[i] <= max_block);
            max_block = std::max(max_block, code[i] + 1);
        }
        CHECK(uniq.insert(code).second);
    }
}

TEST_CASE("the bundled example yields exactly two canonical instances in order") {
    const SchemaMapping m = testutil::fixture_mapping("M.map");
    const DummySet ds = dummy_instances(m);
    REQUIRE(ds.instances.size() == 2);

    Instance split(m.source);
    split.insert(Atom{"r1", {c("z1"), c("z2")}});
    CHECK(ds.instances[0].instance == split);
    CHECK(ds.instances[0].predicate == "r1");
    CHECK(ds.instances[0].partition ==
          std::vector<std::vector<std::size_t>>{{0}, {1}});

    Instance merged(m.source);
    merged.insert(Atom{"r1", {c("z1"), c("z1")}});
    CHECK(ds.instances[1].instance == merged);
    CHECK(ds.instances[1].partition == std::vector<std::vector<std::size_t>>{{0, 1}});
}

TEST_CASE("a ternary body predicate yields the five patterns") {
    const SchemaMapping m = testutil::mapping_from(
        "source { e/3; } target { p/2; } st { e(X,Y,Z) -> p(X,Y); } t { }");
    const DummySet ds = dummy_instances(m);
    REQUIRE(ds.instances.size() == 5);
    const Atom& first = ds.instances[0].instance.facts().begin()->first;
    CHECK(first == Atom{"e", {c("z1"), c("z2"), c("z3")}});
    const Atom& last = ds.instances[4].instance.facts().begin()->first;
    CHECK(last == Atom{"e", {c("z1"), c("z1"), c("z1")}});
}

TEST_CASE("no source-to-target dependencies, no dummies") {
    const SchemaMapping m =
        testutil::mapping_from("source { r1/2; } target { r2/2; } st { } t { }");
    CHECK(dummy_instances(m).instances.empty());
}

TEST_CASE("predicates missing from every st body are skipped") {
    const SchemaMapping m = testutil::mapping_from(
        "source { used/1; unused/3; } target { p/1; } st { used(X) -> p(X); } t { }");
    const DummySet ds = dummy_instances(m);
    REQUIRE(ds.instances.size() == 1);
    CHECK(ds.instances[0].predicate == "used");
}

TEST_CASE("count equals the sum of Bell numbers over st body predicates") {
    testutil::Rng rng(555);
    for (int trial = 0; trial < 30; ++trial) {
        const Schema src = testutil::random_schema(rng, "s", 3, 3);
        const Schema tgt = testutil::random_schema(rng, "t", 2, 2);
        const SchemaMapping m = testutil::random_weakly_acyclic_mapping(rng, src, tgt, 3, 0);

        std::set<std::string> used;
        for (const Tgd& t : m.st_tgds) used.insert(t.body_atom().predicate);
        std::size_t expected = 0;
        for (const std::string& p : used) expected += bell(*src.arity_of(p));
        CHECK(dummy_instances(m).instances.size() == expected);
    }
}

TEST_CASE("every single fact realizes the pattern of exactly one dummy") {
    testutil::Rng rng(808);
    const SchemaMapping m = testutil::mapping_from(
        "source { e/3; } target { p/2; } st { e(X,Y,Z) -> p(X,Y); } t { }");
    const DummySet ds = dummy_instances(m);

    for (int trial = 0; trial < 100; ++trial) {
        Atom fact{"e", {}};
        const std::vector<std::string> pool = {"a", "b", "c"};
        for (int i = 0; i < 3; ++i)
            fact.args.push_back(Term::constant(pool[rng.below(pool.size())]));

        std::size_t matches = 0;
        for (const DummyInstance& d : ds.instances) {
            const Atom& pat = d.instance.facts().begin()->first;
            if (pattern_of(pat) == pattern_of(fact)) ++matches;
        }
        CHECK(matches == 1);
    }
}

TEST_CASE("dummy constants are fresh per instance and z-prefixed") {
    const SchemaMapping m = testutil::mapping_from(
        "source { e/3; } target { p/2; } st { e(X,Y,Z) -> p(X,Y); } t { }");
    for (const DummyInstance& d : dummy_instances(m).instances) {
        std::set<std::string> names;
        for (const Term& t : d.instance.values()) {
            REQUIRE(t.is_constant());
            CHECK(t.name()[0] == 'z');
            names.insert(t.name());
        }
        // Distinct blocks use distinct constants, numbered from z1.
        CHECK(names.size() == d.partition.size());
        CHECK(names.count("z1") == 1);
    }
}

}  // TEST_SUITE
