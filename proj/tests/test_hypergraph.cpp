#include <doctest.h>

#include <algorithm>
#include <random>

#include "jmbell/errors.hpp"
#include "jmbell/hypergraph.hpp"
#include "oracles.hpp"

using namespace jmbell;

namespace {

JmStructure specker3() { return JmStructure::with_vertices(3, {{0, 1}, {1, 2}, {0, 2}}); }

JmStructure four_vertex() {
    return JmStructure::with_vertices(4, {{0, 1}, {1, 2}, {0, 2}, {3}});
}

} // namespace

TEST_CASE("validate accepts Specker scenarios and incompatible pairs") {
    CHECK(validate(specker3()).valid());
    CHECK(validate(JmStructure::with_vertices(2, {{0}, {1}})).valid());
}

TEST_CASE("validate names the offending edges") {
    SUBCASE("non-antichain") {
        const auto r = validate(JmStructure::with_vertices(2, {{0, 1}, {0}}));
        REQUIRE(r.issues.size() == 1);
        CHECK(r.issues[0].kind == IssueKind::NonAntichain);
        CHECK(r.issues[0].edge == 1);
        CHECK(r.issues[0].other_edge == 0);
        CHECK(r.issues[0].message == "edge {1} is contained in {1,2}");
    }
    SUBCASE("duplicate") {
        const auto r = validate(JmStructure::with_vertices(3, {{0, 1}, {1, 0}}));
        REQUIRE(!r.valid());
        CHECK(r.issues[0].kind == IssueKind::DuplicateEdge);
        CHECK(r.issues[0].edge == 1);
    }
    SUBCASE("unknown vertex") {
        const auto r = validate(JmStructure::with_vertices(2, {{0, 2}}));
        REQUIRE(r.issues.size() == 1);
        CHECK(r.issues[0].kind == IssueKind::UnknownVertex);
        CHECK(r.issues[0].message.find("{1,3}") != std::string::npos);
    }
    SUBCASE("uncovered vertex is fine") {
        CHECK(validate(JmStructure::with_vertices(3, {{0, 1}})).valid());
    }
}

TEST_CASE("is_compatible_set follows the downward closure") {
    const auto j = specker3();
    CHECK(is_compatible_set(j, std::vector<std::size_t>{0, 1}));
    CHECK_FALSE(is_compatible_set(j, std::vector<std::size_t>{0, 1, 2}));
    CHECK(is_compatible_set(j, VertexSet{0}));
    CHECK(is_compatible_set(j, std::vector<std::size_t>{2}));

    const auto lonely = JmStructure::with_vertices(3, {{0, 1}});
    CHECK(is_compatible_set(lonely, std::vector<std::size_t>{2}));
    CHECK_FALSE(is_compatible_set(lonely, std::vector<std::size_t>{1, 2}));
    CHECK_THROWS_AS(is_compatible_set(lonely, std::vector<std::size_t>{3}), UnknownVertex);
}

TEST_CASE("is_nontrivial") {
    CHECK_FALSE(is_nontrivial(JmStructure::with_vertices(3, {{0, 1, 2}})));
    CHECK(is_nontrivial(specker3()));
    CHECK(is_nontrivial(JmStructure::with_vertices(2, {{0}, {1}})));
}

TEST_CASE("minimal incompatible sets of the documented examples") {
    const auto s3 = minimal_incompatible_sets(specker3());
    REQUIRE(s3.size() == 1);
    CHECK(s3[0].members == std::vector<std::size_t>{0, 1, 2});

    const auto s4 = minimal_incompatible_sets(four_vertex());
    const std::vector<std::vector<std::size_t>> expected{{0, 3}, {1, 3}, {2, 3}, {0, 1, 2}};
    REQUIRE(s4.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(s4[i].members == expected[i]);

    CHECK(minimal_incompatible_sets(JmStructure::with_vertices(3, {{0, 1, 2}})).empty());
}

TEST_CASE("enumeration limit") {
    auto big = JmStructure::with_vertices(17, {});
    CHECK_THROWS_AS(minimal_incompatible_sets(big), TooManyVertices);
    CHECK_NOTHROW(minimal_incompatible_sets(big, 17));
}

TEST_CASE("decomposition properties on random structures") {
    std::mt19937 rng(20240611);
    for (int trial = 0; trial < 150; ++trial) {
        const auto j = testing::random_structure(rng, 2 + trial % 6);
        REQUIRE(validate(j).valid());
        const auto sets = minimal_incompatible_sets(j);

        // returned sets are incompatible with all proper subsets compatible
        for (const auto &s : sets) {
            CHECK_FALSE(is_compatible_set(j, s.mask()));
            for (auto v : s.members)
                CHECK(is_compatible_set(j, s.mask() & ~(VertexSet{1} << v)));
        }
        // finite descent: incompatible iff containing some returned set
        const VertexSet end = VertexSet{1} << j.vertex_count;
        for (VertexSet t = 0; t < end; ++t) {
            const bool contains = std::any_of(sets.begin(), sets.end(), [t](const auto &s) {
                return (s.mask() & ~t) == 0;
            });
            CHECK(contains == !is_compatible_set(j, t));
        }
        // invariant under edge reordering
        auto shuffled = j;
        std::shuffle(shuffled.edges.begin(), shuffled.edges.end(), rng);
        CHECK(minimal_incompatible_sets(shuffled) == sets);
        CHECK(sets.empty() == !is_nontrivial(j));
    }
}
