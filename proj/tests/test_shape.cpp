#include <doctest.h>

#include <random>

#include "garland/shape.hpp"
#include "oracles.hpp"

using namespace garland;

namespace {

GarlandShape two_copy_mark(bool spanning) {
    // A 2-point grading-1 mark, either inside copy 0 or across copies 0 and 1.
    GarlandShape s{2, {}};
    if (spanning)
        s.marks.push_back(Mark{1, {{0, 0}, {1, 0}}});
    else
        s.marks.push_back(Mark{1, {{0, 0}, {0, 1}}});
    return s;
}

// All shapes with <= max_copies copies, <= 2 marks, <= 2 points per mark,
// gradings <= 2, labels drawn from a pool of 4 per copy.
std::vector<GarlandShape> small_universe(std::uint32_t max_copies) {
    std::vector<GarlandShape> out;
    for (std::uint32_t k = 0; k <= max_copies; ++k) {
        std::vector<PointRef> pool;
        for (std::uint32_t c = 0; c < k; ++c)
            for (std::uint32_t l = 0; l < 4; ++l) pool.push_back({c, l});
        std::vector<Mark> marks;
        for (std::uint32_t g = 1; g <= 2; ++g) {
            marks.push_back(Mark{g, {}});
            for (std::size_t i = 0; i < pool.size(); ++i) {
                marks.push_back(Mark{g, {pool[i]}});
                for (std::size_t j = i; j < pool.size(); ++j) marks.push_back(Mark{g, {pool[i], pool[j]}});
            }
        }
        out.push_back(GarlandShape{k, {}});
        for (std::size_t i = 0; i < marks.size(); ++i) {
            out.push_back(GarlandShape{k, {marks[i]}});
            for (std::size_t j = i; j < marks.size(); ++j) out.push_back(GarlandShape{k, {marks[i], marks[j]}});
        }
    }
    return out;
}

}  // namespace

TEST_CASE("canonicalize: copy swap and relabeling give identical output") {
    GarlandShape a{2, {Mark{1, {{0, 5}}}, Mark{2, {{1, 3}, {1, 4}}}}};
    GarlandShape b{2, {Mark{2, {{0, 9}, {0, 1}}}, Mark{1, {{1, 7}}}}};
    CHECK(canonicalize(a) == canonicalize(b));
    CHECK(shapes_equal(a, b));
}

TEST_CASE("canonicalize: mark inside one copy differs from mark spanning two") {
    auto inside = two_copy_mark(false);
    auto across = two_copy_mark(true);
    CHECK_FALSE(oracle::brute_force_isomorphic(inside, across));
    CHECK(canonicalize(inside) != canonicalize(across));
}

TEST_CASE("canonicalize: idempotent and invariant under random scrambles") {
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 400; ++trial) {
        auto s = oracle::random_shape(rng, 5, 6, 3, 4);
        auto c = canonicalize(s);
        CHECK(canonicalize(c) == c);
        CHECK(signature(c) == signature(s));
        for (int r = 0; r < 3; ++r) CHECK(canonicalize(oracle::scramble(s, rng)) == c);
    }
}

TEST_CASE("canonicalize: highly symmetric shapes stay fast and correct") {
    // Eight copies, each carrying three pendant singleton marks, chained in
    // a ring by two-point marks.
    GarlandShape s{8, {}};
    for (std::uint32_t c = 0; c < 8; ++c) {
        for (std::uint32_t l = 0; l < 3; ++l) s.marks.push_back(Mark{1, {{c, l}}});
        s.marks.push_back(Mark{2, {{c, 10}, {(c + 1) % 8, 11}}});
    }
    std::mt19937_64 rng(7);
    auto c = canonicalize(s);
    for (int r = 0; r < 5; ++r) CHECK(canonicalize(oracle::scramble(s, rng)) == c);
}

TEST_CASE("canonicalize: rejects invalid shapes") {
    CHECK_THROWS_AS(canonicalize(GarlandShape{1, {Mark{1, {{1, 0}}}}}), ValidationError);
    CHECK_THROWS_AS(canonicalize(GarlandShape{1, {Mark{0, {}}}}), ValidationError);
}

TEST_CASE("shapes_equal: basic cases") {
    GarlandShape empty{};
    GarlandShape one{1, {}};
    CHECK_FALSE(shapes_equal(empty, one));

    std::mt19937_64 rng(99);
    for (int i = 0; i < 50; ++i) {
        auto s = oracle::random_shape(rng, 3, 3, 3, 3);
        auto t = s;
        t.marks.push_back(Mark{1, {}});
        CHECK(shapes_equal(s, oracle::scramble(s, rng)));
        CHECK_FALSE(shapes_equal(s, t));
    }
}

TEST_CASE("shapes_equal agrees with brute-force isomorphism on the small universe") {
    const auto universe = small_universe(2);
    // Group by canonical form, then check every member against its group's
    // representative and every pair of representatives against each other.
    std::map<GarlandShape, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < universe.size(); ++i) groups[canonicalize(universe[i])].push_back(i);
    std::vector<std::size_t> reps;
    std::size_t mismatches = 0;
    for (const auto& [canon, members] : groups) {
        reps.push_back(members.front());
        for (auto i : members)
            if (!oracle::brute_force_isomorphic(universe[members.front()], universe[i])) ++mismatches;
    }
    for (std::size_t i = 0; i < reps.size(); ++i) {
        for (std::size_t j = i + 1; j < reps.size(); ++j) {
            const auto& a = universe[reps[i]];
            const auto& b = universe[reps[j]];
            if (signature(a) != signature(b)) continue;
            if (oracle::brute_force_isomorphic(a, b)) ++mismatches;
        }
    }
    CHECK(mismatches == 0);
    MESSAGE(universe.size() << " shapes, " << groups.size() << " classes");
}

TEST_CASE("signature") {
    CHECK(signature(GarlandShape{2, {Mark{2, {}}, Mark{1, {}}}}) == ComponentSignature{2, {1, 2}});
    CHECK(signature(GarlandShape{}) == ComponentSignature{0, {}});
    CHECK(signature(GarlandShape{3, {Mark{1, {}}, Mark{1, {{2, 0}}}}}) == ComponentSignature{3, {1, 1}});
}

TEST_CASE("disjoint_union") {
    GarlandShape one{1, {}};
    auto u = disjoint_union(one, one);
    CHECK(u.shape == GarlandShape{2, {}});

    GarlandShape s{2, {Mark{1, {{0, 0}, {1, 2}}}}};
    auto e = disjoint_union(GarlandShape{}, s);
    CHECK(e.shape == s);
    CHECK(e.copy_map_second == std::vector<std::uint32_t>{0, 1});

    GarlandShape a{1, {Mark{1, {{0, 0}}}}};
    GarlandShape b{2, {Mark{2, {{1, 0}}}}};
    CHECK(signature(disjoint_union(a, b).shape) == ComponentSignature{3, {1, 2}});

    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        auto x = oracle::random_shape(rng, 3, 3, 3, 3);
        auto y = oracle::random_shape(rng, 3, 3, 3, 3);
        auto z = oracle::random_shape(rng, 3, 3, 3, 3);
        CHECK(shapes_equal(disjoint_union(x, y).shape, disjoint_union(y, x).shape));
        CHECK(shapes_equal(disjoint_union(disjoint_union(x, y).shape, z).shape,
                           disjoint_union(x, disjoint_union(y, z).shape).shape));
        auto sx = signature(x), sy = signature(y), su = signature(disjoint_union(x, y).shape);
        CHECK(su.copies == sx.copies + sy.copies);
        CHECK(su.gradings.size() == sx.gradings.size() + sy.gradings.size());
    }
}

TEST_CASE("colored canonical form keeps colours on their marks") {
    GarlandShape s{1, {Mark{1, {{0, 0}}}, Mark{1, {{0, 1}}}}};
    std::vector<std::uint8_t> first{1, 0}, second{0, 1};
    CHECK(canonicalize(s, first) == canonicalize(s, second));
    GarlandShape t{1, {Mark{1, {{0, 0}}}, Mark{1, {{0, 1}, {0, 2}}}}};
    std::vector<std::uint8_t> single{1, 0}, pair{0, 1};
    CHECK(canonicalize(t, single) != canonicalize(t, pair));
}
