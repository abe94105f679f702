#include <doctest.h>

#include "garland/lab.hpp"

using namespace garland;
using namespace garland::lab;

namespace {

calc::AlgebraParams params(sign::Ring ring, int n = 1, int m = 2, bool boundary = false,
                           calc::ConstructionSign rule = calc::ConstructionSign::Zero) {
    calc::AlgebraParams p;
    p.ring = ring;
    p.n = n;
    p.m = m;
    p.p_is_boundary = boundary;
    p.sign_rule = rule;
    return p;
}

bool within(const calc::BaseGenerator& g, const Bounds& b) {
    if (g.shape.copies > b.max_copies) return false;
    if (g.degree < b.min_degree || g.degree > b.max_degree) return false;
    if (g.shape.marks.size() > std::max<std::uint32_t>(b.max_marks, 1)) return false;
    for (const auto& m : g.shape.marks)
        if (m.grading > b.max_grading || m.points.size() > b.max_points) return false;
    return true;
}

}  // namespace

TEST_CASE("rng and seed derivation are deterministic") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    Rng c(1);
    for (int i = 0; i < 1000; ++i) {
        const auto x = c.between(-2, 6);
        CHECK(x >= -2);
        CHECK(x <= 6);
    }
    CHECK(derive_seed(1, "comm", 0) == derive_seed(1, "comm", 0));
    CHECK(derive_seed(1, "comm", 0) != derive_seed(1, "comm", 1));
    CHECK(derive_seed(1, "comm", 0) != derive_seed(1, "assoc", 0));
    CHECK(derive_seed(1, "comm", 0) != derive_seed(2, "comm", 0));
}

TEST_CASE("random_generator: determinism, M-component bound, bounds compliance") {
    const Bounds b{};
    CHECK(random_generator(9, b, Family::General, "a") == random_generator(9, b, Family::General, "a"));

    Bounds zero = b;
    zero.max_copies = 0;
    const auto m = random_generator(3, zero, Family::General, "a");
    CHECK(m.shape == GarlandShape{0, {Mark{1, {}}}});

    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        for (auto fam : {Family::General, Family::OneGradingOne}) {
            const auto g = random_generator(seed, b, fam, "x");
            CHECK(within(g, b));
            CHECK(canonicalize(g.shape) == g.shape);
            const auto g1 = grading_one_count(g.shape);
            if (fam == Family::General)
                CHECK(g1 >= 1);
            else
                CHECK(g1 == 1);
        }
    }
}

TEST_CASE("identity names round-trip and unknown names are rejected") {
    for (auto id : all_identities()) CHECK(identity_from_string(to_string(id)) == id);
    CHECK(all_identities().size() == 11);
    CHECK_THROWS_AS(identity_from_string("frobnicate"), UnknownIdentity);
}

TEST_CASE("check reports are reproducible from identity, seed, trials and params") {
    const auto p = params(sign::Ring::Z2);
    for (auto id : {Identity::Assoc, Identity::BvProbe, Identity::Comm}) {
        const auto r1 = check(id, 40, 5, p);
        const auto r2 = check(id, 40, 5, p);
        CHECK(r1 == r2);
    }
    // Prefix stability: the first 20 trials see the same inputs either way.
    const auto short_run = check(Identity::Assoc, 20, 5, p);
    const auto long_run = check(Identity::Assoc, 40, 5, p);
    if (short_run.first_failure) CHECK(short_run.first_failure == long_run.first_failure);
}

TEST_CASE("claimed identities report zero failures over (n, m) in {1,2,3}^2") {
    const std::vector<Identity> general{Identity::Distrib,     Identity::Bilinear, Identity::Prop42,
                                        Identity::Prop43,      Identity::DeltaSq,  Identity::AntisymMod2,
                                        Identity::JacobiMod2};
    for (int n = 1; n <= 3; ++n) {
        for (int m = 1; m <= 3; ++m) {
            CAPTURE(n);
            CAPTURE(m);
            for (auto ring : {sign::Ring::Z2, sign::Ring::Z}) {
                const auto rule = ring == sign::Ring::Z ? calc::ConstructionSign::KoszulOrder : calc::ConstructionSign::Zero;
                const auto p = params(ring, n, m, true, rule);
                for (auto id : general) {
                    const auto trials = id == Identity::JacobiMod2 ? 8 : 25;
                    const auto r = check(id, trials, 100 + n * 10 + m, p);
                    CAPTURE(to_string(id));
                    CHECK(r.passes == r.trials);
                    CHECK(r.verdict() == "PASS");
                }
                CHECK(check(Identity::Comm, 25, 3, p).verdict() == "PASS");
                CHECK(check(Identity::Assoc, 25, 3, p, Family::OneGradingOne).verdict() == "PASS");
                CHECK(check(Identity::UnitLaw, 25, 3, p, Family::OneGradingOne).verdict() == "PASS");
                CHECK(check(Identity::Prop42, 25, 3, p, Family::LiftImage).verdict() == "PASS");
            }
        }
    }
}

TEST_CASE("hypothesis-dependent identities report NO-CLAIM without the boundary flag") {
    const auto p = params(sign::Ring::Z2);
    const auto r = check(Identity::DeltaSq, 50, 1, p);
    CHECK_FALSE(r.claimed);
    CHECK(r.verdict() == "NO-CLAIM");
    CHECK(r.passes < r.trials);
    CHECK_FALSE(r.diverges());
}

TEST_CASE("mod-2 identities are evaluated in Z/2 whatever ring is requested") {
    const auto p = params(sign::Ring::Z);
    const auto r = check(Identity::JacobiMod2, 5, 1, p);
    CHECK(r.effective.ring == sign::Ring::Z2);
    CHECK(r.params.ring == sign::Ring::Z);
}

TEST_CASE("assoc on the general family diverges and minimizes to an outer factor with two grading-1 marks") {
    for (auto ring : {sign::Ring::Z2, sign::Ring::Z}) {
        const auto p = params(ring);
        const auto r = check(Identity::Assoc, 200, 7, p);
        REQUIRE(r.first_failure);
        CHECK(r.verdict() == "DIVERGES-FROM-PAPER");
        const auto& f = *r.first_failure;
        CHECK_FALSE(f.evaluation.holds);
        CHECK_FALSE(f.minimized_evaluation.holds);
        const auto a = grading_one_marks(f.minimized.slots[0]);
        const auto c = grading_one_marks(f.minimized.slots[2]);
        CHECK(std::max(a, c) == 2);
        for (const auto& s : f.minimized.slots) CHECK(s.terms.size() == 1);
        CHECK(minimize(Identity::Assoc, f.minimized, p) == f.minimized);
    }
}

TEST_CASE("unit-law on the general family minimizes to a factor with two grading-1 marks") {
    const auto p = params(sign::Ring::Z2);
    const auto r = check(Identity::UnitLaw, 200, 7, p);
    REQUIRE(r.first_failure);
    CHECK(grading_one_marks(r.first_failure->minimized.slots[0]) == 2);
}

TEST_CASE("every shrink step preserves failure; minimize rejects passing inputs") {
    const auto p = params(sign::Ring::Z2);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto in = random_inputs(seed, 3, Bounds{}, Family::General, p);
        if (evaluate(Identity::Assoc, in, p).holds) {
            CHECK_THROWS_AS(minimize(Identity::Assoc, in, p), NotACounterexample);
            continue;
        }
        const auto small = minimize(Identity::Assoc, in, p);
        CHECK_FALSE(evaluate(Identity::Assoc, small, p).holds);
        CHECK(minimize(Identity::Assoc, small, p) == small);
    }
}

TEST_CASE("bv-probe yields a stable verdict and records M-component inputs") {
    const auto p = params(sign::Ring::Z2);
    const auto r1 = check(Identity::BvProbe, 30, 9, p);
    CHECK(r1 == check(Identity::BvProbe, 30, 9, p));
    CHECK_FALSE(r1.claimed);
    CHECK((r1.verdict() == "HOLDS" || r1.verdict() == "FAILS"));
    CHECK(r1.m_component_trials > 0);
}
