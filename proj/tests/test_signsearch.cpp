#include <doctest.h>

#include <algorithm>
#include <set>

#include "garland/signsearch.hpp"

using namespace garland;
using namespace garland::signs;

namespace {

calc::AlgebraParams z_params(int n = 1, int m = 2) {
    calc::AlgebraParams p;
    p.ring = sign::Ring::Z;
    p.n = n;
    p.m = m;
    return p;
}

sign::ParityPoly relabel(const sign::ParityPoly& p, std::array<unsigned, 4> mapping) {
    return p.substitute(mapping);
}

/// Cyclic relabeling α₁ → α₃ position etc: inputs (α₂, α₃, α₁).
lab::Inputs rotate(const lab::Inputs& in) {
    lab::Inputs out = in;
    out.slots = {in.slots[1], in.slots[2], in.slots[0]};
    return out;
}

SignRule rotate(const SignRule& r) {
    // Rotated triple has parities (s1, s2, s0): old variable 1 → 0, 2 → 1, 0 → 2.
    const std::array<unsigned, 4> m{2, 0, 1, 3};
    return {r.selector, {relabel(r.exponents[1], m), relabel(r.exponents[2], m), relabel(r.exponents[0], m)}};
}

lab::Inputs swap12(const lab::Inputs& in) {
    lab::Inputs out = in;
    std::swap(out.slots[0], out.slots[1]);
    return out;
}

SignRule swap12(const SignRule& r) {
    const std::array<unsigned, 4> m{1, 0, 2, 3};
    return {r.selector, {relabel(r.exponents[0], m), relabel(r.exponents[2], m), relabel(r.exponents[1], m)}};
}

}  // namespace

TEST_CASE("enumerate_rules: counts, zero rule, determinism, no duplicates") {
    CHECK(monomial_basis(1).size() == 5);
    CHECK(monomial_basis(2).size() == 11);
    CHECK_THROWS_AS(monomial_basis(3), UnsupportedBound);
    CHECK_THROWS_AS(RuleSpace(0), UnsupportedBound);

    const RuleSpace space(1);
    CHECK(space.polys_per_slot() == 32);
    CHECK(space.size() == selectors().size() * 32 * 32 * 32);

    const auto rules = enumerate_rules(1);
    CHECK(rules.size() == space.size());
    CHECK(rules == enumerate_rules(1));
    CHECK(std::find(rules.begin(), rules.end(), SignRule{}) != rules.end());
    CHECK(rules.front() == SignRule{});
    CHECK(std::set<SignRule>(rules.begin(), rules.end()).size() == rules.size());

    const RuleSpace quad(2);
    CHECK(quad.size() == 2ull * 2048 * 2048 * 2048);
    std::set<std::uint16_t> tables;
    for (std::uint64_t c = 0; c < quad.polys_per_slot(); ++c) {
        const auto p = quad.poly(c);
        CHECK(p.degree() <= 2);
        std::uint16_t t = 0;
        for (unsigned s = 0; s < 16; ++s)
            if (p.evaluate(s)) t = static_cast<std::uint16_t>(t | 1u << s);
        CHECK(t == quad.truth_table(c));
        tables.insert(t);
    }
    CHECK(tables.size() == 2048);
}

TEST_CASE("signed sum and zero-pattern mask agree with direct evaluation") {
    const auto p = z_params();
    const auto triples = sample_triples(5, 3, p);
    for (const auto& t : triples) {
        const auto terms = jacobi_terms(t, p);
        const auto mask = zero_patterns(terms);
        for (unsigned pat = 0; pat < 8; ++pat) {
            calc::Element direct(terms.summands[0].params());
            for (unsigned i = 0; i < 3; ++i)
                direct = calc::add(direct, pat >> i & 1 ? calc::scale(terms.summands[i], -1) : terms.summands[i]);
            CHECK(direct == signed_sum(terms, pat));
            CHECK(bool(mask >> pat & 1) == direct.is_zero());
        }
    }
}

TEST_CASE("degree-1 survivors equal the brute-force survivor set") {
    const auto p = z_params();
    const auto triples = sample_triples(12, 21, p);
    SearchOptions opts;
    opts.list_limit = 1u << 20;
    const auto report = search_on(1, triples, p, opts);
    CHECK_FALSE(report.survivors_truncated);

    std::vector<JacobiTerms> zero_terms, koszul_terms;
    for (const auto& t : triples) {
        auto pz = p;
        pz.sign_rule = calc::ConstructionSign::Zero;
        zero_terms.push_back(jacobi_terms(t, pz));
        auto pk = p;
        pk.sign_rule = calc::ConstructionSign::KoszulOrder;
        koszul_terms.push_back(jacobi_terms(t, pk));
    }
    std::vector<SignRule> brute;
    std::uint64_t eliminated = 0;
    for (const auto& rule : enumerate_rules(1)) {
        const auto& terms = rule.selector == calc::ConstructionSign::Zero ? zero_terms : koszul_terms;
        bool ok = true;
        for (const auto& jt : terms) {
            unsigned pat = 0;
            for (unsigned i = 0; i < 3; ++i) pat |= unsigned(rule.exponents[i].evaluate(jt.assignment)) << i;
            if (!signed_sum(jt, pat).is_zero()) {
                ok = false;
                break;
            }
        }
        if (ok)
            brute.push_back(rule);
        else
            ++eliminated;
    }
    CHECK(report.survivors == brute);
    CHECK(report.survivor_count() == brute.size());
    std::uint64_t attributed = 0;
    for (const auto& e : report.eliminations) {
        REQUIRE(e.rules_eliminated);
        attributed += *e.rules_eliminated;
        CHECK_FALSE(e.residual.is_zero());
    }
    CHECK(attributed == eliminated);
    // Spot-check survivors with the independent per-rule path.
    for (std::size_t i = 0; i < brute.size(); i += std::max<std::size_t>(1, brute.size() / 10))
        CHECK(survives(brute[i], triples, p));
}

TEST_CASE("degree-2 counting agrees with direct evaluation on a sample of rules") {
    const auto p = z_params();
    const auto triples = sample_triples(10, 4, p);
    SearchOptions opts;
    opts.list_limit = 64;
    const auto report = search_on(2, triples, p, opts);
    CHECK(report.enumerated == RuleSpace(2).size());
    for (const auto& r : report.survivors) CHECK(survives(r, triples, p));
    // Degree-1 survivors embed as degree-2 survivors.
    const auto lin = search_on(1, triples, p);
    CHECK(report.survivor_count() >= lin.survivor_count());
    // Independent count restricted to rules whose exponents are all
    // constants: 2 selectors x 2^3 sign choices.
    std::uint64_t constant_survivors = 0;
    for (auto sel : selectors())
        for (unsigned pat = 0; pat < 8; ++pat) {
            SignRule r{sel, {}};
            for (unsigned i = 0; i < 3; ++i) r.exponents[i] = sign::ParityPoly::constant(pat >> i & 1);
            if (survives(r, triples, p)) ++constant_survivors;
        }
    std::uint64_t listed_constant = 0;
    const auto deg1_full = search_on(1, triples, p, SearchOptions{1u << 20});
    for (const auto& r : deg1_full.survivors) {
        bool constant = true;
        for (const auto& e : r.exponents) constant = constant && e.degree() == 0;
        if (constant) ++listed_constant;
    }
    CHECK(listed_constant == constant_survivors);
}

TEST_CASE("search is reproducible and prefix-monotone") {
    const auto p = z_params();
    const auto a = search(1, 30, 11, p);
    const auto b = search(1, 30, 11, p);
    CHECK(a.survivors == b.survivors);
    CHECK(a.survivors_per_selector == b.survivors_per_selector);
    CHECK(a.eliminations.size() == b.eliminations.size());

    // A rule eliminated within the first 15 trials stays eliminated with 30.
    const auto shorter = search(1, 15, 11, p, SearchOptions{1u << 20});
    const auto longer = search(1, 30, 11, p, SearchOptions{1u << 20});
    std::set<SignRule> short_set(shorter.survivors.begin(), shorter.survivors.end());
    for (const auto& r : longer.survivors) CHECK(short_set.count(r) == 1);
}

TEST_CASE("zero trials: every rule survives, flagged untested") {
    const auto r = search(1, 0, 1, z_params());
    CHECK(r.untested());
    CHECK(r.survivor_count() == r.enumerated);
    CHECK(r.survivors.size() == 256);
    CHECK(r.survivors_truncated);
    CHECK(r.eliminations.empty());
}

TEST_CASE("residuals are invariant under cyclic relabeling of the inputs") {
    const auto p = z_params();
    const auto triples = sample_triples(6, 8, p);
    const auto rules = enumerate_rules(1);
    for (const auto& t : triples)
        for (std::size_t i = 0; i < rules.size(); i += 997) {
            CHECK(residual(rules[i], t, p) == residual(rotate(rules[i]), rotate(t), p));
        }
}

TEST_CASE("zero selector: α₁ ↔ α₂ with the matching slot swap preserves residuals and the survivor set") {
    auto p = z_params();
    p.sign_rule = calc::ConstructionSign::Zero;
    const auto triples = sample_triples(6, 5, p);
    const auto rules = enumerate_rules(1);
    for (const auto& t : triples)
        for (std::size_t i = 0; i < rules.size() / 2; i += 499)
            CHECK(residual(rules[i], t, p) == residual(swap12(rules[i]), swap12(t), p));

    auto closed = triples;
    for (const auto& t : triples) closed.push_back(swap12(t));
    const auto report = search_on(1, closed, p, SearchOptions{1u << 20});
    std::set<SignRule> zero_survivors;
    for (const auto& r : report.survivors)
        if (r.selector == calc::ConstructionSign::Zero) zero_survivors.insert(r);
    for (const auto& r : zero_survivors) CHECK(zero_survivors.count(swap12(r)) == 1);
}

TEST_CASE("every survivor's mod-2 shadow passes the jacobi-mod2 suite") {
    const auto p = z_params();
    const auto report = search(1, 20, 2, p);
    std::set<calc::ConstructionSign> seen;
    for (const auto& r : report.survivors) seen.insert(r.selector);
    seen.insert(calc::ConstructionSign::Zero);
    for (auto sel : seen) {
        const auto shadow = mod2_shadow(SignRule{sel, {}}, 30, 2, p);
        CHECK(shadow.effective.ring == sign::Ring::Z2);
        CHECK(shadow.passes == shadow.trials);
    }
}
