#include "garland/signsearch.hpp"

#include <algorithm>
#include <unordered_map>

namespace garland::signs {

using calc::AlgebraParams;
using calc::ConstructionSign;
using calc::Element;

namespace {

constexpr unsigned kAssignments = 1u << kVariables;

std::uint16_t table_of(std::uint64_t monomial) {
    std::uint16_t t = 0;
    for (unsigned s = 0; s < kAssignments; ++s)
        if ((s & monomial) == monomial) t = static_cast<std::uint16_t>(t | 1u << s);
    return t;
}

unsigned bit(std::uint64_t word, unsigned i) { return static_cast<unsigned>(word >> i & 1); }

AlgebraParams with_selector(AlgebraParams p, ConstructionSign selector) {
    p.ring = sign::Ring::Z;
    p.sign_rule = selector;
    return p;
}

}  // namespace

const std::vector<std::string>& variable_names() {
    static const std::vector<std::string> names{"a1", "a2", "a3", "n"};
    return names;
}

const std::vector<ConstructionSign>& selectors() {
    static const std::vector<ConstructionSign> all{ConstructionSign::Zero, ConstructionSign::KoszulOrder};
    return all;
}

std::vector<std::uint64_t> monomial_basis(int degree_bound) {
    if (degree_bound != 1 && degree_bound != 2)
        throw UnsupportedBound("sign search degree bound must be 1 or 2, got " + std::to_string(degree_bound));
    std::vector<std::uint64_t> basis{0};
    for (unsigned i = 0; i < kVariables; ++i) basis.push_back(std::uint64_t{1} << i);
    if (degree_bound == 2)
        for (unsigned i = 0; i < kVariables; ++i)
            for (unsigned j = i + 1; j < kVariables; ++j) basis.push_back(std::uint64_t{1} << i | std::uint64_t{1} << j);
    return basis;
}

std::string to_string(const SignRule& rule) {
    const auto& names = variable_names();
    std::string s = calc::to_string(rule.selector) + ":";
    for (std::size_t i = 0; i < 3; ++i)
        s += " e" + std::to_string(i + 1) + "=" + rule.exponents[i].to_string(names) + (i < 2 ? ";" : "");
    return s;
}

RuleSpace::RuleSpace(int degree_bound) : bound_(degree_bound), basis_(monomial_basis(degree_bound)) {
    for (auto m : basis_) basis_tables_.push_back(table_of(m));
}

std::uint64_t RuleSpace::size() const {
    const auto p = polys_per_slot();
    return selectors().size() * p * p * p;
}

sign::ParityPoly RuleSpace::poly(std::uint64_t code) const {
    sign::ParityPoly p;
    for (std::size_t i = 0; i < basis_.size(); ++i)
        if (bit(code, static_cast<unsigned>(i))) p += sign::ParityPoly::monomial(basis_[i]);
    return p;
}

std::uint16_t RuleSpace::truth_table(std::uint64_t code) const {
    std::uint16_t t = 0;
    for (std::size_t i = 0; i < basis_.size(); ++i)
        if (bit(code, static_cast<unsigned>(i))) t ^= basis_tables_[i];
    return t;
}

SignRule RuleSpace::at(std::uint64_t index) const {
    if (index >= size()) throw std::out_of_range("rule index out of range");
    const auto p = polys_per_slot();
    SignRule r;
    r.exponents[2] = poly(index % p);
    index /= p;
    r.exponents[1] = poly(index % p);
    index /= p;
    r.exponents[0] = poly(index % p);
    r.selector = selectors()[index / p];
    return r;
}

std::vector<SignRule> enumerate_rules(int degree_bound) {
    const RuleSpace space(degree_bound);
    std::vector<SignRule> out;
    out.reserve(space.size());
    for (std::uint64_t i = 0; i < space.size(); ++i) out.push_back(space.at(i));
    return out;
}

JacobiTerms jacobi_terms(const lab::Inputs& triple, const AlgebraParams& params) {
    if (triple.slots.size() != 3) throw std::invalid_argument("jacobi needs three inputs");
    JacobiTerms t;
    std::array<Element, 3> x;
    for (unsigned i = 0; i < 3; ++i) {
        const auto& terms = triple.slots[i].terms;
        if (terms.empty()) throw std::invalid_argument("empty input slot");
        const auto parity = terms.front().generator.degree & 1;
        for (const auto& w : terms)
            if ((w.generator.degree & 1) != parity) throw std::invalid_argument("input slot is not homogeneous");
        t.assignment |= static_cast<std::uint64_t>(parity) << i;
        x[i] = lab::slot_element(triple.slots[i], triple.family, params);
    }
    t.assignment |= static_cast<std::uint64_t>(params.n & 1) << 3;
    t.summands = {calc::bracket(calc::bracket(x[0], x[1]), x[2]), calc::bracket(calc::bracket(x[1], x[2]), x[0]),
                  calc::bracket(calc::bracket(x[2], x[0]), x[1])};
    return t;
}

Element signed_sum(const JacobiTerms& terms, unsigned pattern) {
    Element sum(terms.summands[0].params());
    for (unsigned i = 0; i < 3; ++i) sum = calc::add(sum, calc::scale(terms.summands[i], bit(pattern, i) ? -1 : 1));
    return sum;
}

std::uint8_t zero_patterns(const JacobiTerms& terms) {
    std::uint8_t mask = 0;
    for (unsigned p = 0; p < 8; ++p)
        if (signed_sum(terms, p).is_zero()) mask = static_cast<std::uint8_t>(mask | 1u << p);
    return mask;
}

namespace {

unsigned pattern_at(const SignRule& rule, std::uint64_t assignment) {
    unsigned p = 0;
    for (unsigned i = 0; i < 3; ++i) p |= static_cast<unsigned>(rule.exponents[i].evaluate(assignment)) << i;
    return p;
}

}  // namespace

Element residual(const SignRule& rule, const lab::Inputs& triple, const AlgebraParams& params) {
    const auto terms = jacobi_terms(triple, with_selector(params, rule.selector));
    return signed_sum(terms, pattern_at(rule, terms.assignment));
}

bool survives(const SignRule& rule, const std::vector<lab::Inputs>& triples, const AlgebraParams& params) {
    return std::all_of(triples.begin(), triples.end(),
                       [&](const auto& t) { return residual(rule, t, params).is_zero(); });
}

std::uint64_t SearchReport::survivor_count() const {
    std::uint64_t total = 0;
    for (auto c : survivors_per_selector) total += c;
    return total;
}

std::vector<lab::Inputs> sample_triples(std::size_t trials, std::uint64_t seed, const AlgebraParams& params) {
    lab::Bounds bounds;
    bounds.max_terms = 1;
    const auto p = with_selector(params, ConstructionSign::Zero);
    std::vector<lab::Inputs> out;
    for (std::size_t t = 0; t < trials; ++t)
        out.push_back(lab::random_inputs(lab::derive_seed(seed, "signs", t), 3, bounds, lab::Family::General, p));
    return out;
}

namespace {

/// Allowed patterns per assignment after some trials, for one selector.
struct Constraint {
    std::array<std::uint8_t, kAssignments> allowed;

    Constraint() { allowed.fill(0xff); }
};

class SurvivorCounter {
public:
    explicit SurvivorCounter(const RuleSpace& space) : space_(space) {
        for (std::uint64_t c = 0; c < space.polys_per_slot(); ++c) tables_.push_back(space.truth_table(c));
    }

    /// Number of e3 codes compatible with (e1, e2) under the constraint.
    std::uint64_t third_slot(const Constraint& k, std::uint16_t t1, std::uint16_t t2) {
        std::uint32_t fix = 0, val = 0;
        for (unsigned s = 0; s < kAssignments; ++s) {
            const unsigned base = bit(t1, s) | bit(t2, s) << 1;
            const bool zero_ok = bit(k.allowed[s], base), one_ok = bit(k.allowed[s], base | 4);
            if (!zero_ok && !one_ok) return 0;
            if (zero_ok && one_ok) continue;
            fix |= 1u << s;
            if (one_ok) val |= 1u << s;
        }
        const std::uint64_t key = std::uint64_t{fix} << 16 | val;
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        std::uint64_t n = 0;
        for (auto t : tables_)
            if ((t & fix) == val) ++n;
        cache_.emplace(key, n);
        return n;
    }

    std::uint64_t count(const Constraint& k) {
        std::uint64_t n = 0;
        for (auto t1 : tables_)
            for (auto t2 : tables_) n += third_slot(k, t1, t2);
        return n;
    }

    /// Appends survivors in enumeration order until `limit` are listed.
    void list(const Constraint& k, ConstructionSign selector, std::size_t limit, std::vector<SignRule>& out) {
        const auto p = space_.polys_per_slot();
        for (std::uint64_t c1 = 0; c1 < p && out.size() < limit; ++c1) {
            for (std::uint64_t c2 = 0; c2 < p && out.size() < limit; ++c2) {
                if (third_slot(k, tables_[c1], tables_[c2]) == 0) continue;
                for (std::uint64_t c3 = 0; c3 < p && out.size() < limit; ++c3) {
                    bool ok = true;
                    for (unsigned s = 0; s < kAssignments && ok; ++s) {
                        const unsigned pat = bit(tables_[c1], s) | bit(tables_[c2], s) << 1 | bit(tables_[c3], s) << 2;
                        ok = bit(k.allowed[s], pat);
                    }
                    if (ok) out.push_back({selector, {space_.poly(c1), space_.poly(c2), space_.poly(c3)}});
                }
            }
        }
    }

    const std::vector<std::uint16_t>& tables() const { return tables_; }

private:
    const RuleSpace& space_;
    std::vector<std::uint16_t> tables_;
    std::unordered_map<std::uint64_t, std::uint64_t> cache_;
};

}  // namespace

SearchReport search_on(int degree_bound, const std::vector<lab::Inputs>& triples, const AlgebraParams& params,
                       const SearchOptions& options) {
    const RuleSpace space(degree_bound);
    SearchReport report;
    report.degree_bound = degree_bound;
    report.trials = triples.size();
    report.params = params;
    report.params.ring = sign::Ring::Z;
    report.enumerated = space.size();
    SurvivorCounter counter(space);

    for (auto selector : selectors()) {
        const auto p = with_selector(params, selector);
        Constraint k;
        // first_cut[s][pattern] = index into report.eliminations
        std::array<std::array<int, 8>, kAssignments> first_cut;
        for (auto& row : first_cut) row.fill(-1);
        const std::size_t events_begin = report.eliminations.size();
        for (std::size_t t = 0; t < triples.size(); ++t) {
            const auto terms = jacobi_terms(triples[t], p);
            const auto mask = zero_patterns(terms);
            const auto s = terms.assignment;
            const std::uint8_t cut = k.allowed[s] & static_cast<std::uint8_t>(~mask);
            for (unsigned pat = 0; pat < 8; ++pat) {
                if (!bit(cut, pat)) continue;
                first_cut[s][pat] = static_cast<int>(report.eliminations.size());
                report.eliminations.push_back({selector, t, s, pat, signed_sum(terms, pat), std::nullopt});
            }
            k.allowed[s] &= mask;
        }
        report.survivors_per_selector.push_back(counter.count(k));
        if (report.survivors.size() < options.list_limit)
            counter.list(k, selector, options.list_limit, report.survivors);

        if (degree_bound == 1) {
            for (std::size_t e = events_begin; e < report.eliminations.size(); ++e)
                report.eliminations[e].rules_eliminated = 0;
            const auto& tables = counter.tables();
            for (auto t1 : tables)
                for (auto t2 : tables)
                    for (auto t3 : tables) {
                        int best = -1;
                        for (unsigned s = 0; s < kAssignments; ++s) {
                            const unsigned pat = bit(t1, s) | bit(t2, s) << 1 | bit(t3, s) << 2;
                            const int e = first_cut[s][pat];
                            if (e >= 0 && (best < 0 || report.eliminations[static_cast<std::size_t>(e)].trial <
                                                           report.eliminations[static_cast<std::size_t>(best)].trial))
                                best = e;
                        }
                        if (best >= 0) ++*report.eliminations[static_cast<std::size_t>(best)].rules_eliminated;
                    }
        }
    }
    report.survivors_truncated = report.survivor_count() > report.survivors.size();
    return report;
}

SearchReport search(int degree_bound, std::size_t trials, std::uint64_t seed, const AlgebraParams& params,
                    const SearchOptions& options) {
    monomial_basis(degree_bound);
    auto report = search_on(degree_bound, sample_triples(trials, seed, params), params, options);
    report.seed = seed;
    return report;
}

lab::TrialReport mod2_shadow(const SignRule& rule, std::size_t trials, std::uint64_t seed,
                             const AlgebraParams& params) {
    AlgebraParams p = params;
    p.ring = sign::Ring::Z2;
    p.sign_rule = rule.selector;
    return lab::check(lab::Identity::JacobiMod2, trials, seed, p);
}

}  // namespace garland::signs
