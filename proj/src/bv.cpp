#include "garland/bv.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

namespace garland::bv {

using sign::ParityPoly;

const std::vector<std::string>& parity_names() {
    static const std::vector<std::string> names{"a", "b", "c", "n"};
    return names;
}

Atom Atom::gen(int index) {
    Atom a;
    a.generator = index;
    return a;
}

Atom Atom::delta(std::vector<Atom> word) {
    Atom a;
    a.argument = std::move(word);
    return a;
}

int Atom::depth() const {
    if (!is_delta()) return 0;
    return 1 + word_depth(argument);
}

bool operator==(const Atom& x, const Atom& y) { return x.generator == y.generator && x.argument == y.argument; }

bool operator<(const Atom& x, const Atom& y) {
    // Generators first, by index; then Δ-atoms by argument.
    if (x.is_delta() != y.is_delta()) return !x.is_delta();
    if (!x.is_delta()) return x.generator < y.generator;
    return std::lexicographical_compare(x.argument.begin(), x.argument.end(), y.argument.begin(), y.argument.end());
}

ParityPoly atom_parity(const Atom& atom) {
    if (!atom.is_delta()) return ParityPoly::variable(static_cast<std::size_t>(atom.generator));
    return word_parity(atom.argument) + ParityPoly::variable(kVarN);
}

ParityPoly word_parity(const AtomList& atoms) {
    ParityPoly p;
    for (const auto& a : atoms) p += atom_parity(a);
    return p;
}

int evaluate_parity(const AtomList& atoms, std::uint64_t assignment) {
    return word_parity(atoms).evaluate(assignment) ? 1 : 0;
}

Word canonicalize_word(const AtomList& presentation, bool collapse_delta_squared) {
    Word out;
    AtomList atoms;
    atoms.reserve(presentation.size());
    for (const auto& a : presentation) {
        if (!a.is_delta()) {
            atoms.push_back(a);
            continue;
        }
        auto inner = canonicalize_word(a.argument, collapse_delta_squared);
        if (inner.zero) return Word{{}, {}, true};
        if (collapse_delta_squared && inner.atoms.size() == 1 && inner.atoms[0].is_delta()) return Word{{}, {}, true};
        out.exponent += inner.exponent;
        atoms.push_back(Atom::delta(std::move(inner.atoms)));
    }
    std::vector<std::size_t> order(atoms.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return atoms[i] < atoms[j]; });
    std::vector<ParityPoly> parities;
    parities.reserve(atoms.size());
    for (const auto& a : atoms) parities.push_back(atom_parity(a));
    out.exponent += sign::koszul_sign(order, parities);
    for (auto i : order) out.atoms.push_back(atoms[i]);
    return out;
}

bool vanishes_at(const AtomList& canonical, std::uint64_t assignment) {
    for (std::size_t i = 0; i < canonical.size(); ++i) {
        const auto& a = canonical[i];
        if (a.is_delta() && vanishes_at(a.argument, assignment)) return true;
        if (i + 1 < canonical.size() && canonical[i + 1] == a && atom_parity(a).evaluate(assignment)) return true;
    }
    return false;
}

bool contains_delta_squared(const AtomList& atoms) {
    for (const auto& a : atoms) {
        if (!a.is_delta()) continue;
        if (a.argument.size() == 1 && a.argument[0].is_delta()) return true;
        if (contains_delta_squared(a.argument)) return true;
    }
    return false;
}

int word_depth(const AtomList& atoms) {
    int d = 0;
    for (const auto& a : atoms) d = std::max(d, a.depth());
    return d;
}

std::string to_string(const AtomList& atoms) {
    if (atoms.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (i) s += "*";
        const auto& a = atoms[i];
        if (a.is_delta())
            s += "D(" + to_string(a.argument) + ")";
        else
            s += parity_names()[static_cast<std::size_t>(a.generator)];
    }
    return s;
}

std::string to_string(const ExprSum& e) {
    if (e.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [w, c] : e.terms) {
        const bool negative = c < 0;
        const Rational mag = negative ? Rational(-c) : c;
        if (first)
            s += negative ? "-" : "";
        else
            s += negative ? " - " : " + ";
        first = false;
        if (mag != 1) s += mag.str() + "*";
        s += to_string(w);
    }
    return s;
}

namespace {

void accumulate(ExprSum& e, const AtomList& w, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = e.terms.emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) e.terms.erase(it);
    }
}

}  // namespace

ExprSum Algebra::word(const AtomList& presentation, Rational coefficient) const {
    ExprSum out;
    auto w = canonicalize_word(presentation, collapse_);
    if (w.zero || vanishes_at(w.atoms, assignment_)) return out;
    if (w.exponent.evaluate(assignment_)) coefficient = -coefficient;
    accumulate(out, w.atoms, coefficient);
    return out;
}

ExprSum Algebra::add(const ExprSum& x, const ExprSum& y) const {
    ExprSum out = x;
    for (const auto& [w, c] : y.terms) accumulate(out, w, c);
    return out;
}

ExprSum Algebra::scale(const ExprSum& x, const Rational& c) const {
    ExprSum out;
    if (c == 0) return out;
    for (const auto& [w, d] : x.terms) out.terms.emplace(w, d * c);
    return out;
}

ExprSum Algebra::mul(const ExprSum& x, const ExprSum& y) const {
    ExprSum out;
    for (const auto& [wx, cx] : x.terms) {
        for (const auto& [wy, cy] : y.terms) {
            AtomList p = wx;
            p.insert(p.end(), wy.begin(), wy.end());
            for (const auto& [w, c] : word(p, cx * cy).terms) accumulate(out, w, c);
        }
    }
    return out;
}

ExprSum Algebra::delta(const ExprSum& x) const {
    ExprSum out;
    for (const auto& [w, c] : x.terms)
        for (const auto& [dw, dc] : word({Atom::delta(w)}, c).terms) accumulate(out, dw, dc);
    return out;
}

int Algebra::parity(const ExprSum& x) const {
    if (x.is_zero()) throw std::invalid_argument("parity of the zero sum");
    const int p = parity(x.terms.begin()->first);
    for (const auto& [w, c] : x.terms)
        if (parity(w) != p) throw std::invalid_argument("inhomogeneous sum");
    return p;
}

ExprSum Algebra::instantiate_bv(const AtomList& x, const AtomList& y, const AtomList& z) const {
    const auto X = word(x), Y = word(y), Z = word(z);
    const int a = parity(x), b = parity(y), nn = n();
    ExprSum rhs = mul(delta(mul(X, Y)), Z);
    rhs = add(rhs, scale(mul(X, delta(mul(Y, Z))), sign(a * nn)));
    rhs = add(rhs, scale(mul(Y, delta(mul(X, Z))), sign((a + nn) * b)));
    rhs = sub(rhs, mul(mul(delta(X), Y), Z));
    rhs = sub(rhs, scale(mul(mul(X, delta(Y)), Z), sign(a * nn)));
    rhs = sub(rhs, scale(mul(mul(X, Y), delta(Z)), sign(nn * (a + b))));
    return sub(delta(mul(mul(X, Y), Z)), rhs);
}

ExprSum Algebra::gerstenhaber_bracket(const ExprSum& x, const ExprSum& y) const {
    if (x.is_zero() || y.is_zero()) return {};
    const int s = sign(parity(x) * n());
    ExprSum out = scale(delta(mul(x, y)), s);
    out = sub(out, scale(mul(delta(x), y), s));
    return sub(out, mul(x, delta(y)));
}

MembershipResult check_membership(const ExprSum& target, const std::vector<Relation>& relations) {
    MembershipResult result;
    if (target.is_zero()) {
        result.member = true;
        return result;
    }
    const Algebra scratch(0);
    for (std::size_t i = 0; i < relations.size(); ++i) {
        const auto& r = relations[i].sum;
        if (r.is_zero()) continue;
        const auto& [w0, c0] = *r.terms.begin();
        auto it = target.terms.find(w0);
        if (it == target.terms.end()) continue;
        const Rational lambda = it->second / c0;
        if (scratch.scale(r, lambda) == target) {
            result.member = true;
            result.certificate.push_back({i, lambda});
            return result;
        }
    }

    struct Row {
        AtomList pivot;
        ExprSum v;
        std::map<std::size_t, Rational> combo;
    };
    std::vector<Row> rows;
    auto eliminate = [&](ExprSum& v, std::map<std::size_t, Rational>& combo) {
        for (const auto& row : rows) {
            auto it = v.terms.find(row.pivot);
            if (it == v.terms.end()) continue;
            const Rational f = it->second;
            v = scratch.sub(v, scratch.scale(row.v, f));
            for (const auto& [j, c] : row.combo) {
                auto& slot = combo[j];
                slot -= f * c;
                if (slot == 0) combo.erase(j);
            }
        }
    };
    for (std::size_t i = 0; i < relations.size(); ++i) {
        Row row{{}, relations[i].sum, {{i, Rational(1)}}};
        eliminate(row.v, row.combo);
        if (row.v.is_zero()) continue;
        row.pivot = row.v.terms.rbegin()->first;
        const Rational inv = 1 / row.v.terms.rbegin()->second;
        row.v = scratch.scale(row.v, inv);
        for (auto& [j, c] : row.combo) c *= inv;
        rows.push_back(std::move(row));
    }
    ExprSum t = target;
    std::map<std::size_t, Rational> combo;
    eliminate(t, combo);
    if (!t.is_zero()) {
        result.residual = std::move(t);
        return result;
    }
    // eliminate() tracked −Σ; flip to express target = Σ c_i r_i.
    result.member = true;
    for (const auto& [j, c] : combo) result.certificate.push_back({j, -c});
    return result;
}

ExprSum replay(const ExprSum& target, const std::vector<Relation>& relations,
               const std::vector<std::pair<std::size_t, Rational>>& certificate) {
    const Algebra scratch(0);
    ExprSum r = target;
    for (const auto& [i, c] : certificate) r = scratch.sub(r, scratch.scale(relations.at(i).sum, c));
    return r;
}

std::string to_string(Law law) {
    switch (law) {
        case Law::GradedSymmetry: return "graded-symmetry";
        case Law::Jacobi: return "jacobi";
        case Law::Derivation: return "derivation";
        case Law::Leibniz: return "leibniz";
    }
    return "?";
}

const std::vector<Law>& all_laws() {
    static const std::vector<Law> laws{Law::GradedSymmetry, Law::Jacobi, Law::Derivation, Law::Leibniz};
    return laws;
}

std::size_t Prop51Report::members() const {
    return static_cast<std::size_t>(std::count_if(results.begin(), results.end(), [](const auto& r) { return r.member; }));
}

ExprSum law_target(Law law, const Algebra& alg) {
    const auto A = alg.generator(0), B = alg.generator(1), C = alg.generator(2);
    const int a = alg.parity(A), b = alg.parity(B), n = alg.n();
    auto br = [&](const ExprSum& x, const ExprSum& y) { return alg.gerstenhaber_bracket(x, y); };
    switch (law) {
        case Law::GradedSymmetry:
            return alg.sub(br(A, B), alg.scale(br(B, A), alg.sign(n + (a + n) * (b + n))));
        case Law::Jacobi: {
            ExprSum rhs = alg.add(br(br(A, B), C), alg.scale(br(B, br(A, C)), alg.sign((a + n) * (b + n))));
            return alg.sub(br(A, br(B, C)), rhs);
        }
        case Law::Derivation: {
            ExprSum rhs = alg.add(alg.mul(br(A, B), C), alg.scale(alg.mul(B, br(A, C)), alg.sign((a + n) * b)));
            return alg.sub(br(A, alg.mul(B, C)), rhs);
        }
        case Law::Leibniz: {
            ExprSum inner = alg.add(br(alg.delta(A), B), alg.scale(br(A, alg.delta(B)), alg.sign(a * n + 1)));
            return alg.sub(alg.delta(br(A, B)), alg.scale(inner, alg.sign(n + 1)));
        }
    }
    return {};
}

namespace {

unsigned content_mask(const AtomList& w) {
    unsigned m = 0;
    for (const auto& a : w) m |= a.is_delta() ? content_mask(a.argument) : 1u << a.generator;
    return m;
}

unsigned content_mask(const ExprSum& e) { return e.is_zero() ? 0 : content_mask(e.terms.begin()->first); }

int depth(const ExprSum& e) {
    int d = 0;
    for (const auto& [w, c] : e.terms) d = std::max(d, word_depth(w));
    return d;
}

}  // namespace

std::vector<Relation> relation_set(const Algebra& alg, const VerifyOptions& options,
                                   const std::vector<ExprSum>& targets) {
    unsigned wanted = 0;
    for (const auto& t : targets) {
        if (depth(t) > options.word_bound)
            throw WordBoundExceeded("target needs Δ-depth " + std::to_string(depth(t)) + " > bound " +
                                    std::to_string(options.word_bound));
        wanted |= 1u << content_mask(t);
    }
    std::vector<Relation> out;
    if (options.use_bv_relation && (wanted & (1u << 0b111))) {
        // Each argument carries one generator, bare or under Δ.
        for (unsigned forms = 0; forms < 8; ++forms) {
            AtomList args[3];
            std::string names[3];
            for (int g = 0; g < kGenerators; ++g) {
                const bool d = forms >> g & 1;
                args[g] = d ? AtomList{Atom::delta({Atom::gen(g)})} : AtomList{Atom::gen(g)};
                names[g] = to_string(args[g]);
            }
            const std::string label = "R(" + names[0] + "," + names[1] + "," + names[2] + ")";
            auto r = alg.instantiate_bv(args[0], args[1], args[2]);
            if (!r.is_zero() && depth(r) <= options.word_bound) out.push_back({label, r});
            auto dr = alg.delta(r);
            if (!dr.is_zero() && depth(dr) <= options.word_bound) out.push_back({"D " + label, dr});
        }
    }
    if (options.use_delta_squared) {
        std::set<AtomList> words;
        for (const auto& t : targets)
            for (const auto& [w, c] : t.terms) words.insert(w);
        for (const auto& r : out)
            for (const auto& [w, c] : r.sum.terms) words.insert(w);
        for (const auto& w : words)
            if (contains_delta_squared(w)) out.push_back({"DD=0 " + to_string(w), alg.word(w)});
    }
    return out;
}

LawResult verify_law(Law law, std::uint64_t assignment, const VerifyOptions& options) {
    const Algebra alg(assignment, false);
    LawResult res;
    res.assignment = assignment;
    res.law = law;
    res.target = law_target(law, alg);
    auto relations = relation_set(alg, options, {res.target});
    if (options.shuffle_seed) {
        std::mt19937_64 rng(*options.shuffle_seed ^ (assignment * 0x9e3779b97f4a7c15ULL));
        for (std::size_t i = relations.size(); i > 1; --i) std::swap(relations[i - 1], relations[rng() % i]);
    }
    res.relations_available = relations.size();
    auto m = check_membership(res.target, relations);
    res.member = m.member;
    res.residual = m.residual;
    for (const auto& [i, c] : m.certificate) {
        res.certificate.push_back(relations[i]);
        res.coefficients.push_back(c);
    }
    return res;
}

Prop51Report verify_prop51(const VerifyOptions& options) {
    Prop51Report report;
    report.options = options;
    for (std::uint64_t assignment = 0; assignment < 16; ++assignment)
        for (auto law : all_laws()) report.results.push_back(verify_law(law, assignment, options));
    return report;
}

std::string assignment_string(std::uint64_t assignment) {
    std::string s;
    for (std::size_t v = 0; v < 4; ++v) {
        if (v) s += " ";
        s += (v < 3 ? "|" + parity_names()[v] + "|" : parity_names()[v]) + "=" + std::to_string(assignment >> v & 1);
    }
    return s;
}

}  // namespace garland::bv
