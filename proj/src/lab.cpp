#include "garland/lab.hpp"

#include <algorithm>
#include <functional>

namespace garland::lab {

using calc::AlgebraParams;
using calc::Element;

std::uint64_t Rng::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t bound) {
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do x = next();
    while (x >= limit);
    return x % bound;
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t index) {
    // FNV-1a over the tag, mixed with the master seed and index.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : tag) h = (h ^ ch) * 0x100000001b3ULL;
    Rng r(master ^ h);
    r.next();
    Rng s(r.next() ^ (index * 0xd1342543de82ef95ULL));
    return s.next();
}

std::string to_string(Family f) {
    switch (f) {
        case Family::General: return "general";
        case Family::OneGradingOne: return "one-grading-1";
        case Family::LiftImage: return "lift-image";
    }
    return "?";
}

Family family_from_string(const std::string& name) {
    if (name == "general") return Family::General;
    if (name == "one-grading-1" || name == "one-grading-1-mark" || name == "restricted") return Family::OneGradingOne;
    if (name == "lift-image") return Family::LiftImage;
    throw std::invalid_argument("unknown family '" + name + "'");
}

calc::BaseGenerator random_generator(std::uint64_t seed, const Bounds& bounds, Family family, std::string name) {
    Rng rng(seed);
    calc::BaseGenerator gen;
    gen.name = std::move(name);
    const auto k = static_cast<std::uint32_t>(rng.below(bounds.max_copies + 1ULL));
    if (k == 0) {
        gen.shape = GarlandShape{0, {Mark{1, {}}}};
        gen.degree = rng.between(bounds.min_degree, bounds.max_degree);
        return gen;
    }
    const std::uint32_t max_grading = std::max<std::uint32_t>(bounds.max_grading, 1);
    const auto l = 1 + static_cast<std::uint32_t>(rng.below(std::max<std::uint32_t>(bounds.max_marks, 1)));
    GarlandShape s{k, {}};
    std::vector<std::uint32_t> next_label(k, 0);
    for (std::uint32_t i = 0; i < l; ++i) {
        Mark m{1 + static_cast<std::uint32_t>(rng.below(max_grading)), {}};
        const auto np = rng.below(bounds.max_points + 1ULL);
        for (std::uint64_t j = 0; j < np; ++j) {
            const auto c = static_cast<std::uint32_t>(rng.below(k));
            std::uint32_t label;
            if (next_label[c] > 0 && rng.below(6) == 0)
                label = static_cast<std::uint32_t>(rng.below(next_label[c]));
            else
                label = next_label[c]++;
            m.points.push_back({c, label});
        }
        s.marks.push_back(std::move(m));
    }
    const auto pinned = static_cast<std::size_t>(rng.below(l));
    s.marks[pinned].grading = 1;
    if (family == Family::OneGradingOne) {
        if (max_grading < 2) {
            s.marks = {s.marks[pinned]};
        } else {
            for (std::size_t i = 0; i < s.marks.size(); ++i)
                if (i != pinned && s.marks[i].grading == 1)
                    s.marks[i].grading = 2 + static_cast<std::uint32_t>(rng.below(max_grading - 1));
        }
    }
    gen.degree = rng.between(bounds.min_degree, bounds.max_degree);
    gen.shape = canonicalize(s);
    return gen;
}

Element slot_element(const SlotInput& slot, Family family, const AlgebraParams& params) {
    Element e(params);
    for (const auto& t : slot.terms) e = add(e, calc::from_generator(t.generator, params, t.coefficient));
    return family == Family::LiftImage ? calc::lift(e) : e;
}

Inputs random_inputs(std::uint64_t seed, std::size_t slots, const Bounds& bounds, Family family,
                     const AlgebraParams& params) {
    Rng rng(seed);
    Inputs in;
    in.family = family;
    const Family base = family == Family::LiftImage ? Family::General : family;
    for (std::size_t s = 0; s < slots; ++s) {
        SlotInput slot;
        const auto count = 1 + rng.below(std::max<std::uint32_t>(bounds.max_terms, 1));
        for (std::uint64_t j = 0; j < count; ++j) {
            WeightedGenerator w;
            w.coefficient = params.ring == sign::Ring::Z ? static_cast<std::int64_t>(1 + rng.below(2)) : 1;
            const std::string name = std::string(1, static_cast<char>('a' + s)) + std::to_string(j);
            w.generator = random_generator(rng.next(), bounds, base, name);
            slot.terms.push_back(std::move(w));
        }
        in.slots.push_back(std::move(slot));
    }
    return in;
}

namespace {

struct IdentityInfo {
    Identity id;
    const char* name;
    std::size_t arity;
};

constexpr IdentityInfo kIdentities[] = {
    {Identity::Comm, "comm", 2},           {Identity::Assoc, "assoc", 3},
    {Identity::Distrib, "distrib", 3},     {Identity::UnitLaw, "unit-law", 1},
    {Identity::AntisymMod2, "antisym-mod2", 2}, {Identity::JacobiMod2, "jacobi-mod2", 3},
    {Identity::Bilinear, "bilinear", 3},   {Identity::Prop42, "prop42", 2},
    {Identity::Prop43, "prop43", 1},       {Identity::DeltaSq, "delta-sq", 1},
    {Identity::BvProbe, "bv-probe", 3},
};

const IdentityInfo& info(Identity id) {
    for (const auto& i : kIdentities)
        if (i.id == id) return i;
    throw UnknownIdentity("unknown identity");
}

Element single(const calc::TermKey& key, std::int64_t coefficient, const AlgebraParams& params) {
    Element e(params);
    e.accumulate(key, coefficient);
    return e;
}

int parity(std::int64_t degree) { return static_cast<int>(degree & 1); }

std::int64_t sign_of(int exponent) { return exponent % 2 ? -1 : 1; }

/// Sum of f over every choice of one term per slot. f receives
/// single-term elements and their degrees; used for identities whose
/// signs depend on term degrees.
Element termwise(const std::vector<Element>& slots,
                 const std::function<Element(const std::vector<Element>&, const std::vector<std::int64_t>&)>& f,
                 const AlgebraParams& params) {
    Element total(params);
    std::vector<Element> chosen;
    std::vector<std::int64_t> degrees;
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == slots.size()) {
            total = add(total, f(chosen, degrees));
            return;
        }
        for (const auto& [key, c] : slots[i].terms()) {
            chosen.push_back(single(key, c, params));
            degrees.push_back(key.degree);
            self(self, i + 1);
            chosen.pop_back();
            degrees.pop_back();
        }
    };
    rec(rec, 0);
    return total;
}

Evaluation compare(std::string part, Element left, Element right) {
    Evaluation ev{left == right, std::move(part), std::move(left), std::move(right)};
    return ev;
}

Evaluation first_failing(std::vector<Evaluation> parts) {
    for (auto& p : parts)
        if (!p.holds) return std::move(p);
    return std::move(parts.front());
}

}  // namespace

std::string to_string(Identity id) { return info(id).name; }

Identity identity_from_string(const std::string& name) {
    for (const auto& i : kIdentities)
        if (name == i.name) return i.id;
    throw UnknownIdentity("unknown identity '" + name + "'");
}

const std::vector<Identity>& all_identities() {
    static const std::vector<Identity> ids = [] {
        std::vector<Identity> v;
        for (const auto& i : kIdentities) v.push_back(i.id);
        return v;
    }();
    return ids;
}

std::size_t arity(Identity id) { return info(id).arity; }

bool claimed(Identity id, const AlgebraParams& params) {
    switch (id) {
        case Identity::BvProbe: return false;
        case Identity::Prop43:
        case Identity::DeltaSq: return params.p_is_boundary;
        default: return true;
    }
}

AlgebraParams effective_params(Identity id, const AlgebraParams& params) {
    AlgebraParams p = params;
    if (id == Identity::AntisymMod2 || id == Identity::JacobiMod2) p.ring = sign::Ring::Z2;
    return p;
}

Evaluation evaluate(Identity id, const Inputs& inputs, const AlgebraParams& requested) {
    const AlgebraParams params = effective_params(id, requested);
    if (inputs.slots.size() != arity(id))
        throw std::invalid_argument("identity " + to_string(id) + " takes " + std::to_string(arity(id)) + " inputs");
    std::vector<Element> x;
    for (const auto& s : inputs.slots) x.push_back(slot_element(s, inputs.family, params));
    const int n = params.n;
    switch (id) {
        case Identity::Comm: {
            auto right = termwise(
                {x[0], x[1]},
                [&](const auto& t, const auto& d) {
                    return scale(product(t[1], t[0]), sign_of(parity(d[0]) * parity(d[1])));
                },
                params);
            return compare("product", product(x[0], x[1]), std::move(right));
        }
        case Identity::Assoc: return compare("product", product(product(x[0], x[1]), x[2]), product(x[0], product(x[1], x[2])));
        case Identity::Distrib:
            return first_failing({
                compare("left", product(x[0], add(x[1], x[2])), add(product(x[0], x[1]), product(x[0], x[2]))),
                compare("right", product(add(x[0], x[1]), x[2]), add(product(x[0], x[2]), product(x[1], x[2]))),
            });
        case Identity::UnitLaw: {
            const auto u = calc::unit(params);
            return first_failing({compare("left", product(u, x[0]), x[0]), compare("right", product(x[0], u), x[0])});
        }
        case Identity::AntisymMod2: return compare("bracket", bracket(x[0], x[1]), bracket(x[1], x[0]));
        case Identity::JacobiMod2: {
            auto sum = add(add(bracket(bracket(x[0], x[1]), x[2]), bracket(bracket(x[1], x[2]), x[0])),
                           bracket(bracket(x[2], x[0]), x[1]));
            return compare("cyclic-sum", std::move(sum), Element(params));
        }
        case Identity::Bilinear:
            return first_failing({
                compare("bracket-left", bracket(add(x[0], x[1]), x[2]), add(bracket(x[0], x[2]), bracket(x[1], x[2]))),
                compare("bracket-right", bracket(x[0], add(x[1], x[2])), add(bracket(x[0], x[1]), bracket(x[0], x[2]))),
                compare("bracket-scalar", bracket(scale(x[0], 2), x[1]), scale(bracket(x[0], x[1]), 2)),
                compare("lift", calc::lift(add(x[0], x[1])), add(calc::lift(x[0]), calc::lift(x[1]))),
                compare("proj", calc::proj(add(x[0], x[1])), add(calc::proj(x[0]), calc::proj(x[1]))),
                compare("delta", calc::delta(add(x[0], x[1])), add(calc::delta(x[0]), calc::delta(x[1]))),
            });
        case Identity::Prop42:
            return compare("bracket", calc::proj(product(calc::lift(x[0]), calc::lift(x[1]))), bracket(x[0], x[1]));
        case Identity::Prop43: return compare("proj-lift", calc::proj(calc::lift(x[0])), Element(params));
        case Identity::DeltaSq: return compare("delta-delta", calc::delta(calc::delta(x[0])), Element(params));
        case Identity::BvProbe: {
            // Seven-term relation: Δ(abc) against its six-term expansion.
            auto left = calc::delta(product(product(x[0], x[1]), x[2]));
            auto right = termwise(
                {x[0], x[1], x[2]},
                [&](const auto& t, const auto& d) {
                    const int a = parity(d[0]), b = parity(d[1]), nn = n & 1;
                    const auto& A = t[0];
                    const auto& B = t[1];
                    const auto& C = t[2];
                    Element r(params);
                    r = add(r, product(calc::delta(product(A, B)), C));
                    r = add(r, scale(product(A, calc::delta(product(B, C))), sign_of(a * nn)));
                    r = add(r, scale(product(B, calc::delta(product(A, C))), sign_of((a + nn) * b)));
                    r = subtract(r, product(product(calc::delta(A), B), C));
                    r = subtract(r, scale(product(product(A, calc::delta(B)), C), sign_of(a * nn)));
                    r = subtract(r, scale(product(product(A, B), calc::delta(C)), sign_of(nn * (a + b))));
                    return r;
                },
                params);
            return compare("seven-term", std::move(left), std::move(right));
        }
    }
    throw UnknownIdentity("unknown identity");
}

namespace {

bool fails(Identity id, const Inputs& in, const AlgebraParams& params) { return !evaluate(id, in, params).holds; }

std::vector<Inputs> shrink_candidates(const Inputs& in) {
    std::vector<Inputs> out;
    for (std::size_t s = 0; s < in.slots.size(); ++s) {
        const auto& terms = in.slots[s].terms;
        for (std::size_t j = 0; j < terms.size(); ++j) {
            if (terms.size() > 1) {
                Inputs c = in;
                c.slots[s].terms.erase(c.slots[s].terms.begin() + static_cast<std::ptrdiff_t>(j));
                out.push_back(std::move(c));
            }
            const auto& g = terms[j].generator;
            auto with_shape = [&](GarlandShape shape) {
                Inputs c = in;
                c.slots[s].terms[j].generator.shape = canonicalize(shape);
                out.push_back(std::move(c));
            };
            const auto& shape = g.shape;
            if (shape.copies >= 2) {
                for (std::uint32_t drop = 0; drop < shape.copies; ++drop) {
                    GarlandShape t{shape.copies - 1, {}};
                    for (const auto& m : shape.marks) {
                        Mark mm{m.grading, {}};
                        for (const auto& p : m.points)
                            if (p.copy != drop) mm.points.push_back({p.copy > drop ? p.copy - 1 : p.copy, p.label});
                        t.marks.push_back(std::move(mm));
                    }
                    with_shape(std::move(t));
                }
            }
            if (shape.copies > 0) {
                for (std::size_t i = 0; i < shape.marks.size(); ++i) {
                    GarlandShape t = shape;
                    t.marks.erase(t.marks.begin() + static_cast<std::ptrdiff_t>(i));
                    with_shape(std::move(t));
                }
                for (std::size_t i = 0; i < shape.marks.size(); ++i) {
                    for (std::size_t p = 0; p < shape.marks[i].points.size(); ++p) {
                        GarlandShape t = shape;
                        t.marks[i].points.erase(t.marks[i].points.begin() + static_cast<std::ptrdiff_t>(p));
                        with_shape(std::move(t));
                    }
                }
            }
            if (g.degree != 0) {
                Inputs c = in;
                c.slots[s].terms[j].generator.degree = 0;
                out.push_back(std::move(c));
            }
            if (terms[j].coefficient != 1) {
                Inputs c = in;
                c.slots[s].terms[j].coefficient = 1;
                out.push_back(std::move(c));
            }
        }
    }
    return out;
}

}  // namespace

Inputs minimize(Identity id, const Inputs& failing, const AlgebraParams& params) {
    if (!fails(id, failing, params)) throw NotACounterexample("input does not fail " + to_string(id));
    Inputs current = failing;
    bool progress = true;
    while (progress) {
        progress = false;
        for (auto& candidate : shrink_candidates(current)) {
            if (fails(id, candidate, params)) {
                current = std::move(candidate);
                progress = true;
                break;
            }
        }
    }
    return current;
}

std::string TrialReport::verdict() const {
    const bool all = passes == trials;
    if (identity == Identity::BvProbe) return all ? "HOLDS" : "FAILS";
    if (!claimed) return "NO-CLAIM";
    return all ? "PASS" : "DIVERGES-FROM-PAPER";
}

TrialReport check(Identity id, std::size_t trials, std::uint64_t seed, const AlgebraParams& params, Family family,
                  const Bounds& bounds) {
    TrialReport report;
    report.identity = id;
    report.family = family;
    report.seed = seed;
    report.params = params;
    report.effective = effective_params(id, params);
    report.bounds = bounds;
    report.trials = trials;
    report.claimed = claimed(id, params);
    const auto name = to_string(id);
    for (std::size_t t = 0; t < trials; ++t) {
        const auto trial_seed = derive_seed(seed, name, t);
        auto inputs = random_inputs(trial_seed, arity(id), bounds, family, report.effective);
        bool m_component = false;
        for (const auto& s : inputs.slots)
            for (const auto& g : s.terms) m_component = m_component || g.generator.shape.copies == 0;
        if (m_component) ++report.m_component_trials;
        auto ev = evaluate(id, inputs, report.effective);
        if (ev.holds) {
            ++report.passes;
        } else if (!report.first_failure) {
            Failure f;
            f.trial = t;
            f.trial_seed = trial_seed;
            f.inputs = inputs;
            f.evaluation = std::move(ev);
            f.minimized = minimize(id, inputs, report.effective);
            f.minimized_evaluation = evaluate(id, f.minimized, report.effective);
            report.first_failure = std::move(f);
        }
    }
    return report;
}

std::size_t grading_one_marks(const SlotInput& slot) {
    std::size_t most = 0;
    for (const auto& t : slot.terms) most = std::max<std::size_t>(most, grading_one_count(t.generator.shape));
    return most;
}

}  // namespace garland::lab
