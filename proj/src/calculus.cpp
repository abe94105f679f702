#include "garland/calculus.hpp"

#include <algorithm>

namespace garland::calc {

std::string to_string(ConstructionSign rule) { return rule == ConstructionSign::Zero ? "zero" : "koszul"; }

ConstructionSign construction_sign_from_string(const std::string& name) {
    if (name == "zero" || name == "default") return ConstructionSign::Zero;
    if (name == "koszul") return ConstructionSign::KoszulOrder;
    throw std::invalid_argument("unknown sign rule '" + name + "'");
}

TermKey make_key(std::int64_t degree, const GarlandShape& shape, std::vector<std::string> provenance,
                 std::span<const std::uint8_t> fresh) {
    TermKey key;
    key.degree = degree;
    std::sort(provenance.begin(), provenance.end());
    key.provenance = std::move(provenance);
    const bool any_fresh = std::any_of(fresh.begin(), fresh.end(), [](auto f) { return f != 0; });
    if (any_fresh) {
        auto c = canonicalize(shape, fresh);
        key.shape = std::move(c.shape);
        key.fresh = std::move(c.mark_colors);
    } else {
        key.shape = canonicalize(shape);
        key.fresh.assign(key.shape.marks.size(), 0);
    }
    return key;
}

bool DecoratedTerm::has_fresh_mark() const {
    return std::any_of(key.fresh.begin(), key.fresh.end(), [](auto f) { return f != 0; });
}

namespace {

std::int64_t reduce(std::int64_t c, sign::Ring ring) {
    if (ring == sign::Ring::Z2) return ((c % 2) + 2) % 2;
    return c;
}

void require_same(const AlgebraParams& a, const AlgebraParams& b) {
    if (!(a == b)) throw ParamsMismatch("operands carry different algebra parameters");
}

std::vector<std::string> merged(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::string> out;
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::uint64_t parity_assignment(std::int64_t x, std::int64_t y, int n) {
    return static_cast<std::uint64_t>(x & 1) | static_cast<std::uint64_t>(y & 1) << 1 |
           static_cast<std::uint64_t>(n & 1) << 2;
}

std::int64_t signed_coefficient(std::int64_t magnitude, const sign::ParityPoly& exponent, std::uint64_t assignment,
                                sign::Ring ring) {
    sign::Coefficient c{ring, magnitude, exponent};
    return c.evaluate(assignment);
}

GarlandShape effective_shape(const GarlandShape& shape) {
    if (shape.copies > 0) return shape;
    GarlandShape s = shape;
    s.copies = 1;
    return s;
}

}  // namespace

std::vector<DecoratedTerm> Element::term_list() const {
    std::vector<DecoratedTerm> out;
    out.reserve(terms_.size());
    for (const auto& [k, c] : terms_) out.push_back({c, k});
    return out;
}

void Element::accumulate(const TermKey& key, std::int64_t coefficient) {
    coefficient = reduce(coefficient, params_.ring);
    if (coefficient == 0) return;
    auto [it, inserted] = terms_.try_emplace(key, 0);
    it->second = reduce(it->second + coefficient, params_.ring);
    if (it->second == 0) terms_.erase(it);
}

Element from_generator(const BaseGenerator& gen, const AlgebraParams& params, std::int64_t coefficient) {
    Element e(params);
    std::vector<std::string> prov;
    if (gen.name != "u") prov.push_back(gen.name);
    e.accumulate(make_key(gen.degree, gen.shape, std::move(prov)), coefficient);
    return e;
}

Element collect(const std::vector<DecoratedTerm>& terms, const AlgebraParams& params) {
    Element e(params);
    for (const auto& t : terms) e.accumulate(t.key, t.coefficient);
    return e;
}

bool is_unit_shape(const GarlandShape& shape) {
    return shape.copies == 0 && shape.marks.size() == 1 && shape.marks[0].grading == 1 &&
           shape.marks[0].points.empty();
}

Element unit(const AlgebraParams& params) {
    GarlandShape s{0, {Mark{1, {}}}};
    Element e(params);
    e.accumulate(make_key(0, s, {}), 1);
    return e;
}

Element add(const Element& a, const Element& b) {
    require_same(a.params(), b.params());
    Element out = a;
    for (const auto& [k, c] : b.terms()) out.accumulate(k, c);
    return out;
}

Element scale(const Element& a, std::int64_t factor) {
    Element out(a.params());
    for (const auto& [k, c] : a.terms()) out.accumulate(k, c * factor);
    return out;
}

Element subtract(const Element& a, const Element& b) { return add(a, scale(b, -1)); }

sign::ParityPoly product_sign_exponent(ConstructionSign rule, const std::vector<std::string>& left,
                                       const std::vector<std::string>& right) {
    if (rule == ConstructionSign::Zero || !(right < left)) return {};
    return sign::ParityPoly::variable(0) * sign::ParityPoly::variable(1);
}

sign::ParityPoly bracket_sign_exponent(ConstructionSign rule, const std::vector<std::string>& left,
                                       const std::vector<std::string>& right) {
    if (rule == ConstructionSign::Zero || !(right < left)) return {};
    const auto n = sign::ParityPoly::variable(2);
    return (sign::ParityPoly::variable(0) + n) * (sign::ParityPoly::variable(1) + n);
}

std::vector<DecoratedTerm> expand_product(const DecoratedTerm& a, const DecoratedTerm& b,
                                          const AlgebraParams& params) {
    std::vector<DecoratedTerm> out;
    const auto u = disjoint_union(a.key.shape, b.key.shape);
    const std::size_t na = a.key.shape.marks.size();
    const auto provenance = merged(a.key.provenance, b.key.provenance);
    const auto exponent = product_sign_exponent(params.sign_rule, a.key.provenance, b.key.provenance);
    const auto coefficient = signed_coefficient(a.coefficient * b.coefficient, exponent,
                                                parity_assignment(a.key.degree, b.key.degree, params.n), params.ring);
    for (std::size_t i = 0; i < na; ++i) {
        if (u.shape.marks[i].grading != 1) continue;
        for (std::size_t j = na; j < u.shape.marks.size(); ++j) {
            if (u.shape.marks[j].grading != 1) continue;
            GarlandShape s{u.shape.copies, {}};
            Mark joined{1, u.shape.marks[i].points};
            joined.points.insert(joined.points.end(), u.shape.marks[j].points.begin(), u.shape.marks[j].points.end());
            for (std::size_t m = 0; m < u.shape.marks.size(); ++m)
                if (m != i && m != j) s.marks.push_back(u.shape.marks[m]);
            s.marks.push_back(std::move(joined));
            out.push_back({coefficient, make_key(a.key.degree + b.key.degree, s, provenance)});
        }
    }
    return out;
}

std::vector<DecoratedTerm> expand_bracket(const DecoratedTerm& a, const DecoratedTerm& b,
                                          const AlgebraParams& params) {
    std::vector<DecoratedTerm> out;
    const auto u = disjoint_union(effective_shape(a.key.shape), effective_shape(b.key.shape));
    const auto provenance = merged(a.key.provenance, b.key.provenance);
    const auto exponent = bracket_sign_exponent(params.sign_rule, a.key.provenance, b.key.provenance);
    const auto coefficient = signed_coefficient(a.coefficient * b.coefficient, exponent,
                                                parity_assignment(a.key.degree, b.key.degree, params.n), params.ring);
    const std::int64_t degree = a.key.degree + b.key.degree + 2 * static_cast<std::int64_t>(params.n);
    for (auto c1 : u.copy_map_first) {
        for (auto c2 : u.copy_map_second) {
            GarlandShape s = u.shape;
            s.marks.push_back(Mark{2, {PointRef{c1, fresh_label(u.shape, c1)}, PointRef{c2, fresh_label(u.shape, c2)}}});
            out.push_back({coefficient, make_key(degree, s, provenance)});
        }
    }
    return out;
}

std::vector<DecoratedTerm> expand_lift(const DecoratedTerm& t, const AlgebraParams& params) {
    std::vector<DecoratedTerm> out;
    const auto base = effective_shape(t.key.shape);
    for (std::uint32_t c = 0; c < base.copies; ++c) {
        GarlandShape s{base.copies, {}};
        for (auto m : base.marks) {
            ++m.grading;
            s.marks.push_back(std::move(m));
        }
        s.marks.push_back(Mark{1, {PointRef{c, fresh_label(base, c)}}});
        std::vector<std::uint8_t> fresh(s.marks.size(), 0);
        fresh.back() = 1;
        out.push_back({t.coefficient, make_key(t.key.degree + params.n, s, t.key.provenance, fresh)});
    }
    return out;
}

std::vector<DecoratedTerm> expand_proj(const DecoratedTerm& t, const AlgebraParams& params) {
    GarlandShape s{t.key.shape.copies, {}};
    for (std::size_t i = 0; i < t.key.shape.marks.size(); ++i) {
        Mark m = t.key.shape.marks[i];
        if (m.grading != 1) {
            --m.grading;
        } else if (m.size() > 1) {
            m.grading = 2;
        } else {
            // Erased. An erased mark that lift just created kills the term
            // when P bounds.
            if (params.p_is_boundary && t.key.fresh[i]) return {};
            continue;
        }
        s.marks.push_back(std::move(m));
    }
    return {{t.coefficient, make_key(t.key.degree, s, t.key.provenance)}};
}

Element product(const Element& a, const Element& b) {
    require_same(a.params(), b.params());
    Element out(a.params());
    for (const auto& ta : a.term_list())
        for (const auto& tb : b.term_list())
            for (const auto& t : expand_product(ta, tb, a.params())) out.accumulate(t.key, t.coefficient);
    return out;
}

Element bracket(const Element& a, const Element& b) {
    require_same(a.params(), b.params());
    Element out(a.params());
    for (const auto& ta : a.term_list())
        for (const auto& tb : b.term_list())
            for (const auto& t : expand_bracket(ta, tb, a.params())) out.accumulate(t.key, t.coefficient);
    return out;
}

Element lift(const Element& e) {
    Element out(e.params());
    for (const auto& t : e.term_list())
        for (const auto& s : expand_lift(t, e.params())) out.accumulate(s.key, s.coefficient);
    return out;
}

Element proj(const Element& e) {
    Element out(e.params());
    for (const auto& t : e.term_list())
        for (const auto& s : expand_proj(t, e.params())) out.accumulate(s.key, s.coefficient);
    return out;
}

Element delta(const Element& e) { return lift(proj(e)); }

bool has_m_component(const Element& e) {
    return std::any_of(e.terms().begin(), e.terms().end(), [](const auto& kv) { return kv.first.shape.copies == 0; });
}

std::uint32_t effective_copies(const GarlandShape& shape) { return std::max<std::uint32_t>(shape.copies, 1); }

}  // namespace garland::calc
