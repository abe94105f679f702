#include "garland/parity.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

namespace garland::sign {

ParityPoly ParityPoly::variable(unsigned index) {
    if (index >= 64) throw std::out_of_range("parity variable index >= 64");
    return monomial(std::uint64_t{1} << index);
}

ParityPoly ParityPoly::monomial(std::uint64_t mask) {
    ParityPoly p;
    p.terms_.push_back(mask);
    return p;
}

void ParityPoly::normalize() {
    std::sort(terms_.begin(), terms_.end());
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < terms_.size();) {
        std::size_t j = i;
        while (j < terms_.size() && terms_[j] == terms_[i]) ++j;
        if ((j - i) % 2 == 1) out.push_back(terms_[i]);
        i = j;
    }
    terms_ = std::move(out);
}

unsigned ParityPoly::degree() const {
    unsigned d = 0;
    for (auto m : terms_) d = std::max(d, static_cast<unsigned>(std::popcount(m)));
    return d;
}

bool ParityPoly::evaluate(std::uint64_t assignment) const {
    bool v = false;
    for (auto m : terms_) v ^= (m & assignment) == m;
    return v;
}

ParityPoly& ParityPoly::operator+=(const ParityPoly& other) {
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    normalize();
    return *this;
}

ParityPoly operator*(const ParityPoly& a, const ParityPoly& b) {
    ParityPoly out;
    for (auto x : a.terms_)
        for (auto y : b.terms_) out.terms_.push_back(x | y);
    out.normalize();
    return out;
}

ParityPoly ParityPoly::substitute(std::span<const unsigned> mapping) const {
    ParityPoly out;
    for (auto m : terms_) {
        std::uint64_t image = 0;
        for (unsigned i = 0; i < 64; ++i)
            if (m >> i & 1) image |= std::uint64_t{1} << mapping[i];
        out.terms_.push_back(image);
    }
    out.normalize();
    return out;
}

std::string ParityPoly::to_string(std::span<const std::string> names) const {
    if (terms_.empty()) return "0";
    std::string s;
    for (std::size_t t = 0; t < terms_.size(); ++t) {
        if (t) s += " + ";
        const auto m = terms_[t];
        if (m == 0) {
            s += "1";
            continue;
        }
        bool first = true;
        for (unsigned i = 0; i < 64; ++i) {
            if (!(m >> i & 1)) continue;
            if (!first) s += "*";
            s += i < names.size() ? names[i] : "x" + std::to_string(i);
            first = false;
        }
    }
    return s;
}

namespace {

unsigned lookup(std::span<const std::string> names, const std::string& name) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw UnknownVariable("unknown parity variable '" + name + "'");
    return static_cast<unsigned>(it - names.begin());
}

class ExprParser {
public:
    explicit ExprParser(const std::string& text) : s_(text) {}

    ParityExpr parse() {
        auto e = sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return e;
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("parity expression: " + what + " at offset " + std::to_string(pos_));
    }
    ParityExpr sum() {
        std::vector<ParityExpr> parts{product()};
        for (skip(); pos_ < s_.size() && s_[pos_] == '+'; skip()) {
            ++pos_;
            parts.push_back(product());
        }
        return parts.size() == 1 ? parts[0] : ParityExpr::sum(std::move(parts));
    }
    ParityExpr product() {
        std::vector<ParityExpr> parts{factor()};
        for (skip(); pos_ < s_.size() && s_[pos_] == '*'; skip()) {
            ++pos_;
            parts.push_back(factor());
        }
        return parts.size() == 1 ? parts[0] : ParityExpr::product(std::move(parts));
    }
    ParityExpr factor() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            auto e = sum();
            skip();
            if (pos_ >= s_.size() || s_[pos_] != ')') fail("expected ')'");
            ++pos_;
            return e;
        }
        if (c == '0' || c == '1') {
            ++pos_;
            return ParityExpr::constant(c == '1');
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '|') {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '|'))
                ++pos_;
            return ParityExpr::var(s_.substr(start, pos_ - start));
        }
        fail("unexpected character");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

bool ParityExpr::evaluate(std::span<const std::string> names, std::uint64_t assignment) const {
    switch (kind) {
    case Kind::Constant:
        return value;
    case Kind::Variable:
        return assignment >> lookup(names, name) & 1;
    case Kind::Add: {
        bool v = false;
        for (const auto& c : children) v ^= c.evaluate(names, assignment);
        return v;
    }
    case Kind::Mul: {
        bool v = true;
        for (const auto& c : children) v = v && c.evaluate(names, assignment);
        return v;
    }
    }
    return false;
}

ParityExpr parse_parity_expr(const std::string& text) { return ExprParser(text).parse(); }

ParityPoly parity_normalize(const ParityExpr& expr, std::span<const std::string> names) {
    switch (expr.kind) {
    case ParityExpr::Kind::Constant:
        return ParityPoly::constant(expr.value);
    case ParityExpr::Kind::Variable:
        return ParityPoly::variable(lookup(names, expr.name));
    case ParityExpr::Kind::Add: {
        ParityPoly p;
        for (const auto& c : expr.children) p += parity_normalize(c, names);
        return p;
    }
    case ParityExpr::Kind::Mul: {
        auto p = ParityPoly::one();
        for (const auto& c : expr.children) p = p * parity_normalize(c, names);
        return p;
    }
    }
    return {};
}

ParityPoly koszul_sign(std::span<const std::size_t> order, std::span<const ParityPoly> parities) {
    if (order.size() != parities.size()) throw std::invalid_argument("koszul_sign: length mismatch");
    std::vector<bool> seen(order.size(), false);
    for (auto i : order) {
        if (i >= order.size() || seen[i]) throw std::invalid_argument("koszul_sign: not a permutation");
        seen[i] = true;
    }
    ParityPoly e;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j)
            if (order[i] > order[j]) e += parities[order[i]] * parities[order[j]];
    return e;
}

std::string to_string(Ring ring) { return ring == Ring::Z2 ? "z2" : "z"; }

std::int64_t Coefficient::evaluate(std::uint64_t assignment) const {
    if (ring == Ring::Z2) return ((magnitude % 2) + 2) % 2;
    return exponent.evaluate(assignment) ? -magnitude : magnitude;
}

}  // namespace garland::sign
