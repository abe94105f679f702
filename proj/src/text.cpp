#include "garland/text.hpp"

#include <cctype>
#include <limits>
#include <map>
#include <sstream>

namespace garland::text {

using calc::Element;

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      message_(message) {}

namespace {

class Parser {
public:
    Parser(const std::string& text, const calc::AlgebraParams& params) : text_(text), params_(params) {}

    Element element() {
        Element e(params_);
        skip();
        if (peek() == '0' && !std::isdigit(static_cast<unsigned char>(peek(1)))) {
            const auto at = pos_;
            ++pos_;
            skip();
            if (done()) return e;
            pos_ = at;
        }
        term(e);
        while (skip(), !done()) {
            expect('+');
            term(e);
        }
        return e;
    }

private:
    bool done() const { return pos_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const { return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0'; }

    void skip() {
        while (!done() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& message, std::size_t at) const {
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(line, column, message);
    }
    [[noreturn]] void fail(const std::string& message) const { fail(message, pos_); }

    std::string describe_next() const {
        if (done()) return "end of input";
        return std::string("'") + text_[pos_] + "'";
    }

    void expect(char c) {
        skip();
        if (peek() != c) fail(std::string("expected '") + c + "', found " + describe_next());
        ++pos_;
    }

    void keyword(const std::string& word) {
        skip();
        if (text_.compare(pos_, word.size(), word) != 0) fail("expected '" + word + "', found " + describe_next());
        pos_ += word.size();
    }

    bool is_name_char(char c) const {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '\'';
    }

    std::string identifier() {
        skip();
        const auto start = pos_;
        while (!done() && is_name_char(text_[pos_])) ++pos_;
        if (start == pos_) fail("expected a name, found " + describe_next());
        return text_.substr(start, pos_ - start);
    }

    std::int64_t integer() {
        skip();
        const auto start = pos_;
        bool negative = false;
        if (peek() == '-') {
            negative = true;
            ++pos_;
        }
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an integer, found " + describe_next());
        std::uint64_t value = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            value = value * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
            if (value > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
                fail("integer out of range", start);
            ++pos_;
        }
        return negative ? -static_cast<std::int64_t>(value) : static_cast<std::int64_t>(value);
    }

    std::uint32_t count(const std::string& what) {
        const auto at = (skip(), pos_);
        const auto v = integer();
        if (v < 0 || v > std::numeric_limits<std::uint32_t>::max()) fail(what + " must be non-negative", at);
        return static_cast<std::uint32_t>(v);
    }

    std::vector<std::string> provenance(const std::string& name, std::size_t at) {
        if (name == "u") return {};
        std::vector<std::string> parts;
        std::string current;
        for (char c : name) {
            if (c == '.') {
                if (current.empty()) fail("empty component in name '" + name + "'", at);
                parts.push_back(current);
                current.clear();
            } else {
                current += c;
            }
        }
        if (current.empty()) fail("empty component in name '" + name + "'", at);
        parts.push_back(current);
        for (const auto& p : parts)
            if (p == "u") fail("'u' cannot be part of a compound name", at);
        return parts;
    }

    void term(Element& e) {
        skip();
        std::int64_t coefficient = 1;
        if (peek() == '-' || std::isdigit(static_cast<unsigned char>(peek()))) {
            coefficient = integer();
            expect('*');
        }
        keyword("gen");
        expect('(');
        skip();
        const auto name_at = pos_;
        const auto prov = provenance(identifier(), name_at);
        expect(',');
        keyword("deg");
        expect('=');
        const auto degree = integer();
        expect(',');
        keyword("copies");
        expect('=');
        GarlandShape shape;
        shape.copies = count("copies");
        expect(',');
        keyword("marks");
        expect('=');
        expect('[');
        label_ids_.clear();
        while (skip(), peek() == '{') shape.marks.push_back(mark(shape.copies));
        expect(']');
        expect(')');
        e.accumulate(calc::make_key(degree, shape, prov), coefficient);
    }

    Mark mark(std::uint32_t copies) {
        expect('{');
        keyword("g");
        expect('=');
        skip();
        const auto at = pos_;
        const auto g = integer();
        if (g < 1) fail("grading must be ≥ 1", at);
        if (g > std::numeric_limits<std::uint32_t>::max()) fail("grading out of range", at);
        Mark m{static_cast<std::uint32_t>(g), {}};
        expect(';');
        skip();
        if (peek() == '(') {
            m.points.push_back(point(copies));
            while (skip(), peek() == ',') {
                ++pos_;
                m.points.push_back(point(copies));
            }
        }
        expect('}');
        return m;
    }

    PointRef point(std::uint32_t copies) {
        expect('(');
        skip();
        const auto at = pos_;
        const auto copy = count("copy index");
        if (copy >= copies)
            fail("copy index " + std::to_string(copy) + " out of range (copies=" + std::to_string(copies) + ")", at);
        expect(',');
        skip();
        std::uint32_t label = 0;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            label = count("point label");
            if (label >= kNamedLabelBase) fail("point label out of range", at);
        } else {
            const auto name = identifier();
            auto [it, inserted] = label_ids_.emplace(name, kNamedLabelBase + static_cast<std::uint32_t>(label_ids_.size()));
            label = it->second;
        }
        expect(')');
        return {copy, label};
    }

    // Named labels are mapped above every numeric label so the two never
    // collide; canonicalization renumbers them afterwards.
    static constexpr std::uint32_t kNamedLabelBase = 1u << 30;

    const std::string& text_;
    calc::AlgebraParams params_;
    std::size_t pos_ = 0;
    std::map<std::string, std::uint32_t> label_ids_;
};

std::string provenance_name(const std::vector<std::string>& prov) {
    if (prov.empty()) return "u";
    std::string s;
    for (std::size_t i = 0; i < prov.size(); ++i) s += (i ? "." : "") + prov[i];
    return s;
}

}  // namespace

Element parse_element(const std::string& text, const calc::AlgebraParams& params) {
    return Parser(text, params).element();
}

std::string print_shape_marks(const GarlandShape& shape) {
    std::string s = "[";
    for (const auto& m : shape.marks) {
        s += "{g=" + std::to_string(m.grading) + ";";
        for (std::size_t i = 0; i < m.points.size(); ++i)
            s += (i ? "," : "") + std::string("(") + std::to_string(m.points[i].copy) + ",p" +
                 std::to_string(m.points[i].label) + ")";
        s += "}";
    }
    return s + "]";
}

std::string print_element(const Element& element) {
    if (element.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [key, coefficient] : element.terms()) {
        if (!first) s += " + ";
        first = false;
        if (coefficient != 1) s += std::to_string(coefficient) + "*";
        s += "gen(" + provenance_name(key.provenance) + ", deg=" + std::to_string(key.degree) +
             ", copies=" + std::to_string(key.shape.copies) + ", marks=" + print_shape_marks(key.shape) + ")";
    }
    return s;
}

std::string export_dot(const GarlandShape& input, const std::string& graph_name) {
    const auto shape = canonicalize(input);
    std::ostringstream out;
    out << "digraph " << graph_name << " {\n";
    for (std::uint32_t c = 0; c < shape.copies; ++c) out << "  c" << c << " [shape=circle];\n";
    for (std::size_t i = 0; i < shape.marks.size(); ++i)
        out << "  m" << i << " [shape=box, label=\"g=" << shape.marks[i].grading << "\"];\n";
    for (std::size_t i = 0; i < shape.marks.size(); ++i)
        for (const auto& p : shape.marks[i].points) out << "  m" << i << " -> c" << p.copy << ";\n";
    out << "}\n";
    return out.str();
}

}  // namespace garland::text
