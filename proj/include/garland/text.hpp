#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "garland/calculus.hpp"
#include "garland/shape.hpp"

namespace garland::text {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::string& message() const { return message_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string message_;
};

/// Parses element text:
///   element := term ("+" term)* | "0"
///   term    := [integer "*"] "gen(" name ", deg=" integer ", copies=" integer
///              ", marks=[" mark* "])"
///   mark    := "{g=" integer ";" [point ("," point)*] "}"
///   point   := "(" copyIndex "," pointLabel ")"
/// Whitespace between tokens is ignored. The name `u` means empty
/// provenance; `a.b` is the provenance {a, b}. Point labels are integers or
/// identifiers.
calc::Element parse_element(const std::string& text, const calc::AlgebraParams& params);

/// Canonical text: terms in key order, labels renumbered by canonicalization,
/// coefficient omitted when 1. Freshness tags are not represented.
std::string print_element(const calc::Element& element);

std::string print_shape_marks(const GarlandShape& shape);

/// Graphviz text: copies as circles, marks as boxes labeled "g=<grading>",
/// one edge from a mark to a copy per point of the mark on that copy.
std::string export_dot(const GarlandShape& shape, const std::string& graph_name = "garland");

}  // namespace garland::text
