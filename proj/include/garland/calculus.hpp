#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "garland/parity.hpp"
#include "garland/shape.hpp"

namespace garland::calc {

/// How Z-mode summands of the product and bracket are oriented.
///   Zero:         every construction sign is +1.
///   KoszulOrder:  a summand built from factors presented out of provenance
///                 order picks up the Koszul sign of swapping them
///                 (|x||y| for the product, (|x|+n)(|y|+n) for the bracket).
enum class ConstructionSign { Zero, KoszulOrder };

std::string to_string(ConstructionSign rule);
ConstructionSign construction_sign_from_string(const std::string& name);

struct AlgebraParams {
    int m = 2;
    int n = 1;
    bool p_is_boundary = false;
    sign::Ring ring = sign::Ring::Z2;
    ConstructionSign sign_rule = ConstructionSign::Zero;

    auto operator<=>(const AlgebraParams&) const = default;
};

class ParamsMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Formal stand-in for a bordism class with a fixed garland type.
struct BaseGenerator {
    std::string name;
    std::int64_t degree = 0;
    GarlandShape shape;

    bool operator==(const BaseGenerator&) const = default;
};

/// Everything that identifies a decorated term apart from its coefficient.
/// `shape` is canonical and `fresh` has one flag per mark of `shape`.
struct TermKey {
    std::int64_t degree = 0;
    GarlandShape shape;
    std::vector<std::string> provenance;  // sorted multiset of generator names
    std::vector<std::uint8_t> fresh;

    auto operator<=>(const TermKey&) const = default;
};

/// Canonicalizes shape and provenance, keeping fresh flags attached to their
/// marks. `fresh` may be empty (no live tags).
TermKey make_key(std::int64_t degree, const GarlandShape& shape, std::vector<std::string> provenance,
                 std::span<const std::uint8_t> fresh = {});

struct DecoratedTerm {
    std::int64_t coefficient = 1;
    TermKey key;

    bool has_fresh_mark() const;
};

/// A canonical finite formal sum of decorated terms.
class Element {
public:
    Element() = default;
    explicit Element(const AlgebraParams& params) : params_(params) {}

    const AlgebraParams& params() const { return params_; }
    const std::map<TermKey, std::int64_t>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    std::vector<DecoratedTerm> term_list() const;

    /// Adds coefficient * key, reducing in the ring and dropping zeros.
    void accumulate(const TermKey& key, std::int64_t coefficient);

    bool operator==(const Element&) const = default;

private:
    AlgebraParams params_;
    std::map<TermKey, std::int64_t> terms_;
};

Element from_generator(const BaseGenerator& gen, const AlgebraParams& params, std::int64_t coefficient = 1);
Element collect(const std::vector<DecoratedTerm>& terms, const AlgebraParams& params);

/// Degree 0, no copies, one empty grading-1 mark, empty provenance.
Element unit(const AlgebraParams& params);
bool is_unit_shape(const GarlandShape& shape);

Element add(const Element& a, const Element& b);
Element scale(const Element& a, std::int64_t factor);
Element subtract(const Element& a, const Element& b);

Element product(const Element& a, const Element& b);
Element bracket(const Element& a, const Element& b);
Element lift(const Element& e);
Element proj(const Element& e);
Element delta(const Element& e);

/// Raw summands before collection, one per index of the defining sum.
std::vector<DecoratedTerm> expand_product(const DecoratedTerm& a, const DecoratedTerm& b,
                                          const AlgebraParams& params);
std::vector<DecoratedTerm> expand_bracket(const DecoratedTerm& a, const DecoratedTerm& b,
                                          const AlgebraParams& params);
std::vector<DecoratedTerm> expand_lift(const DecoratedTerm& t, const AlgebraParams& params);
/// Empty when the term maps to zero.
std::vector<DecoratedTerm> expand_proj(const DecoratedTerm& t, const AlgebraParams& params);

/// True if some term lives on the M-component (no copies).
bool has_m_component(const Element& e);

/// Number of copies the bracket and lift see: an M-component term behaves
/// as a single copy of P.
std::uint32_t effective_copies(const GarlandShape& shape);

/// Construction-sign exponent for a product/bracket summand, as a
/// polynomial in the parity variables {x, y, n} (indices 0, 1, 2).
sign::ParityPoly product_sign_exponent(ConstructionSign rule, const std::vector<std::string>& left,
                                       const std::vector<std::string>& right);
sign::ParityPoly bracket_sign_exponent(ConstructionSign rule, const std::vector<std::string>& left,
                                       const std::vector<std::string>& right);

}  // namespace garland::calc
