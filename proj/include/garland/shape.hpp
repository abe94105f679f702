#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace garland {

/// Raised when a shape violates a structural invariant (bad copy index,
/// grading 0, ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A point on one copy of P. Labels are formal: two refs name the same point
/// iff both copy and label coincide.
struct PointRef {
    std::uint32_t copy = 0;
    std::uint32_t label = 0;

    auto operator<=>(const PointRef&) const = default;
};

/// A finite multiset of points with a grading >= 1. The empty mark is legal.
struct Mark {
    std::uint32_t grading = 1;
    std::vector<PointRef> points;

    std::size_t size() const { return points.size(); }
    auto operator<=>(const Mark&) const = default;
};

/// The combinatorial shadow of a multimarked manifold P_1 + ... + P_k.
/// Marks form a multiset; duplicates are allowed.
struct GarlandShape {
    std::uint32_t copies = 0;
    std::vector<Mark> marks;

    auto operator<=>(const GarlandShape&) const = default;
};

struct ComponentSignature {
    std::uint32_t copies = 0;
    std::vector<std::uint32_t> gradings;  // sorted

    auto operator<=>(const ComponentSignature&) const = default;
};

/// Throws ValidationError if a mark has grading 0 or a point references a
/// copy >= shape.copies.
void validate(const GarlandShape& shape);

/// Canonical representative of the isomorphism class of `shape` under copy
/// permutation and point relabeling. Idempotent.
GarlandShape canonicalize(const GarlandShape& shape);

/// Canonical form of a shape whose marks carry an extra color (used by the
/// calculus for freshness tags). Colors travel with their marks.
struct ColoredShape {
    GarlandShape shape;
    std::vector<std::uint8_t> mark_colors;

    auto operator<=>(const ColoredShape&) const = default;
};
ColoredShape canonicalize(const GarlandShape& shape, std::span<const std::uint8_t> mark_colors);

bool shapes_equal(const GarlandShape& a, const GarlandShape& b);

ComponentSignature signature(const GarlandShape& shape);

struct DisjointUnion {
    GarlandShape shape;
    // copy_map_first[i] is the copy index of the first argument's copy i in
    // the union; likewise for the second argument. Labels are preserved.
    std::vector<std::uint32_t> copy_map_first;
    std::vector<std::uint32_t> copy_map_second;
};

DisjointUnion disjoint_union(const GarlandShape& first, const GarlandShape& second);

/// Number of marks with grading 1.
std::size_t grading_one_count(const GarlandShape& shape);

/// A label not yet used on `copy`.
std::uint32_t fresh_label(const GarlandShape& shape, std::uint32_t copy);

std::string describe(const GarlandShape& shape);

}  // namespace garland
