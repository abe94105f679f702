#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace garland::sign {

/// Multilinear polynomial over Z/2 in at most 64 parity variables. Variables
/// are identified by index; names are supplied when printing or parsing.
/// A monomial is a bitmask of variables (0 is the constant 1). Because the
/// variables are {0,1}-valued, x*x = x and the normal form is unique.
class ParityPoly {
public:
    ParityPoly() = default;

    static ParityPoly zero() { return {}; }
    static ParityPoly one() { return monomial(0); }
    static ParityPoly constant(bool bit) { return bit ? one() : zero(); }
    static ParityPoly variable(unsigned index);
    static ParityPoly monomial(std::uint64_t mask);

    bool is_zero() const { return terms_.empty(); }
    const std::vector<std::uint64_t>& monomials() const { return terms_; }
    unsigned degree() const;

    /// Value at the assignment where variable i takes bit i of `assignment`.
    bool evaluate(std::uint64_t assignment) const;

    ParityPoly& operator+=(const ParityPoly& other);
    friend ParityPoly operator+(ParityPoly a, const ParityPoly& b) { return a += b; }
    friend ParityPoly operator*(const ParityPoly& a, const ParityPoly& b);

    /// Rename variables: variable i becomes mapping[i].
    ParityPoly substitute(std::span<const unsigned> mapping) const;

    std::string to_string(std::span<const std::string> names) const;

    auto operator<=>(const ParityPoly&) const = default;

private:
    void normalize();
    std::vector<std::uint64_t> terms_;  // sorted, unique
};

class UnknownVariable : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Expression tree over +, * and the constants 0, 1 with named variables.
struct ParityExpr {
    enum class Kind { Constant, Variable, Add, Mul };
    Kind kind = Kind::Constant;
    bool value = false;
    std::string name;
    std::vector<ParityExpr> children;

    static ParityExpr constant(bool v) { return {Kind::Constant, v, {}, {}}; }
    static ParityExpr var(std::string n) { return {Kind::Variable, false, std::move(n), {}}; }
    static ParityExpr sum(std::vector<ParityExpr> c) { return {Kind::Add, false, {}, std::move(c)}; }
    static ParityExpr product(std::vector<ParityExpr> c) { return {Kind::Mul, false, {}, std::move(c)}; }

    /// Direct {0,1} evaluation, without normalizing.
    bool evaluate(std::span<const std::string> names, std::uint64_t assignment) const;
};

/// Parses text such as "(a+n)*(b+n) + 1". Variables are identifiers.
ParityExpr parse_parity_expr(const std::string& text);

ParityPoly parity_normalize(const ParityExpr& expr, std::span<const std::string> names);

/// Sign exponent for reordering graded factors. `order[i]` is the input
/// position of the factor that ends up at output position i; `parities[j]`
/// is the parity of input factor j. The exponent sums |x||y| over every pair
/// whose relative order is inverted.
ParityPoly koszul_sign(std::span<const std::size_t> order, std::span<const ParityPoly> parities);

enum class Ring { Z2, Z };

std::string to_string(Ring ring);

/// A ring element written as magnitude * (-1)^exponent. In Z/2 mode the
/// magnitude is reduced mod 2 and the exponent is ignored.
struct Coefficient {
    Ring ring = Ring::Z2;
    std::int64_t magnitude = 1;
    ParityPoly exponent;

    std::int64_t evaluate(std::uint64_t assignment) const;
};

}  // namespace garland::sign
