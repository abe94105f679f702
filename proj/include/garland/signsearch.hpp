#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "garland/calculus.hpp"
#include "garland/lab.hpp"
#include "garland/parity.hpp"

namespace garland::signs {

/// Exponent variables: |α₁|, |α₂|, |α₃|, n at indices 0..3, matching the bit
/// layout of a parity assignment.
inline constexpr unsigned kVariables = 4;
const std::vector<std::string>& variable_names();

class UnsupportedBound : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Registered construction-sign selectors, in enumeration order.
const std::vector<calc::ConstructionSign>& selectors();

/// Multilinear monomials of degree <= bound in the four variables, in
/// enumeration order: 1, then degree 1 by index, then degree 2
/// lexicographically.
std::vector<std::uint64_t> monomial_basis(int degree_bound);

/// (−1)^{e1}[[α₁,α₂],α₃] + (−1)^{e2}[[α₂,α₃],α₁] + (−1)^{e3}[[α₃,α₁],α₂].
struct SignRule {
    calc::ConstructionSign selector = calc::ConstructionSign::Zero;
    std::array<sign::ParityPoly, 3> exponents;

    auto operator<=>(const SignRule&) const = default;
};

std::string to_string(const SignRule& rule);

/// Rule i of the deterministic enumeration: selector-major, then e1, e2, e3,
/// each exponent indexed by its coefficient vector over monomial_basis.
class RuleSpace {
public:
    explicit RuleSpace(int degree_bound);

    int degree_bound() const { return bound_; }
    std::uint64_t polys_per_slot() const { return std::uint64_t{1} << basis_.size(); }
    std::uint64_t size() const;
    SignRule at(std::uint64_t index) const;
    sign::ParityPoly poly(std::uint64_t code) const;
    /// Values of the polynomial with this code at all 16 assignments.
    std::uint16_t truth_table(std::uint64_t code) const;

private:
    int bound_;
    std::vector<std::uint64_t> basis_;
    std::vector<std::uint16_t> basis_tables_;
};

std::vector<SignRule> enumerate_rules(int degree_bound);

/// The three Jacobi summands for one input triple.
struct JacobiTerms {
    std::uint64_t assignment = 0;  // parity of each input, and n
    std::array<calc::Element, 3> summands;
};

JacobiTerms jacobi_terms(const lab::Inputs& triple, const calc::AlgebraParams& params);

/// Residual of the signed Jacobi sum for sign pattern bits (e1, e2, e3).
calc::Element signed_sum(const JacobiTerms& terms, unsigned pattern);
calc::Element residual(const SignRule& rule, const lab::Inputs& triple, const calc::AlgebraParams& params);

/// Bit p of the mask is set when pattern p (e1 | e2 << 1 | e3 << 2) gives a
/// zero residual.
std::uint8_t zero_patterns(const JacobiTerms& terms);

/// First trial at which a sign pattern stops being allowed at an assignment.
/// Every eliminated rule is eliminated by exactly one such event: the
/// earliest one matching its pattern at that assignment.
struct Elimination {
    calc::ConstructionSign selector = calc::ConstructionSign::Zero;
    std::size_t trial = 0;
    std::uint64_t assignment = 0;
    unsigned pattern = 0;
    calc::Element residual;
    std::optional<std::uint64_t> rules_eliminated;  // counted for degree 1
};

struct SearchReport {
    int degree_bound = 1;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    calc::AlgebraParams params;
    std::uint64_t enumerated = 0;
    std::vector<std::uint64_t> survivors_per_selector;
    std::vector<SignRule> survivors;  // first `list_limit` in enumeration order
    bool survivors_truncated = false;
    std::vector<Elimination> eliminations;

    bool untested() const { return trials == 0; }
    std::uint64_t survivor_count() const;
};

struct SearchOptions {
    std::size_t list_limit = 256;
};

/// Draws `trials` triples of single-generator inputs (per-trial seeds from
/// lab::derive_seed) and searches over them. Ring is forced to Z.
SearchReport search(int degree_bound, std::size_t trials, std::uint64_t seed, const calc::AlgebraParams& params,
                    const SearchOptions& options = {});

std::vector<lab::Inputs> sample_triples(std::size_t trials, std::uint64_t seed, const calc::AlgebraParams& params);

/// Search over explicit triples (each slot a single generator).
SearchReport search_on(int degree_bound, const std::vector<lab::Inputs>& triples, const calc::AlgebraParams& params,
                       const SearchOptions& options = {});

/// Whether a rule survives every triple, checked directly.
bool survives(const SignRule& rule, const std::vector<lab::Inputs>& triples, const calc::AlgebraParams& params);

/// Runs the mod-2 Jacobi suite under the rule's construction-sign selector
/// (over Z/2 the exponents vanish, so this is the shadow of every rule with
/// that selector).
lab::TrialReport mod2_shadow(const SignRule& rule, std::size_t trials, std::uint64_t seed,
                             const calc::AlgebraParams& params);

}  // namespace garland::signs
