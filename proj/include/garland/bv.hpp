#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "garland/parity.hpp"

namespace garland::bv {

using Rational = boost::multiprecision::cpp_rational;

/// Generators a, b, c are parity variables 0, 1, 2; n is variable 3.
/// A concrete assignment packs (|a|, |b|, |c|, n) into bits 0..3.
inline constexpr int kGenerators = 3;
inline constexpr std::size_t kVarN = 3;
const std::vector<std::string>& parity_names();

/// A generator symbol or Δ applied to a word.
struct Atom {
    int generator = -1;          // >= 0 for a generator
    std::vector<Atom> argument;  // word under Δ when generator < 0

    static Atom gen(int index);
    static Atom delta(std::vector<Atom> word);
    bool is_delta() const { return generator < 0; }
    /// Number of nested Δ applications.
    int depth() const;
};

bool operator==(const Atom& x, const Atom& y);
bool operator<(const Atom& x, const Atom& y);

using AtomList = std::vector<Atom>;

sign::ParityPoly atom_parity(const Atom& atom);
sign::ParityPoly word_parity(const AtomList& atoms);
int evaluate_parity(const AtomList& atoms, std::uint64_t assignment);

/// A product of atoms in canonical order together with the Koszul exponent
/// accumulated while sorting it (and the arguments of its Δ-atoms).
struct Word {
    AtomList atoms;
    sign::ParityPoly exponent;
    bool zero = false;  // Δ(Δ(w)) collapsed
};

/// Sorts atoms (generators by index, then Δ-atoms by argument) with the
/// Koszul sign. With `collapse_delta_squared`, any Δ(Δ(w)) makes the word 0.
Word canonicalize_word(const AtomList& presentation, bool collapse_delta_squared = true);

/// True if, at the assignment, some odd atom occurs twice (at any depth).
bool vanishes_at(const AtomList& canonical, std::uint64_t assignment);

/// True if a Δ-atom directly wraps a single Δ-atom anywhere in the word.
bool contains_delta_squared(const AtomList& atoms);
int word_depth(const AtomList& atoms);
std::string to_string(const AtomList& atoms);

/// Finite rational combination of canonical words at a concrete assignment.
struct ExprSum {
    std::map<AtomList, Rational> terms;

    bool is_zero() const { return terms.empty(); }
    bool operator==(const ExprSum&) const = default;
};

std::string to_string(const ExprSum& e);

/// Builds ExprSums at one parity assignment.
class Algebra {
public:
    explicit Algebra(std::uint64_t assignment, bool collapse_delta_squared = true)
        : assignment_(assignment), collapse_(collapse_delta_squared) {}

    std::uint64_t assignment() const { return assignment_; }
    int n() const { return static_cast<int>(assignment_ >> kVarN & 1); }
    int parity(const AtomList& w) const { return evaluate_parity(w, assignment_); }

    ExprSum word(const AtomList& presentation, Rational coefficient = 1) const;
    ExprSum generator(int index) const { return word({Atom::gen(index)}); }
    ExprSum add(const ExprSum& x, const ExprSum& y) const;
    ExprSum scale(const ExprSum& x, const Rational& c) const;
    ExprSum sub(const ExprSum& x, const ExprSum& y) const { return add(x, scale(y, -1)); }
    ExprSum mul(const ExprSum& x, const ExprSum& y) const;
    ExprSum delta(const ExprSum& x) const;

    /// LHS − RHS of the seven-term relation at words x, y, z.
    ExprSum instantiate_bv(const AtomList& x, const AtomList& y, const AtomList& z) const;
    /// {x, y} = (−1)^{|x|n} Δ(xy) − (−1)^{|x|n} Δ(x)y − xΔ(y), for
    /// homogeneous arguments.
    ExprSum gerstenhaber_bracket(const ExprSum& x, const ExprSum& y) const;

    int sign(int exponent) const { return exponent % 2 ? -1 : 1; }
    /// Parity of a homogeneous sum (throws if empty or mixed).
    int parity(const ExprSum& x) const;

private:
    std::uint64_t assignment_;
    bool collapse_;
};

struct Relation {
    std::string label;
    ExprSum sum;
};

class WordBoundExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MembershipResult {
    bool member = false;
    std::vector<std::pair<std::size_t, Rational>> certificate;  // relation index, coefficient
    ExprSum residual;
};

/// Decides target ∈ span(relations) by exact elimination. A single-relation
/// certificate is preferred when one exists.
MembershipResult check_membership(const ExprSum& target, const std::vector<Relation>& relations);

/// Replays a certificate: target − Σ coefficient·relation.
ExprSum replay(const ExprSum& target, const std::vector<Relation>& relations,
               const std::vector<std::pair<std::size_t, Rational>>& certificate);

enum class Law { GradedSymmetry, Jacobi, Derivation, Leibniz };
std::string to_string(Law law);
const std::vector<Law>& all_laws();

struct VerifyOptions {
    int word_bound = 2;  // maximum Δ-nesting depth of any word considered
    bool use_bv_relation = true;
    bool use_delta_squared = true;
    std::optional<std::uint64_t> shuffle_seed;  // permute relation order
};

struct LawResult {
    std::uint64_t assignment = 0;
    Law law = Law::GradedSymmetry;
    bool member = false;
    ExprSum target;
    std::vector<Relation> certificate;  // used relations, scaled by their coefficients
    std::vector<Rational> coefficients;
    ExprSum residual;
    std::size_t relations_available = 0;
};

struct Prop51Report {
    VerifyOptions options;
    std::vector<LawResult> results;  // ordered by (assignment, law)

    std::size_t members() const;
    bool all_members() const { return members() == results.size(); }
};

/// Difference of the two sides of the law at one assignment.
ExprSum law_target(Law law, const Algebra& alg);

/// Relations available at an assignment for targets with the given
/// generator content, within the word bound.
std::vector<Relation> relation_set(const Algebra& alg, const VerifyOptions& options,
                                   const std::vector<ExprSum>& targets);

LawResult verify_law(Law law, std::uint64_t assignment, const VerifyOptions& options);
Prop51Report verify_prop51(const VerifyOptions& options = {});

std::string assignment_string(std::uint64_t assignment);

}  // namespace garland::bv
