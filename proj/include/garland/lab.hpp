#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "garland/calculus.hpp"

namespace garland::lab {

/// SplitMix64. Used instead of <random> distributions so that draws are
/// identical on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    /// Uniform in [0, bound); bound must be > 0.
    std::uint64_t below(std::uint64_t bound);
    std::int64_t between(std::int64_t lo, std::int64_t hi);  // inclusive

private:
    std::uint64_t state_;
};

/// Deterministic per-trial seed from a master seed, a tag and an index.
std::uint64_t derive_seed(std::uint64_t master, std::string_view tag, std::uint64_t index);

struct Bounds {
    std::uint32_t max_copies = 3;
    std::uint32_t max_marks = 3;
    std::uint32_t max_grading = 3;
    std::uint32_t max_points = 3;
    std::int64_t min_degree = -2;
    std::int64_t max_degree = 6;
    std::uint32_t max_terms = 2;  // generators per input element

    bool operator==(const Bounds&) const = default;
};

/// general:        at least one grading-1 mark per generator
/// one-grading-1:  exactly one grading-1 mark per generator
/// lift-image:     lift of a general element
enum class Family { General, OneGradingOne, LiftImage };

std::string to_string(Family f);
Family family_from_string(const std::string& name);

calc::BaseGenerator random_generator(std::uint64_t seed, const Bounds& bounds, Family family, std::string name);

struct WeightedGenerator {
    std::int64_t coefficient = 1;
    calc::BaseGenerator generator;

    bool operator==(const WeightedGenerator&) const = default;
};

/// One input slot: a formal sum of generators (lifted for the lift-image
/// family).
struct SlotInput {
    std::vector<WeightedGenerator> terms;

    bool operator==(const SlotInput&) const = default;
};

struct Inputs {
    Family family = Family::General;
    std::vector<SlotInput> slots;

    bool operator==(const Inputs&) const = default;
};

calc::Element slot_element(const SlotInput& slot, Family family, const calc::AlgebraParams& params);

Inputs random_inputs(std::uint64_t seed, std::size_t slots, const Bounds& bounds, Family family,
                     const calc::AlgebraParams& params);

enum class Identity {
    Comm,
    Assoc,
    Distrib,
    UnitLaw,
    AntisymMod2,
    JacobiMod2,
    Bilinear,
    Prop42,
    Prop43,
    DeltaSq,
    BvProbe,
};

class UnknownIdentity : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::string to_string(Identity id);
Identity identity_from_string(const std::string& name);
const std::vector<Identity>& all_identities();
std::size_t arity(Identity id);

/// Whether the identity is asserted for the given parameters (prop43 and
/// delta-sq need P to be a boundary; bv-probe is never asserted).
bool claimed(Identity id, const calc::AlgebraParams& params);

/// Parameters the identity is evaluated under (mod-2 identities force Z/2).
calc::AlgebraParams effective_params(Identity id, const calc::AlgebraParams& params);

struct Evaluation {
    bool holds = true;
    std::string part;  // which sub-identity failed, when several are checked
    calc::Element left;
    calc::Element right;

    bool operator==(const Evaluation&) const = default;
};

Evaluation evaluate(Identity id, const Inputs& inputs, const calc::AlgebraParams& params);

class NotACounterexample : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Greedy shrinking: drop generators, copies, marks and points, and zero
/// degrees, while the identity still fails. Result is locally minimal.
Inputs minimize(Identity id, const Inputs& failing, const calc::AlgebraParams& params);

struct Failure {
    std::size_t trial = 0;
    std::uint64_t trial_seed = 0;
    Inputs inputs;
    Evaluation evaluation;
    Inputs minimized;
    Evaluation minimized_evaluation;

    bool operator==(const Failure&) const = default;
};

struct TrialReport {
    Identity identity = Identity::Comm;
    Family family = Family::General;
    std::uint64_t seed = 0;
    calc::AlgebraParams params;            // as requested
    calc::AlgebraParams effective;         // as evaluated
    Bounds bounds;
    std::size_t trials = 0;
    std::size_t passes = 0;
    std::size_t m_component_trials = 0;    // trials with an M-component input
    bool claimed = true;
    std::optional<Failure> first_failure;

    bool operator==(const TrialReport&) const = default;

    /// PASS, DIVERGES-FROM-PAPER, NO-CLAIM, HOLDS or FAILS.
    std::string verdict() const;
    /// True when the identity is claimed and a trial failed.
    bool diverges() const { return claimed && passes != trials; }
};

TrialReport check(Identity id, std::size_t trials, std::uint64_t seed, const calc::AlgebraParams& params,
                  Family family = Family::General, const Bounds& bounds = {});

std::size_t grading_one_marks(const SlotInput& slot);

}  // namespace garland::lab
