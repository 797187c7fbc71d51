#pragma once

#include "spm/core.hpp"
#include "spm/spaces.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spm
{

/// How an inversion is judged on two-valued entries.
/// relational: the image row is the pointwise swap of the row ({yes,no} is swap-fixed).
/// strict: additionally every entry must be single-valued, so o(s,m) != o(s,alpha(m)) holds literally.
enum class InversionMode
{
    relational,
    strict,
};

/// o = phi . rho . tau, stored by index.
struct CompositionSpec
{
    std::size_t observed = 0;
    std::size_t observers = 0;
    std::vector<std::string> compound;
    std::vector<std::size_t> tau; // [s * observers + m] -> compound index
    std::vector<StateIndex> rho;  // compound index -> observer state
    std::vector<OutcomeSet> phi;  // observer state -> outcome
};

struct ObserverModel
{
    StatePropertySpace space; // the observer's own states and properties
    std::string indicator;
    OutcomeTable relation; // (observed state, observer state)
    std::optional<std::vector<StateIndex>> inversion;
    std::optional<CompositionSpec> composition;
};

struct ObserverOptions
{
    bool allow_nonsurjective = false;
};

/// Throws NonSurjective unless allow_nonsurjective; throws InvalidModel on
/// out-of-range indices.
OutcomeTable compose_outcome_relation( const CompositionSpec& spec, bool allow_nonsurjective = false );

/// Indicator classicality and partition, dimensions, surjectivity,
/// inversion range, and composition consistency. Empty result means valid.
std::vector<Verdict> validate_observer( const ObserverModel& model, const StatePropertySpace& system,
                                        ObserverOptions options = {} );

// Index-level predicates. `actual` is κ(a) over the observed states and
// `inverse` is κ(a⊥).

bool perfect_at( const OutcomeTable& o, StateIndex m, const StateSet& actual );

// Predetermined correlation: s in κ(a) <=> o(s,m)={yes} and s in κ(a⊥) <=> o(s,m)={no}.
bool classically_correlated_at( const OutcomeTable& o, StateIndex m, const StateSet& actual, const StateSet& inverse );

bool is_inversion_image( const OutcomeTable& o, StateIndex m, StateIndex image, InversionMode mode );

std::vector<StateIndex> inversion_images( const OutcomeTable& o, StateIndex m, InversionMode mode );

struct InversionCheck
{
    bool valid = true;
    StateIndex s = 0;
    StateIndex m = 0;
};

/// First violating (s, m) in (s, m) order, or valid.
InversionCheck check_inversion( const OutcomeTable& o, const std::vector<StateIndex>& alpha, InversionMode mode );

struct ClassicalPerfectResult
{
    int failed_clause = 0; // 0 = pass, else 1..3
    std::optional<StateIndex> witness;
    std::optional<StateIndex> image;

    [[nodiscard]] bool passed() const { return failed_clause == 0; }
};

/// (i) m is a-perfect, (ii) some inversion image of m is a⊥-perfect,
/// (iii) the biconditionals of the predetermined correlation hold at m.
ClassicalPerfectResult classical_perfect( const OutcomeTable& o, StateIndex m, const StateSet& actual,
                                          const StateSet& inverse, InversionMode mode = InversionMode::relational );

/// Counterexample state m to: m correlated for a <=> alpha(m) correlated for a⊥.
std::optional<StateIndex> theorem1_counterexample( const OutcomeTable& o, const std::vector<StateIndex>& alpha,
                                                   const StateSet& actual, const StateSet& inverse );

// Name-level API.

bool is_perfect( const ObserverModel& model, const StatePropertySpace& system, const std::string& m,
                 const std::string& a );

bool is_lambda_perfect( const ObserverModel& model, const StatePropertySpace& system, const std::string& m,
                        const std::vector<std::string>& lambda );

/// Throws PartialAlpha when alpha misses an observer state.
Verdict is_inversion( const ObserverModel& model, const StatePropertySpace& system,
                      const std::map<std::string, std::string>& alpha, InversionMode mode );

std::vector<std::string> find_inversions( const ObserverModel& model, const StatePropertySpace& system,
                                          const std::string& m, InversionMode mode );

Verdict is_classical_perfect( const ObserverModel& model, const StatePropertySpace& system, const std::string& m,
                              const std::string& a );

Verdict is_knowledgable( const ObserverModel& model, const StatePropertySpace& system );

Verdict verify_theorem1( const ObserverModel& model, const StatePropertySpace& system, const std::string& a,
                         InversionMode mode = InversionMode::relational );

Verdict verify_theorem2( const ObserverModel& model, const StatePropertySpace& system, const std::string& a,
                         const std::string& m, const std::string& mstar );

std::map<std::string, std::string> inversion_by_name( const ObserverModel& model );

} // namespace spm
