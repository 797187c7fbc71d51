#pragma once

#include "spm/core.hpp"
#include "spm/observation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace spm
{

/// Which observed states the p_a correlations are imposed on.
/// diagonal: only o(m,m) (introspection); full: every o(s,m) as well.
enum class Quantify
{
    diagonal,
    full,
};

/// An observer observing its own states: a square relation over Σ_M with a
/// classical focus property a (κ(a), κ(a⊥)) and an optional inversion map.
struct SelfKernel
{
    OutcomeTable relation;
    StateSet focus_actual;
    StateSet focus_inverse;
    std::vector<StateIndex> alpha; // empty when no inversion is declared

    [[nodiscard]] std::size_t size() const { return relation.observer_count(); }
};

/// Throws NotClassicalFocus unless the relation is square and the focus
/// sets partition the states.
void require_valid_self_kernel( const SelfKernel& k );

/// Name-level self model built from an observer whose relation observes itself.
struct SelfModel
{
    ObserverModel observer;
    std::string focus; // defaults to the indicator when empty
};

SelfKernel make_kernel( const SelfModel& sm );

/// κ(p_a): states that are a-classical perfect; κ(p_a⊥) is the complement.
struct PaPartition
{
    StateSet pa_states;
    StateSet pa_perp_states;
};

PaPartition derive_pa( const SelfKernel& k );

enum class Theorem3Outcome
{
    premise_violated,
    pass,
    fail,
};

Theorem3Outcome theorem3_outcome( const SelfKernel& k, const PaPartition& pa );
Verdict theorem3_check( const SelfKernel& k, const std::vector<std::string>& names );

enum class CertificateKind
{
    contradiction,
    premise_unsatisfiable,
    counterexample,
    pass,
};

std::string_view to_string( CertificateKind kind );

enum class StepRule
{
    pa_yes,               // m in κ(p_a) <=> o(m,m) = yes
    pa_no,                // m in κ(p_a⊥) <=> o(m,m) = no
    full_correlation,     // quantify=full: the correlation over every observed state
    inverse_completeness, // an inversion image of m lies in κ(p_a⊥)
    no_image,             // candidate without any inversion image in κ(p_a⊥)
    image_no,             // the p_a_perp correlation at alpha(m): forces o(alpha(m),alpha(m)) = no
    identification,       // alpha(m) satisfies the p_a_perp correlation, so alpha(m) in Σ^{p_a}, so in κ(p_a)
    forced_yes,           // the p_a correlation at alpha(m): forces o(alpha(m),alpha(m)) = yes
};

std::string_view to_string( StepRule rule );

/// One instantiated step. Recorded values are what the model held when the
/// step was produced; replay recomputes them.
struct TraceStep
{
    StepRule rule;
    StateIndex state = 0;   // the state the equation is instantiated at
    StateIndex partner = 0; // the candidate m for steps about alpha(m)
    bool in_pa = false;
    bool in_pa_perp = false;
    OutcomeSet entry;    // o(state, state)
    OutcomeSet required; // entry demanded by the step (image_no, forced_yes)
    bool holds = false;  // the instantiated claim holds in the model

    friend bool operator==( const TraceStep&, const TraceStep& ) = default;
};

struct Certificate
{
    CertificateKind kind = CertificateKind::premise_unsatisfiable;
    std::vector<TraceStep> trace;
    std::optional<StateIndex> candidate;
    std::optional<StateIndex> image;
    std::optional<StateIndex> forced_state; // diagonal entry forced to both yes and no
};

/// Mechanizes the diagonal argument over every candidate in Σ^{p_a}.
/// Never returns `pass`; `counterexample` means the derivation failed to close.
Certificate diagonal_contradiction( const SelfKernel& k, Quantify quantify = Quantify::diagonal );

/// Re-evaluates every trace step against the model.
Verdict replay_certificate( const SelfKernel& k, const Certificate& c, Quantify quantify = Quantify::diagonal );

std::string describe_step( const TraceStep& step, const std::vector<std::string>& names );

enum class Theorem5Horn
{
    not_classical_perfect,
    diagonal,
    refuted,
};

Theorem5Horn theorem5_outcome( const SelfKernel& k, const PaPartition& pa, const Certificate& c );
Verdict theorem5_check( const SelfKernel& k, const std::vector<std::string>& names,
                        Quantify quantify = Quantify::diagonal );

} // namespace spm
