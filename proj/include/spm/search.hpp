#pragma once

#include "spm/diagonal.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace spm
{

enum class SearchMode
{
    exhaustive,
    sampled,
};

std::string_view to_string( SearchMode mode );

inline constexpr int max_exhaustive_states = 3;
inline constexpr int max_sampled_states = 5;

struct SearchOptions
{
    int max_states = 2;
    SearchMode mode = SearchMode::exhaustive;
    std::uint64_t samples = 100000;
    std::int64_t seed = 0;
    Quantify quantify = Quantify::diagonal;
    unsigned jobs = 1;
};

struct TheoremTallies
{
    std::uint64_t theorem1_checked = 0;
    std::uint64_t theorem1_failed = 0;
    std::uint64_t theorem2_checked = 0; // (m, m*) pairs meeting the premise
    std::uint64_t theorem2_failed = 0;
    std::uint64_t theorem3_premise = 0;
    std::uint64_t theorem3_failed = 0;
    std::uint64_t theorem4_contradiction = 0;
    std::uint64_t theorem4_premise_unsatisfiable = 0;
    std::uint64_t theorem4_counterexample = 0;
    std::uint64_t theorem5_first_horn = 0;
    std::uint64_t theorem5_diagonal_horn = 0;
    std::uint64_t theorem5_refuted = 0;
    std::uint64_t partition_violations = 0; // focus or p_a not a partition
    std::uint64_t replay_failures = 0;

    TheoremTallies& operator+=( const TheoremTallies& o );
    friend bool operator==( const TheoremTallies&, const TheoremTallies& ) = default;
};

struct SearchReport
{
    int max_states = 0;
    SearchMode mode = SearchMode::exhaustive;
    std::int64_t seed = 0;
    std::uint64_t samples = 0;
    Quantify quantify = Quantify::diagonal;
    std::uint64_t models_examined = 0;
    std::uint64_t rejected = 0; // non-surjective candidates
    std::uint64_t premise_satisfying = 0;
    std::uint64_t pa_perfect_found = 0;
    std::optional<std::uint64_t> first_counterexample; // global candidate index
    TheoremTallies tallies;
    double duration_seconds = 0.0;
};

/// Number of raw candidates with exactly n states: 3^(n^2) * (2^n - 2) * n^n.
std::uint64_t candidate_count( int n );

/// Raw candidates for all sizes 1..max_states.
std::uint64_t grid_size( int max_states );

/// Decodes a global candidate index (sizes enumerated in increasing order).
/// Relations are row-major in outcome-code order, focus masks ascend
/// (bit i set means state i in κ(a)), inversion maps are lexicographic.
SelfKernel decode_candidate( int max_states, std::uint64_t index );

/// Throws BoundsTooLarge, InvalidSeed, or InvalidModel for bad options.
SearchReport search_models( const SearchOptions& options );

struct ObservationSweepReport
{
    int max_system = 0;
    int max_observer = 0;
    std::uint64_t models_examined = 0;
    std::uint64_t valid_models = 0;
    std::uint64_t theorem1_premise = 0;
    std::uint64_t theorem1_failed = 0;
    std::uint64_t theorem2_pairs = 0;
    std::uint64_t theorem2_failed = 0;
    std::uint64_t partition_violations = 0;
};

/// Every relation over |Σ_S| <= max_system, |Σ_M| <= max_observer, every
/// classical property of S, and every map alpha on Σ_M.
ObservationSweepReport sweep_observation_models( int max_system, int max_observer, unsigned jobs = 1 );

} // namespace spm
