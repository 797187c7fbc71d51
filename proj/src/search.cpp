#include "spm/search.hpp"

#include "spm/spaces.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <random>
#include <thread>
#include <tuple>

namespace spm
{

std::string_view to_string( SearchMode mode )
{
    return mode == SearchMode::exhaustive ? "exhaustive" : "sampled";
}

TheoremTallies& TheoremTallies::operator+=( const TheoremTallies& o )
{
    theorem1_checked += o.theorem1_checked;
    theorem1_failed += o.theorem1_failed;
    theorem2_checked += o.theorem2_checked;
    theorem2_failed += o.theorem2_failed;
    theorem3_premise += o.theorem3_premise;
    theorem3_failed += o.theorem3_failed;
    theorem4_contradiction += o.theorem4_contradiction;
    theorem4_premise_unsatisfiable += o.theorem4_premise_unsatisfiable;
    theorem4_counterexample += o.theorem4_counterexample;
    theorem5_first_horn += o.theorem5_first_horn;
    theorem5_diagonal_horn += o.theorem5_diagonal_horn;
    theorem5_refuted += o.theorem5_refuted;
    partition_violations += o.partition_violations;
    replay_failures += o.replay_failures;
    return *this;
}

namespace
{

std::uint64_t ipow( std::uint64_t base, std::uint64_t exp )
{
    std::uint64_t r = 1;
    while ( exp-- > 0 )
        r *= base;
    return r;
}

// Focus property from a classical test built out of the mask, so the
// partition goes through the same κ / inverse-test path as declared models.
std::pair<StateSet, StateSet> focus_from_mask( std::size_t n, std::uint64_t mask )
{
    Test t{ "a", std::vector<OutcomeSet>( n ) };
    for ( std::size_t i = 0; i < n; ++i )
        t.outcomes[i] = ( ( mask >> i ) & 1U ) ? OutcomeSet::yes() : OutcomeSet::no();
    return { certain_yes_set( t ), certain_yes_set( inverse_test( t ) ) };
}

bool is_partition( const StateSet& a, const StateSet& b )
{
    return ( a & b ).empty() && ( a | b ).count() == a.universe();
}

struct Partial
{
    std::uint64_t examined = 0;
    std::uint64_t rejected = 0;
    std::uint64_t premise = 0;
    std::uint64_t pa_found = 0;
    std::optional<std::uint64_t> first;
    TheoremTallies tallies;

    void merge( const Partial& o )
    {
        examined += o.examined;
        rejected += o.rejected;
        premise += o.premise;
        pa_found += o.pa_found;
        if ( o.first && ( !first || *o.first < *first ) )
            first = o.first;
        tallies += o.tallies;
    }
};

void evaluate( const SelfKernel& k, std::uint64_t index, Quantify quantify, Partial& out )
{
    ++out.examined;
    auto& t = out.tallies;
    if ( !is_partition( k.focus_actual, k.focus_inverse ) )
        ++t.partition_violations;
    if ( !k.relation.surjective() )
    {
        ++out.rejected;
        return;
    }

    const auto n = k.size();
    const auto& o = k.relation;

    if ( check_inversion( o, k.alpha, InversionMode::relational ).valid )
    {
        ++out.premise;
        ++t.theorem1_checked;
        if ( theorem1_counterexample( o, k.alpha, k.focus_actual, k.focus_inverse ) )
            ++t.theorem1_failed;
    }

    for ( StateIndex m = 0; m < n; ++m )
    {
        if ( !classically_correlated_at( o, m, k.focus_actual, k.focus_inverse ) )
            continue;
        for ( StateIndex ms = 0; ms < n; ++ms )
        {
            if ( !classically_correlated_at( o, ms, k.focus_inverse, k.focus_actual ) )
                continue;
            ++t.theorem2_checked;
            if ( !is_inversion_image( o, m, ms, InversionMode::relational ) )
                ++t.theorem2_failed;
        }
    }

    auto pa = derive_pa( k );
    if ( !is_partition( pa.pa_states, pa.pa_perp_states ) )
        ++t.partition_violations;
    switch ( theorem3_outcome( k, pa ) )
    {
    case Theorem3Outcome::premise_violated: break;
    case Theorem3Outcome::pass: ++t.theorem3_premise; break;
    case Theorem3Outcome::fail:
        ++t.theorem3_premise;
        ++t.theorem3_failed;
        break;
    }

    auto cert = diagonal_contradiction( k, quantify );
    switch ( cert.kind )
    {
    case CertificateKind::contradiction: ++t.theorem4_contradiction; break;
    case CertificateKind::premise_unsatisfiable: ++t.theorem4_premise_unsatisfiable; break;
    case CertificateKind::counterexample:
    case CertificateKind::pass:
        ++t.theorem4_counterexample;
        ++out.pa_found;
        if ( !out.first || index < *out.first )
            out.first = index;
        break;
    }
    if ( !replay_certificate( k, cert, quantify ).passed() )
        ++t.replay_failures;

    switch ( theorem5_outcome( k, pa, cert ) )
    {
    case Theorem5Horn::not_classical_perfect: ++t.theorem5_first_horn; break;
    case Theorem5Horn::diagonal: ++t.theorem5_diagonal_horn; break;
    case Theorem5Horn::refuted: ++t.theorem5_refuted; break;
    }
}

// Runs body(begin, end, partial) over [0, count) split into `jobs` ranges.
template <typename Body>
Partial run_partitioned( std::uint64_t count, unsigned jobs, Body body )
{
    jobs = std::max( 1U, jobs );
    std::vector<Partial> parts( jobs );
    std::uint64_t chunk = ( count + jobs - 1 ) / jobs;
    std::vector<std::thread> threads;
    for ( unsigned j = 0; j < jobs; ++j )
    {
        auto begin = std::min( count, chunk * j );
        auto end = std::min( count, begin + chunk );
        if ( jobs == 1 )
            body( begin, end, parts[j] );
        else
            threads.emplace_back( [&, begin, end, j] { body( begin, end, parts[j] ); } );
    }
    for ( auto& th : threads )
        th.join();
    Partial total;
    for ( const auto& p : parts )
        total.merge( p );
    return total;
}

std::uint64_t uniform_below( std::mt19937_64& rng, std::uint64_t bound )
{
    const std::uint64_t threshold = ( 0 - bound ) % bound;
    for ( ;; )
    {
        std::uint64_t x = rng();
        if ( x >= threshold )
            return x % bound;
    }
}

} // namespace

std::uint64_t candidate_count( int n )
{
    if ( n < 1 )
        return 0;
    const auto un = static_cast<std::uint64_t>( n );
    return ipow( 3, un * un ) * ( ipow( 2, un ) - 2 ) * ipow( un, un );
}

std::uint64_t grid_size( int max_states )
{
    std::uint64_t total = 0;
    for ( int n = 1; n <= max_states; ++n )
        total += candidate_count( n );
    return total;
}

SelfKernel decode_candidate( int max_states, std::uint64_t index )
{
    int n = 1;
    for ( ; n <= max_states; ++n )
    {
        auto c = candidate_count( n );
        if ( index < c )
            break;
        index -= c;
    }
    if ( n > max_states )
        throw ModelError{ ErrorKind::bounds_too_large, "candidate index outside the grid" };

    const auto un = static_cast<std::size_t>( n );
    const auto alphas = ipow( un, un );
    const auto masks = ipow( 2, un ) - 2;

    auto alpha_code = index % alphas;
    index /= alphas;
    auto mask = index % masks + 1;
    auto rel_code = index / masks;

    SelfKernel k;
    k.relation = OutcomeTable{ un, un };
    for ( std::size_t cell = un * un; cell-- > 0; )
    {
        k.relation.set( cell / un, cell % un, OutcomeSet::from_code( static_cast<int>( rel_code % 3 ) ) );
        rel_code /= 3;
    }
    std::tie( k.focus_actual, k.focus_inverse ) = focus_from_mask( un, mask );
    k.alpha.assign( un, 0 );
    for ( std::size_t m = un; m-- > 0; )
    {
        k.alpha[m] = alpha_code % un;
        alpha_code /= un;
    }
    return k;
}

SearchReport search_models( const SearchOptions& options )
{
    if ( options.max_states < 1 )
        throw ModelError{ ErrorKind::bounds_too_large, "max-states must be at least 1" };
    if ( options.mode == SearchMode::exhaustive && options.max_states > max_exhaustive_states )
        throw ModelError{ ErrorKind::bounds_too_large, "exhaustive search is limited to " +
                                                               std::to_string( max_exhaustive_states ) + " states" };
    if ( options.mode == SearchMode::sampled && options.max_states > max_sampled_states )
        throw ModelError{ ErrorKind::bounds_too_large,
                          "sampled search is limited to " + std::to_string( max_sampled_states ) + " states" };
    if ( options.mode == SearchMode::sampled && options.samples < 1 )
        throw ModelError{ ErrorKind::bounds_too_large, "sampled search needs at least one sample" };
    if ( options.seed < 0 )
        throw ModelError{ ErrorKind::invalid_seed, "seed must be non-negative" };

    auto started = std::chrono::steady_clock::now();
    const auto grid = grid_size( options.max_states );
    const int max_states = options.max_states;
    const auto quantify = options.quantify;

    Partial total;
    if ( options.mode == SearchMode::exhaustive )
    {
        total = run_partitioned( grid, options.jobs, [&]( std::uint64_t b, std::uint64_t e, Partial& out ) {
            for ( auto i = b; i < e; ++i )
                evaluate( decode_candidate( max_states, i ), i, quantify, out );
        } );
    }
    else
    {
        std::mt19937_64 rng{ static_cast<std::uint64_t>( options.seed ) };
        std::vector<std::uint64_t> picks( options.samples );
        for ( auto& p : picks )
            p = uniform_below( rng, grid );
        total = run_partitioned( picks.size(), options.jobs, [&]( std::uint64_t b, std::uint64_t e, Partial& out ) {
            for ( auto i = b; i < e; ++i )
                evaluate( decode_candidate( max_states, picks[i] ), picks[i], quantify, out );
        } );
    }

    SearchReport r;
    r.max_states = options.max_states;
    r.mode = options.mode;
    r.seed = options.seed;
    r.samples = options.mode == SearchMode::sampled ? options.samples : 0;
    r.quantify = quantify;
    r.models_examined = total.examined;
    r.rejected = total.rejected;
    r.premise_satisfying = total.premise;
    r.pa_perfect_found = total.pa_found;
    r.first_counterexample = total.first;
    r.tallies = total.tallies;
    r.duration_seconds =
            std::chrono::duration<double>( std::chrono::steady_clock::now() - started ).count();
    return r;
}

ObservationSweepReport sweep_observation_models( int max_system, int max_observer, unsigned jobs )
{
    if ( max_system < 1 || max_observer < 1 || max_system > 3 || max_observer > 3 )
        throw ModelError{ ErrorKind::bounds_too_large, "observation sweep is limited to 1..3 states per side" };

    ObservationSweepReport report;
    report.max_system = max_system;
    report.max_observer = max_observer;

    for ( int ns = 1; ns <= max_system; ++ns )
        for ( int nm = 1; nm <= max_observer; ++nm )
        {
            const auto uns = static_cast<std::size_t>( ns );
            const auto unm = static_cast<std::size_t>( nm );
            const auto relations = ipow( 3, uns * unm );
            const auto masks = ipow( 2, uns );
            const auto alphas = ipow( unm, unm );

            auto part = run_partitioned( relations, jobs, [&]( std::uint64_t b, std::uint64_t e, Partial& out ) {
                OutcomeTable o{ uns, unm };
                std::vector<StateIndex> alpha( unm );
                for ( auto r = b; r < e; ++r )
                {
                    auto code = r;
                    for ( std::size_t cell = uns * unm; cell-- > 0; )
                    {
                        o.set( cell / unm, cell % unm, OutcomeSet::from_code( static_cast<int>( code % 3 ) ) );
                        code /= 3;
                    }
                    const bool valid = o.surjective();
                    for ( std::uint64_t mask = 0; mask < masks; ++mask )
                    {
                        auto [actual, inverse] = focus_from_mask( uns, mask );
                        out.examined += alphas;
                        if ( !is_partition( actual, inverse ) )
                            out.tallies.partition_violations += alphas;
                        if ( !valid )
                        {
                            out.rejected += alphas;
                            continue;
                        }

                        for ( StateIndex m = 0; m < unm; ++m )
                            for ( StateIndex ms = 0; ms < unm; ++ms )
                                if ( classically_correlated_at( o, m, actual, inverse ) &&
                                     classically_correlated_at( o, ms, inverse, actual ) )
                                {
                                    ++out.tallies.theorem2_checked;
                                    if ( !is_inversion_image( o, m, ms, InversionMode::relational ) )
                                        ++out.tallies.theorem2_failed;
                                }

                        for ( std::uint64_t a = 0; a < alphas; ++a )
                        {
                            auto ac = a;
                            for ( std::size_t m = unm; m-- > 0; )
                            {
                                alpha[m] = ac % unm;
                                ac /= unm;
                            }
                            if ( !check_inversion( o, alpha, InversionMode::relational ).valid )
                                continue;
                            ++out.tallies.theorem1_checked;
                            if ( theorem1_counterexample( o, alpha, actual, inverse ) )
                                ++out.tallies.theorem1_failed;
                        }
                    }
                }
            } );
            report.models_examined += part.examined;
            report.valid_models += part.examined - part.rejected;
            report.theorem1_premise += part.tallies.theorem1_checked;
            report.theorem1_failed += part.tallies.theorem1_failed;
            report.theorem2_pairs += part.tallies.theorem2_checked;
            report.theorem2_failed += part.tallies.theorem2_failed;
            report.partition_violations += part.tallies.partition_violations;
        }
    return report;
}

} // namespace spm
