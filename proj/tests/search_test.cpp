#include "support.hpp"

#include "spm/search.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace spm;
using namespace spm_test;

namespace
{

struct OracleCounts
{
    std::uint64_t examined = 0;
    std::uint64_t rejected = 0;
    std::uint64_t premise = 0;
    std::uint64_t contradiction = 0;
    std::uint64_t unsatisfiable = 0;
    std::uint64_t first_horn = 0;
};

OracleCounts oracle_counts( int n )
{
    OracleCounts c;
    oracle::for_each_candidate( n, [&]( const oracle::SelfModel& m ) {
        ++c.examined;
        if ( !oracle::surjective( m ) )
        {
            ++c.rejected;
            return;
        }
        if ( oracle::alpha_valid( m ) )
            ++c.premise;
        if ( oracle::diagonal_kind( m ) == oracle::Kind::contradiction )
            ++c.contradiction;
        else
            ++c.unsatisfiable;
        auto p = oracle::pa( m );
        if ( std::find( p.begin(), p.end(), true ) == p.end() )
            ++c.first_horn;
    } );
    return c;
}

SearchReport without_timing( SearchReport r )
{
    r.duration_seconds = 0;
    return r;
}

bool same_report( const SearchReport& a, const SearchReport& b )
{
    return a.max_states == b.max_states && a.mode == b.mode && a.seed == b.seed && a.samples == b.samples &&
           a.models_examined == b.models_examined && a.rejected == b.rejected &&
           a.premise_satisfying == b.premise_satisfying && a.pa_perfect_found == b.pa_perfect_found &&
           a.first_counterexample == b.first_counterexample && a.tallies == b.tallies;
}

ErrorKind kind_of( const SearchOptions& o )
{
    try
    {
        search_models( o );
    }
    catch ( const ModelError& e )
    {
        return e.kind();
    }
    FAIL( "expected ModelError" );
    return ErrorKind::invalid_model;
}

struct SweepCounts
{
    std::uint64_t valid = 0;
    std::uint64_t theorem1 = 0;
    std::uint64_t theorem2 = 0;
};

SweepCounts oracle_sweep( int max_system, int max_observer )
{
    using oracle::Cell;
    SweepCounts c;
    for ( int ns = 1; ns <= max_system; ++ns )
        for ( int nm = 1; nm <= max_observer; ++nm )
        {
            const int cells = ns * nm;
            const int alphas = oracle::ipow( nm, nm );
            for ( int code = 0; code < oracle::ipow( 3, cells ); ++code )
            {
                std::vector<std::vector<Cell>> o( ns, std::vector<Cell>( nm ) );
                bool y = false;
                bool n = false;
                for ( int cell = 0, rest = code; cell < cells; ++cell, rest /= 3 )
                {
                    auto v = static_cast<Cell>( rest % 3 );
                    o[cell / nm][cell % nm] = v;
                    y = y || v != oracle::no;
                    n = n || v != oracle::yes;
                }
                if ( !y || !n )
                    continue;

                auto image = [&]( int m, int i ) {
                    for ( int s = 0; s < ns; ++s )
                        if ( o[s][i] != oracle::swap( o[s][m] ) )
                            return false;
                    return true;
                };
                for ( int mask = 0; mask < ( 1 << ns ); ++mask )
                {
                    c.valid += alphas;
                    auto correlated = [&]( int m, bool positive ) {
                        for ( int s = 0; s < ns; ++s )
                        {
                            const bool in = ( ( mask >> s ) & 1 ) == ( positive ? 1 : 0 );
                            if ( o[s][m] != ( in ? oracle::yes : oracle::no ) )
                                return false;
                        }
                        return true;
                    };
                    for ( int m = 0; m < nm; ++m )
                        for ( int ms = 0; ms < nm; ++ms )
                            if ( correlated( m, true ) && correlated( ms, false ) )
                                ++c.theorem2;
                    for ( int a = 0; a < alphas; ++a )
                    {
                        bool ok = true;
                        for ( int m = 0, rest = a; m < nm; ++m, rest /= nm )
                            ok = ok && image( m, rest % nm );
                        c.theorem1 += ok ? 1 : 0;
                    }
                }
            }
        }
    return c;
}

} // namespace

TEST_SUITE( "search" )
{
    TEST_CASE( "grid sizes" )
    {
        CHECK( candidate_count( 1 ) == 0 );
        CHECK( candidate_count( 2 ) == 81 * 2 * 4 );
        CHECK( candidate_count( 3 ) == 19683ULL * 6 * 27 );
        CHECK( grid_size( 3 ) == 648 + 3188646 );

        std::uint64_t counted = 0;
        oracle::for_each_candidate( 2, [&]( const oracle::SelfModel& ) { ++counted; } );
        CHECK( counted == candidate_count( 2 ) );
    }

    TEST_CASE( "candidate decoding order" )
    {
        auto first = decode_candidate( 2, 0 );
        for ( StateIndex s = 0; s < 2; ++s )
            for ( StateIndex m = 0; m < 2; ++m )
                CHECK( first.relation.at( s, m ) == OutcomeSet::no() );
        CHECK( first.focus_actual == make_set( 2, { 0 } ) );
        CHECK( first.focus_inverse == make_set( 2, { 1 } ) );
        CHECK( first.alpha == std::vector<StateIndex>{ 0, 0 } );

        CHECK( decode_candidate( 2, 1 ).alpha == std::vector<StateIndex>{ 0, 1 } );
        CHECK( decode_candidate( 2, 2 ).alpha == std::vector<StateIndex>{ 1, 0 } );
        CHECK( decode_candidate( 2, 4 ).focus_actual == make_set( 2, { 1 } ) );

        // The last relation cell is the least significant digit.
        auto eighth = decode_candidate( 2, 8 );
        CHECK( eighth.relation.at( 1, 1 ) == OutcomeSet::yes() );
        CHECK( eighth.relation.at( 0, 0 ) == OutcomeSet::no() );

        auto last = decode_candidate( 2, 647 );
        for ( StateIndex s = 0; s < 2; ++s )
            for ( StateIndex m = 0; m < 2; ++m )
                CHECK( last.relation.at( s, m ) == OutcomeSet::both() );
        CHECK( last.alpha == std::vector<StateIndex>{ 1, 1 } );

        CHECK_THROWS_AS( decode_candidate( 2, 648 ), ModelError );
        CHECK( decode_candidate( 3, 648 ).size() == 3 );
    }

    TEST_CASE( "the two-state grid is a prefix of the three-state grid" )
    {
        for ( std::uint64_t i = 0; i < candidate_count( 2 ); ++i )
        {
            auto a = decode_candidate( 2, i );
            auto b = decode_candidate( 3, i );
            CHECK( b.size() == 2 );
            CHECK( a.focus_actual == b.focus_actual );
            CHECK( a.alpha == b.alpha );
            for ( StateIndex s = 0; s < 2; ++s )
                for ( StateIndex m = 0; m < 2; ++m )
                    CHECK( a.relation.at( s, m ) == b.relation.at( s, m ) );
        }
    }

    TEST_CASE( "every decoded candidate is distinct" )
    {
        std::set<std::string> seen;
        for ( std::uint64_t i = 0; i < candidate_count( 2 ); ++i )
        {
            auto k = decode_candidate( 2, i );
            std::string key;
            for ( StateIndex s = 0; s < 2; ++s )
                for ( StateIndex m = 0; m < 2; ++m )
                    key += static_cast<char>( '0' + k.relation.at( s, m ).code() );
            key += k.focus_actual.contains( 0 ) ? 'a' : 'b';
            for ( auto a : k.alpha )
                key += static_cast<char>( '0' + a );
            seen.insert( key );
        }
        CHECK( seen.size() == 648 );
    }

    TEST_CASE( "exhaustive two-state sweep matches the oracle" )
    {
        auto r = search_models( { 2, SearchMode::exhaustive } );
        auto c = oracle_counts( 2 );
        CHECK( r.models_examined == 648 );
        CHECK( r.models_examined == c.examined );
        CHECK( r.rejected == c.rejected );
        CHECK( r.premise_satisfying == c.premise );
        CHECK( r.tallies.theorem1_checked == c.premise );
        CHECK( r.tallies.theorem4_contradiction == c.contradiction );
        CHECK( r.tallies.theorem4_premise_unsatisfiable == c.unsatisfiable );
        CHECK( r.tallies.theorem5_first_horn == c.first_horn );
        CHECK( r.pa_perfect_found == 0 );
        CHECK_FALSE( r.first_counterexample.has_value() );
        CHECK( r.tallies.theorem1_failed == 0 );
        CHECK( r.tallies.theorem2_failed == 0 );
        CHECK( r.tallies.theorem3_failed == 0 );
        CHECK( r.tallies.partition_violations == 0 );
        CHECK( r.tallies.replay_failures == 0 );
    }

    TEST_CASE( "one state leaves nothing to search" )
    {
        auto r = search_models( { 1, SearchMode::exhaustive } );
        CHECK( r.models_examined == 0 );
        CHECK( r.pa_perfect_found == 0 );
    }

    TEST_CASE( "full quantification over two states" )
    {
        SearchOptions o{ 2, SearchMode::exhaustive };
        o.quantify = Quantify::full;
        auto r = search_models( o );
        CHECK( r.pa_perfect_found == 0 );
        CHECK( r.tallies.replay_failures == 0 );
        CHECK( r.quantify == Quantify::full );
    }

    TEST_CASE( "reports do not depend on the number of jobs" )
    {
        SearchOptions serial{ 2, SearchMode::exhaustive };
        SearchOptions parallel = serial;
        parallel.jobs = 3;
        CHECK( same_report( search_models( serial ), search_models( parallel ) ) );

        SearchOptions sampled{ 3, SearchMode::sampled, 5000, 17 };
        SearchOptions sampled_parallel = sampled;
        sampled_parallel.jobs = 4;
        CHECK( same_report( search_models( sampled ), search_models( sampled_parallel ) ) );
    }

    TEST_CASE( "sampling is seed-deterministic" )
    {
        SearchOptions o{ 4, SearchMode::sampled, 3000, 5 };
        auto a = without_timing( search_models( o ) );
        auto b = without_timing( search_models( o ) );
        CHECK( same_report( a, b ) );
        CHECK( a.models_examined == 3000 );
        CHECK( a.pa_perfect_found == 0 );

        o.seed = 6;
        auto c = search_models( o );
        CHECK_FALSE( c.tallies == a.tallies );
    }

    TEST_CASE( "option errors" )
    {
        CHECK( kind_of( { 4, SearchMode::exhaustive } ) == ErrorKind::bounds_too_large );
        CHECK( kind_of( { 0, SearchMode::exhaustive } ) == ErrorKind::bounds_too_large );
        CHECK( kind_of( { 6, SearchMode::sampled } ) == ErrorKind::bounds_too_large );
        CHECK( kind_of( { 2, SearchMode::sampled, 0 } ) == ErrorKind::bounds_too_large );
        CHECK( kind_of( { 2, SearchMode::sampled, 10, -1 } ) == ErrorKind::invalid_seed );
    }

    TEST_CASE( "observation sweep on small bounds" )
    {
        auto r = sweep_observation_models( 2, 2 );
        CHECK( r.theorem1_failed == 0 );
        CHECK( r.theorem2_failed == 0 );
        CHECK( r.partition_violations == 0 );
        CHECK( r.theorem1_premise > 0 );
        CHECK( r.theorem2_pairs > 0 );

        // Count of raw (relation, focus mask, alpha) triples per size pair.
        std::uint64_t expected = 0;
        for ( int ns = 1; ns <= 2; ++ns )
            for ( int nm = 1; nm <= 2; ++nm )
                expected += static_cast<std::uint64_t>( oracle::ipow( 3, ns * nm ) * ( 1 << ns ) *
                                                        oracle::ipow( nm, nm ) );
        CHECK( r.models_examined == expected );

        auto c = oracle_sweep( 2, 2 );
        CHECK( r.valid_models == c.valid );
        CHECK( r.theorem1_premise == c.theorem1 );
        CHECK( r.theorem2_pairs == c.theorem2 );

        auto wide = sweep_observation_models( 2, 3 );
        auto cw = oracle_sweep( 2, 3 );
        CHECK( wide.valid_models == cw.valid );
        CHECK( wide.theorem1_premise == cw.theorem1 );
        CHECK( wide.theorem2_pairs == cw.theorem2 );
        CHECK( wide.theorem1_failed == 0 );

        auto parallel = sweep_observation_models( 2, 2, 3 );
        CHECK( parallel.theorem1_premise == r.theorem1_premise );
        CHECK( parallel.theorem2_pairs == r.theorem2_pairs );
        CHECK_THROWS_AS( sweep_observation_models( 4, 1 ), ModelError );
    }
}
