#include "support.hpp"

#include "spm/diagonal.hpp"

#include <doctest.h>

using namespace spm;
using namespace spm_test;

namespace
{

SelfKernel self2()
{
    auto doc = load_fixture( "self2.spm" );
    auto bound = bind_relation( doc, "self" );
    return make_kernel( { bound.model, "" } );
}

SelfKernel kernel( const std::vector<std::string>& rows, std::initializer_list<std::size_t> focus,
                   std::vector<StateIndex> alpha = {} )
{
    SelfKernel k;
    k.relation = make_table( rows );
    const auto n = rows.size();
    k.focus_actual = make_set( n, focus );
    k.focus_inverse = k.focus_actual.complement();
    k.alpha = std::move( alpha );
    return k;
}

std::vector<bool> as_bools( const StateSet& s )
{
    std::vector<bool> out;
    for ( std::size_t i = 0; i < s.universe(); ++i )
        out.push_back( s.contains( i ) );
    return out;
}

void check_against_oracle( const oracle::SelfModel& m )
{
    auto k = oracle::to_kernel( m );
    auto pa = derive_pa( k );
    REQUIRE( as_bools( pa.pa_states ) == oracle::pa( m ) );
    CHECK( ( pa.pa_states & pa.pa_perp_states ).empty() );
    CHECK( ( pa.pa_states | pa.pa_perp_states ).count() == k.size() );

    for ( auto q : { Quantify::diagonal, Quantify::full } )
    {
        auto cert = diagonal_contradiction( k, q );
        CHECK( cert.kind != CertificateKind::counterexample );
        CHECK( cert.kind != CertificateKind::pass );
        CHECK( replay_certificate( k, cert, q ).status == VerdictStatus::pass );
        CHECK( theorem5_outcome( k, pa, cert ) != Theorem5Horn::refuted );
        if ( q == Quantify::diagonal )
            CHECK( ( cert.kind == CertificateKind::contradiction ) ==
                   ( oracle::diagonal_kind( m ) == oracle::Kind::contradiction ) );
    }
}

} // namespace

TEST_SUITE( "diagonal" )
{
    TEST_CASE( "p_a on the self-observing fixture" )
    {
        auto k = self2();
        // m1 reports a exactly and its swap m2 reports a_perp; m2 answers no at m1.
        auto pa = derive_pa( k );
        CHECK( pa.pa_states == make_set( 2, { 0 } ) );
        CHECK( pa.pa_perp_states == make_set( 2, { 1 } ) );
        CHECK( as_bools( pa.pa_states ) == oracle::pa( oracle::from_kernel( k ) ) );
    }

    TEST_CASE( "p_a is empty without perfect columns" )
    {
        auto flat = kernel( { "yy", "nn" }, { 0 } );
        CHECK( derive_pa( flat ).pa_states.empty() );

        for ( int code = 0; code < 3; ++code )
            for ( bool in_focus : { true, false } )
            {
                SelfKernel one;
                one.relation = OutcomeTable{ 1, 1 };
                one.relation.set( 0, 0, OutcomeSet::from_code( code ) );
                one.focus_actual = StateSet{ 1 };
                if ( in_focus )
                    one.focus_actual.insert( 0 );
                one.focus_inverse = one.focus_actual.complement();
                CHECK( derive_pa( one ).pa_states.empty() );
            }
    }

    TEST_CASE( "kernel validation" )
    {
        auto k = kernel( { "yn", "ny" }, { 0 } );
        k.focus_inverse = make_set( 2, { 0, 1 } );
        CHECK_THROWS_AS( derive_pa( k ), ModelError );

        SelfKernel rect;
        rect.relation = make_table( { "yn" } );
        rect.focus_actual = make_set( 2, { 0 } );
        rect.focus_inverse = make_set( 2, { 1 } );
        try
        {
            derive_pa( rect );
            FAIL( "expected NotClassicalFocus" );
        }
        catch ( const ModelError& e )
        {
            CHECK( e.kind() == ErrorKind::not_classical_focus );
        }

        auto partial = kernel( { "yn", "ny" }, { 0 }, { 1 } );
        CHECK_THROWS_AS( require_valid_self_kernel( partial ), ModelError );

        auto doc = load_fixture( "self2.spm" );
        auto bound = bind_relation( doc, "self" );
        CHECK_THROWS_AS( make_kernel( { bound.model, "missing" } ), ModelError );
    }

    TEST_CASE( "p_a classicality needs every state to qualify" )
    {
        auto k = self2();
        CHECK( theorem3_outcome( k, derive_pa( k ) ) == Theorem3Outcome::premise_violated );
        auto v = theorem3_check( k, { "m1", "m2" } );
        CHECK( v.status == VerdictStatus::premise_violated );
        CHECK( v.witness == std::vector<std::string>{ "m2" } );

        // A forged partition with every state qualifying passes the exactness test.
        PaPartition all{ StateSet::full( 2 ), StateSet{ 2 } };
        CHECK( theorem3_outcome( k, all ) == Theorem3Outcome::pass );
        PaPartition overlap{ StateSet::full( 2 ), make_set( 2, { 1 } ) };
        CHECK( theorem3_outcome( k, overlap ) == Theorem3Outcome::fail );
    }

    TEST_CASE( "contradiction certificate on the self-observing fixture" )
    {
        auto k = self2();
        auto cert = diagonal_contradiction( k );
        CHECK( cert.kind == CertificateKind::contradiction );
        CHECK( cert.candidate == StateIndex{ 0 } );
        CHECK( cert.image == StateIndex{ 1 } );
        CHECK( cert.forced_state == StateIndex{ 1 } );
        CHECK( replay_certificate( k, cert ).status == VerdictStatus::pass );

        std::vector<StepRule> rules;
        for ( const auto& s : cert.trace )
            rules.push_back( s.rule );
        CHECK( rules == std::vector<StepRule>{ StepRule::pa_yes, StepRule::pa_no, StepRule::pa_yes, StepRule::pa_no,
                                               StepRule::inverse_completeness, StepRule::image_no,
                                               StepRule::identification, StepRule::forced_yes } );
        const std::vector<std::string> names{ "m1", "m2" };
        CHECK( describe_step( cert.trace.front(), names ) ==
               "p_a correlation at m1: m1 in kappa(p_a) [true] <=> o(m1,m1)=yes; o(m1,m1)=yes" );
        CHECK( describe_step( cert.trace[5], names ) ==
               "p_a_perp correlation at alpha(m1)=m2: m2 in kappa(p_a_perp) <=> o(m2,m2)=no, forcing no; "
               "model has o(m2,m2)=yes" );

        auto full = diagonal_contradiction( k, Quantify::full );
        CHECK( full.kind == CertificateKind::contradiction );
        CHECK( replay_certificate( k, full, Quantify::full ).status == VerdictStatus::pass );
    }

    TEST_CASE( "candidates without an image leave the premise unsatisfiable" )
    {
        auto k = kernel( { "ny", "nn" }, { 0 } );
        auto cert = diagonal_contradiction( k );
        CHECK( cert.kind == CertificateKind::premise_unsatisfiable );
        REQUIRE_FALSE( cert.trace.empty() );
        CHECK( cert.trace.back().rule == StepRule::no_image );
        CHECK( cert.trace.back().holds );
        CHECK( replay_certificate( k, cert ).status == VerdictStatus::pass );
    }

    TEST_CASE( "tampered certificates do not replay" )
    {
        auto k = self2();
        auto cert = diagonal_contradiction( k );

        auto flipped = cert;
        flipped.trace[0].entry = OutcomeSet::no();
        CHECK( replay_certificate( k, flipped ).status == VerdictStatus::fail );

        auto moved = cert;
        moved.trace[4].state = 0;
        CHECK( replay_certificate( k, moved ).status == VerdictStatus::fail );

        auto unforced = cert;
        unforced.forced_state.reset();
        CHECK( replay_certificate( k, unforced ).status == VerdictStatus::fail );

        auto outside = cert;
        outside.trace[0].state = 7;
        CHECK( replay_certificate( k, outside ).status == VerdictStatus::fail );

        // Replaying against a different model exposes the recorded entries.
        auto other = k;
        other.relation.set( 1, 1, OutcomeSet::no() );
        CHECK( replay_certificate( other, cert ).status == VerdictStatus::fail );
    }

    TEST_CASE( "no observer knows all its own properties" )
    {
        auto k = self2();
        auto v = theorem5_check( k, { "m1", "m2" } );
        CHECK( v.status == VerdictStatus::pass );
        CHECK( v.detail == "confirmed via diagonal argument (contradiction)" );

        auto flat = kernel( { "yy", "nn" }, { 0 } );
        auto first = theorem5_check( flat, { "m1", "m2" } );
        CHECK( first.status == VerdictStatus::pass );
        CHECK( first.detail == "confirmed: no state is a-classical perfect" );
    }

    TEST_CASE( "every two-state candidate agrees with the oracle" )
    {
        int seen = 0;
        oracle::for_each_candidate( 2, [&]( const oracle::SelfModel& m ) {
            ++seen;
            check_against_oracle( m );
        } );
        CHECK( seen == 648 );
    }

    TEST_CASE( "random larger candidates agree with the oracle" )
    {
        Rng rng{ 2024 };
        for ( int round = 0; round < 3000; ++round )
            check_against_oracle( oracle::random_model( rng, 3 + static_cast<int>( rng.below( 3 ) ) ) );
    }

    TEST_CASE( "swapped pairs of perfect columns" )
    {
        // Two columns that are exact swaps, each perfectly correlated with its side.
        Rng rng{ 99 };
        for ( int round = 0; round < 500; ++round )
        {
            const int n = 2 + static_cast<int>( rng.below( 3 ) );
            auto m = oracle::random_model( rng, n );
            const int col = static_cast<int>( rng.below( n ) );
            int other = static_cast<int>( rng.below( n ) );
            if ( other == col )
                other = ( col + 1 ) % n;
            for ( int s = 0; s < n; ++s )
            {
                m.o[s][col] = m.focus[s] ? oracle::yes : oracle::no;
                m.o[s][other] = oracle::swap( m.o[s][col] );
            }
            REQUIRE( oracle::classical_perfect( m, col ) );
            check_against_oracle( m );
        }
    }
}
