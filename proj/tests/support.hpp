#pragma once

#include "spm/observation.hpp"
#include "spm/speclang.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace spm_test
{

using spm::OutcomeSet;

inline std::string fixture_path( const std::string& name )
{
    return std::string{ SPM_FIXTURE_DIR } + "/" + name;
}

inline std::string read_fixture( const std::string& name )
{
    std::ifstream in{ fixture_path( name ) };
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline spm::ModelDocument load_fixture( const std::string& name )
{
    return spm::parse( read_fixture( name ) );
}

inline OutcomeSet outcome( char c )
{
    switch ( c )
    {
    case 'y': return OutcomeSet::yes();
    case 'n': return OutcomeSet::no();
    default: return OutcomeSet::both();
    }
}

// Space over states from one string per test: "yn*" means yes, no, both.
inline spm::StatePropertySpace make_space( const std::vector<std::string>& states,
                                           const std::vector<std::pair<std::string, std::string>>& tests,
                                           std::vector<spm::Property> properties = {} )
{
    std::vector<std::pair<std::string, spm::StatePropertySpace::TestEntries>> decls;
    for ( const auto& [id, row] : tests )
    {
        spm::StatePropertySpace::TestEntries e;
        for ( std::size_t i = 0; i < states.size(); ++i )
            e[states[i]] = outcome( row[i] );
        decls.emplace_back( id, e );
    }
    if ( properties.empty() )
        for ( const auto& [id, row] : tests )
            properties.push_back( { "p_" + id, { id } } );
    return { "space", states, decls, properties };
}

// rows[s][m] over observed s and observer m.
inline spm::OutcomeTable make_table( const std::vector<std::string>& rows )
{
    spm::OutcomeTable o{ rows.size(), rows.front().size() };
    for ( std::size_t s = 0; s < rows.size(); ++s )
        for ( std::size_t m = 0; m < rows[s].size(); ++m )
            o.set( s, m, outcome( rows[s][m] ) );
    return o;
}

inline spm::StateSet make_set( std::size_t n, std::initializer_list<std::size_t> members )
{
    spm::StateSet out{ n };
    for ( auto m : members )
        out.insert( m );
    return out;
}

class Rng
{
public:
    explicit Rng( std::uint64_t seed ) : engine_{ seed } {}

    std::size_t below( std::size_t n ) { return std::uniform_int_distribution<std::size_t>{ 0, n - 1 }( engine_ ); }
    bool coin() { return below( 2 ) == 1; }
    OutcomeSet outcome() { return OutcomeSet::from_code( static_cast<int>( below( 3 ) ) ); }

private:
    std::mt19937_64 engine_;
};

// Brute-force reference for self-observing models, written against plain
// vectors so it shares nothing with the library's set and table types.
namespace oracle
{

enum Cell
{
    no = 0,
    yes = 1,
    both = 2,
};

struct SelfModel
{
    int n = 0;
    std::vector<std::vector<Cell>> o; // o[s][m]
    std::vector<bool> focus;          // state in κ(a)
    std::vector<int> alpha;
};

inline Cell swap( Cell c )
{
    return c == yes ? no : c == no ? yes : both;
}

inline bool surjective( const SelfModel& k )
{
    bool y = false;
    bool x = false;
    for ( const auto& row : k.o )
        for ( auto c : row )
        {
            y = y || c != no;
            x = x || c != yes;
        }
    return y && x;
}

inline bool is_image( const SelfModel& k, int m, int image )
{
    for ( int s = 0; s < k.n; ++s )
        if ( k.o[s][image] != swap( k.o[s][m] ) )
            return false;
    return true;
}

inline bool alpha_valid( const SelfModel& k )
{
    for ( int m = 0; m < k.n; ++m )
        if ( !is_image( k, m, k.alpha[m] ) )
            return false;
    return true;
}

// yes exactly on `in`, no exactly on the rest.
inline bool correlated( const SelfModel& k, int m, bool positive )
{
    for ( int s = 0; s < k.n; ++s )
    {
        bool in = k.focus[s] == positive;
        if ( ( k.o[s][m] == yes ) != in || ( k.o[s][m] == no ) != !in )
            return false;
    }
    return true;
}

inline bool yes_on( const SelfModel& k, int m, bool positive )
{
    for ( int s = 0; s < k.n; ++s )
        if ( k.focus[s] == positive && k.o[s][m] != yes )
            return false;
    return true;
}

inline bool classical_perfect( const SelfModel& k, int m )
{
    if ( !yes_on( k, m, true ) || !correlated( k, m, true ) )
        return false;
    for ( int c = 0; c < k.n; ++c )
        if ( is_image( k, m, c ) && yes_on( k, c, false ) )
            return true;
    return false;
}

inline std::vector<bool> pa( const SelfModel& k )
{
    std::vector<bool> out( k.n );
    for ( int m = 0; m < k.n; ++m )
        out[m] = classical_perfect( k, m );
    return out;
}

enum class Kind
{
    contradiction,
    premise_unsatisfiable,
};

// Diagonal candidates are states whose self-report matches p_a membership;
// the argument closes on any candidate with an inversion image outside p_a.
inline Kind diagonal_kind( const SelfModel& k )
{
    auto p = pa( k );
    for ( int m = 0; m < k.n; ++m )
    {
        bool candidate = p[m] == ( k.o[m][m] == yes ) && !p[m] == ( k.o[m][m] == no );
        if ( !candidate )
            continue;
        for ( int c = 0; c < k.n; ++c )
            if ( is_image( k, m, c ) && !p[c] )
                return Kind::contradiction;
    }
    return Kind::premise_unsatisfiable;
}

inline int ipow( int b, int e )
{
    int r = 1;
    while ( e-- > 0 )
        r *= b;
    return r;
}

// Every raw candidate with n states, in no particular order.
template <class F>
void for_each_candidate( int n, F&& f )
{
    SelfModel k;
    k.n = n;
    k.o.assign( n, std::vector<Cell>( n ) );
    k.focus.assign( n, false );
    k.alpha.assign( n, 0 );
    for ( int r = 0; r < ipow( 3, n * n ); ++r )
    {
        for ( int cell = 0, code = r; cell < n * n; ++cell, code /= 3 )
            k.o[cell / n][cell % n] = static_cast<Cell>( code % 3 );
        for ( int mask = 1; mask < ( 1 << n ) - 1; ++mask )
        {
            for ( int s = 0; s < n; ++s )
                k.focus[s] = ( mask >> s ) & 1;
            for ( int a = 0; a < ipow( n, n ); ++a )
            {
                for ( int m = 0, code = a; m < n; ++m, code /= n )
                    k.alpha[m] = code % n;
                f( k );
            }
        }
    }
}

inline SelfModel from_kernel( const spm::SelfKernel& k )
{
    SelfModel out;
    out.n = static_cast<int>( k.size() );
    out.o.assign( out.n, std::vector<Cell>( out.n ) );
    for ( int s = 0; s < out.n; ++s )
        for ( int m = 0; m < out.n; ++m )
            out.o[s][m] = static_cast<Cell>( k.relation.at( s, m ).code() );
    for ( int s = 0; s < out.n; ++s )
        out.focus.push_back( k.focus_actual.contains( s ) );
    for ( auto a : k.alpha )
        out.alpha.push_back( static_cast<int>( a ) );
    return out;
}

inline spm::SelfKernel to_kernel( const SelfModel& k )
{
    spm::SelfKernel out;
    const auto n = static_cast<std::size_t>( k.n );
    out.relation = spm::OutcomeTable{ n, n };
    out.focus_actual = spm::StateSet{ n };
    out.focus_inverse = spm::StateSet{ n };
    for ( std::size_t s = 0; s < n; ++s )
    {
        for ( std::size_t m = 0; m < n; ++m )
            out.relation.set( s, m, OutcomeSet::from_code( k.o[s][m] ) );
        if ( k.focus[s] )
            out.focus_actual.insert( s );
        else
            out.focus_inverse.insert( s );
    }
    for ( auto a : k.alpha )
        out.alpha.push_back( static_cast<spm::StateIndex>( a ) );
    return out;
}

inline SelfModel random_model( Rng& rng, int n )
{
    SelfModel k;
    k.n = n;
    k.o.assign( n, std::vector<Cell>( n ) );
    for ( auto& row : k.o )
        for ( auto& c : row )
            c = static_cast<Cell>( rng.below( 3 ) );
    do
    {
        k.focus.assign( n, false );
        for ( int s = 0; s < n; ++s )
            k.focus[s] = rng.coin();
    } while ( n > 1 && ( std::count( k.focus.begin(), k.focus.end(), true ) == 0 ||
                         std::count( k.focus.begin(), k.focus.end(), true ) == n ) );
    for ( int m = 0; m < n; ++m )
        k.alpha.push_back( static_cast<int>( rng.below( n ) ) );
    return k;
}

} // namespace oracle

} // namespace spm_test
