#include "spm/spaces.hpp"

#include <algorithm>
#include <set>

namespace spm
{

StatePropertySpace::StatePropertySpace( std::string name, std::vector<std::string> states,
                                        const std::vector<std::pair<std::string, TestEntries>>& tests,
                                        std::vector<Property> properties )
        : name_{ std::move( name ) }, states_{ std::move( states ) }
{
    if ( states_.empty() )
        throw ModelError{ ErrorKind::empty_space, "space '" + name_ + "' has no states" };
    if ( properties.empty() )
        throw ModelError{ ErrorKind::empty_space, "space '" + name_ + "' has no properties" };

    std::sort( states_.begin(), states_.end() );
    if ( auto dup = std::adjacent_find( states_.begin(), states_.end() ); dup != states_.end() )
        throw ModelError{ ErrorKind::duplicate_id, "state '" + *dup + "' declared twice in '" + name_ + "'" };

    for ( const auto& [id, entries] : tests )
    {
        Test t{ id, std::vector<OutcomeSet>( states_.size() ) };
        for ( const auto& [state, outcome] : entries )
            t.outcomes[state_index( state )] = outcome;
        for ( const auto& s : states_ )
            if ( !entries.contains( s ) )
                throw ModelError{ ErrorKind::partial_test, "test '" + id + "' has no entry for state '" + s + "'" };
        if ( !tests_.emplace( id, std::move( t ) ).second )
            throw ModelError{ ErrorKind::duplicate_id, "test '" + id + "' declared twice" };
    }

    for ( auto& p : properties )
    {
        if ( p.representatives.empty() )
            throw ModelError{ ErrorKind::inconsistent_equivalence_class, "property '" + p.id + "' has no tests" };
        for ( const auto& t : p.representatives )
            if ( !tests_.contains( t ) )
                throw ModelError{ ErrorKind::unknown_test,
                                  "property '" + p.id + "' references undeclared test '" + t + "'" };
        auto id = p.id;
        if ( !properties_.emplace( id, std::move( p ) ).second )
            throw ModelError{ ErrorKind::duplicate_id, "property '" + id + "' declared twice" };
    }
}

std::optional<StateIndex> StatePropertySpace::find_state( const std::string& id ) const
{
    auto it = std::lower_bound( states_.begin(), states_.end(), id );
    if ( it == states_.end() || *it != id )
        return std::nullopt;
    return static_cast<StateIndex>( it - states_.begin() );
}

StateIndex StatePropertySpace::state_index( const std::string& id ) const
{
    if ( auto i = find_state( id ) )
        return *i;
    throw ModelError{ ErrorKind::unknown_state, "state '" + id + "' is not in '" + name_ + "'" };
}

const Test& StatePropertySpace::test( const std::string& id ) const
{
    auto it = tests_.find( id );
    if ( it == tests_.end() )
        throw ModelError{ ErrorKind::unknown_test, "test '" + id + "' is not in '" + name_ + "'" };
    return it->second;
}

const Property& StatePropertySpace::property( const std::string& id ) const
{
    auto it = properties_.find( id );
    if ( it == properties_.end() )
        throw ModelError{ ErrorKind::unknown_property, "property '" + id + "' is not in '" + name_ + "'" };
    return it->second;
}

StateSet certain_yes_set( const Test& t )
{
    StateSet out{ t.outcomes.size() };
    for ( StateIndex i = 0; i < t.outcomes.size(); ++i )
        if ( t.outcomes[i].is_yes() )
            out.insert( i );
    return out;
}

namespace
{

void require_total( const StatePropertySpace& space, const Test& t )
{
    if ( t.outcomes.size() != space.size() )
        throw ModelError{ ErrorKind::partial_test, "test '" + t.id + "' has " + std::to_string( t.outcomes.size() ) +
                                                           " entries, space has " +
                                                           std::to_string( space.size() ) + " states" };
}

} // namespace

StateSet actual_states( const StatePropertySpace& space, const std::string& property )
{
    const auto& p = space.property( property );
    const auto& first = space.test( p.representatives.front() );
    auto kappa = certain_yes_set( first );
    for ( const auto& rep : p.representatives )
    {
        if ( certain_yes_set( space.test( rep ) ) != kappa )
            throw ModelError{ ErrorKind::inconsistent_equivalence_class,
                              "tests '" + first.id + "' and '" + rep + "' of property '" + property +
                                      "' have different certain-yes sets" };
    }
    return kappa;
}

Actuality actuality_status( const StatePropertySpace& space, const std::string& property, const std::string& state )
{
    auto s = space.state_index( state );
    return actual_states( space, property ).contains( s ) ? Actuality::actual : Actuality::potential;
}

bool tests_equivalent( const StatePropertySpace& space, const Test& t, const Test& t2 )
{
    require_total( space, t );
    require_total( space, t2 );
    return certain_yes_set( t ) == certain_yes_set( t2 );
}

bool tests_equivalent( const StatePropertySpace& space, const std::string& t, const std::string& t2 )
{
    return tests_equivalent( space, space.test( t ), space.test( t2 ) );
}

Test inverse_test( const Test& t )
{
    Test out{ t.id + "_inv", t.outcomes };
    for ( auto& o : out.outcomes )
        o = o.swapped();
    return out;
}

bool is_classical_test( const Test& t )
{
    return std::all_of( t.outcomes.begin(), t.outcomes.end(), []( OutcomeSet o ) { return o.single_valued(); } );
}

bool is_classical_property( const StatePropertySpace& space, const std::string& property )
{
    const auto& p = space.property( property );
    std::size_t classical = 0;
    for ( const auto& rep : p.representatives )
        classical += is_classical_test( space.test( rep ) ) ? 1 : 0;
    if ( classical != 0 && classical != p.representatives.size() )
        throw ModelError{ ErrorKind::inconsistent_equivalence_class,
                          "property '" + property + "' mixes classical and non-classical tests" };
    return classical != 0;
}

StateSet inverse_actual_states( const StatePropertySpace& space, const std::string& property )
{
    if ( !is_classical_property( space, property ) )
        throw ModelError{ ErrorKind::not_classical, "property '" + property + "' is not classical" };
    const auto& p = space.property( property );
    return certain_yes_set( inverse_test( space.test( p.representatives.front() ) ) );
}

Verdict classicality_verdict( const StatePropertySpace& space, const std::string& property )
{
    const std::string check = "classicality(" + property + ")";
    if ( !is_classical_property( space, property ) )
        throw ModelError{ ErrorKind::not_classical, "classicality verdict is undefined for '" + property + "'" };

    auto kappa = actual_states( space, property );
    auto kappa_perp = inverse_actual_states( space, property );
    const auto& names = space.states();

    auto cover = kappa | kappa_perp;
    for ( StateIndex s = 0; s < space.size(); ++s )
        if ( !cover.contains( s ) )
            return Verdict::failed( check, "(i) union does not cover the states", { names[s] } );

    auto overlap = kappa & kappa_perp;
    if ( !overlap.empty() )
        return Verdict::failed( check, "(ii) kappa(a) and kappa(a_perp) intersect", { names[overlap.members().front()] } );

    const auto& reps = space.property( property ).representatives;
    for ( std::size_t i = 0; i < reps.size(); ++i )
        for ( std::size_t j = i + 1; j < reps.size(); ++j )
            if ( !tests_equivalent( space, inverse_test( space.test( reps[i] ) ), inverse_test( space.test( reps[j] ) ) ) )
                return Verdict::failed( check, "(iii) inverse tests are not equivalent", { reps[i], reps[j] } );

    return Verdict::ok( check, "kappa(" + property + ")=" + format_set( kappa, names ) + " kappa(" + property +
                                       "_perp)=" + format_set( kappa_perp, names ) );
}

std::vector<std::string> property_profile( const StatePropertySpace& space, const std::string& state )
{
    auto s = space.state_index( state );
    std::vector<std::string> out;
    for ( const auto& [id, p] : space.properties() )
        if ( actual_states( space, id ).contains( s ) )
            out.push_back( id );
    return out;
}

Verdict state_determination_verdict( const StatePropertySpace& space )
{
    std::map<std::vector<std::string>, std::string> seen;
    for ( const auto& s : space.states() )
    {
        auto profile = property_profile( space, s );
        auto [it, inserted] = seen.emplace( profile, s );
        if ( !inserted )
            return Verdict::failed( "state_determination", "states share the same actual properties", { it->second, s } );
    }
    return Verdict::ok( "state_determination" );
}

std::vector<Verdict> validate_space( const StatePropertySpace& space )
{
    std::vector<Verdict> out;
    for ( const auto& [id, p] : space.properties() )
    {
        try
        {
            actual_states( space, id );
            bool classical = is_classical_property( space, id );
            if ( classical && space.has_property( id + "_perp" ) )
            {
                auto declared = actual_states( space, id + "_perp" );
                auto derived = inverse_actual_states( space, id );
                if ( declared != derived )
                    out.push_back( Verdict::failed( "declared_inverse(" + id + ")",
                                                    "declared " + format_set( declared, space.states() ) +
                                                            " differs from derived " +
                                                            format_set( derived, space.states() ),
                                                    { id, id + "_perp" } ) );
            }
        }
        catch ( const ModelError& e )
        {
            out.push_back( Verdict::failed( "equivalence_class(" + id + ")", e.what(), { id } ) );
        }
    }
    return out;
}

std::vector<std::string> state_names( const StatePropertySpace& space, const StateSet& set )
{
    std::vector<std::string> out;
    for ( auto i : set.members() )
        out.push_back( space.states()[i] );
    return out;
}

} // namespace spm
