#include "spm/observation.hpp"

#include <algorithm>

namespace spm
{

OutcomeTable compose_outcome_relation( const CompositionSpec& spec, bool allow_nonsurjective )
{
    if ( spec.tau.size() != spec.observed * spec.observers || spec.rho.size() != spec.compound.size() ||
         spec.phi.size() != spec.observers )
        throw ModelError{ ErrorKind::invalid_model, "composition maps are not total" };

    OutcomeTable o{ spec.observed, spec.observers };
    for ( StateIndex s = 0; s < spec.observed; ++s )
        for ( StateIndex m = 0; m < spec.observers; ++m )
        {
            auto c = spec.tau[s * spec.observers + m];
            if ( c >= spec.compound.size() || spec.rho[c] >= spec.observers )
                throw ModelError{ ErrorKind::invalid_model, "composition index out of range" };
            o.set( s, m, spec.phi[spec.rho[c]] );
        }
    if ( !allow_nonsurjective && !o.surjective() )
        throw ModelError{ ErrorKind::non_surjective, "composed relation never yields both yes and no" };
    return o;
}

std::vector<Verdict> validate_observer( const ObserverModel& model, const StatePropertySpace& system,
                                        ObserverOptions options )
{
    std::vector<Verdict> out;
    const auto& space = model.space;

    for ( auto& v : validate_space( space ) )
        out.push_back( std::move( v ) );

    if ( !space.has_property( model.indicator ) )
    {
        out.push_back( Verdict::failed( "indicator", "indicator '" + model.indicator + "' is not a property of '" +
                                                             space.name() + "'",
                                        { model.indicator } ) );
    }
    else
    {
        try
        {
            if ( !is_classical_property( space, model.indicator ) )
                out.push_back( Verdict::failed( "indicator", "indicator property is not classical",
                                                { model.indicator } ) );
            else if ( auto v = classicality_verdict( space, model.indicator ); !v.passed() )
                out.push_back( Verdict::failed( "indicator_partition", v.detail, v.witness ) );
        }
        catch ( const ModelError& e )
        {
            out.push_back( Verdict::failed( "indicator", e.what(), { model.indicator } ) );
        }
    }

    const auto& o = model.relation;
    if ( o.observed_count() != system.size() || o.observer_count() != space.size() )
    {
        out.push_back( Verdict::failed( "relation_shape", "relation is not total over the state product" ) );
        return out;
    }

    if ( !o.surjective() )
    {
        if ( options.allow_nonsurjective )
            out.push_back( Verdict::ok( "surjectivity", "warning: relation never yields both yes and no" ) );
        else
            out.push_back( Verdict::failed( "surjectivity", "relation never yields both yes and no" ) );
    }

    if ( model.inversion )
    {
        const auto& alpha = *model.inversion;
        if ( alpha.size() != space.size() ||
             std::any_of( alpha.begin(), alpha.end(), [&]( StateIndex i ) { return i >= space.size(); } ) )
            out.push_back( Verdict::failed( "inversion_shape", "inversion map is not total over observer states" ) );
    }

    if ( model.composition )
    {
        const auto& spec = *model.composition;
        try
        {
            auto composed = compose_outcome_relation( spec, true );
            bool reported = false;
            for ( StateIndex s = 0; s < o.observed_count() && !reported; ++s )
                for ( StateIndex m = 0; m < o.observer_count() && !reported; ++m )
                    if ( composed.at( s, m ) != o.at( s, m ) )
                    {
                        out.push_back( Verdict::failed(
                                "composition_consistency",
                                "phi(rho(tau(s,m)))=" + std::string{ composed.at( s, m ).text() } +
                                        " but relation has " + std::string{ o.at( s, m ).text() },
                                { system.states()[s], space.states()[m] } ) );
                        reported = true;
                    }
            if ( space.has_property( model.indicator ) && is_classical_property( space, model.indicator ) )
            {
                auto yes = actual_states( space, model.indicator );
                auto no = inverse_actual_states( space, model.indicator );
                for ( StateIndex m = 0; m < space.size(); ++m )
                {
                    if ( spec.phi[m].is_yes() != yes.contains( m ) || spec.phi[m].is_no() != no.contains( m ) )
                    {
                        out.push_back( Verdict::failed( "phi_indicator", "phi disagrees with the indicator partition",
                                                        { space.states()[m] } ) );
                        break;
                    }
                }
            }
        }
        catch ( const ModelError& e )
        {
            out.push_back( Verdict::failed( "composition", e.what() ) );
        }
    }
    return out;
}

bool perfect_at( const OutcomeTable& o, StateIndex m, const StateSet& actual )
{
    for ( StateIndex s = 0; s < o.observed_count(); ++s )
        if ( actual.contains( s ) && !o.at( s, m ).is_yes() )
            return false;
    return true;
}

bool classically_correlated_at( const OutcomeTable& o, StateIndex m, const StateSet& actual, const StateSet& inverse )
{
    for ( StateIndex s = 0; s < o.observed_count(); ++s )
    {
        auto e = o.at( s, m );
        if ( actual.contains( s ) != e.is_yes() || inverse.contains( s ) != e.is_no() )
            return false;
    }
    return true;
}

bool is_inversion_image( const OutcomeTable& o, StateIndex m, StateIndex image, InversionMode mode )
{
    for ( StateIndex s = 0; s < o.observed_count(); ++s )
    {
        auto e = o.at( s, m );
        if ( mode == InversionMode::strict && !e.single_valued() )
            return false;
        if ( o.at( s, image ) != e.swapped() )
            return false;
    }
    return true;
}

std::vector<StateIndex> inversion_images( const OutcomeTable& o, StateIndex m, InversionMode mode )
{
    std::vector<StateIndex> out;
    for ( StateIndex c = 0; c < o.observer_count(); ++c )
        if ( is_inversion_image( o, m, c, mode ) )
            out.push_back( c );
    return out;
}

InversionCheck check_inversion( const OutcomeTable& o, const std::vector<StateIndex>& alpha, InversionMode mode )
{
    for ( StateIndex s = 0; s < o.observed_count(); ++s )
        for ( StateIndex m = 0; m < o.observer_count(); ++m )
        {
            auto e = o.at( s, m );
            bool ok = o.at( s, alpha[m] ) == e.swapped() && ( mode == InversionMode::relational || e.single_valued() );
            if ( !ok )
                return { false, s, m };
        }
    return {};
}

ClassicalPerfectResult classical_perfect( const OutcomeTable& o, StateIndex m, const StateSet& actual,
                                          const StateSet& inverse, InversionMode mode )
{
    ClassicalPerfectResult r;
    for ( StateIndex s = 0; s < o.observed_count(); ++s )
        if ( actual.contains( s ) && !o.at( s, m ).is_yes() )
            return { 1, s, std::nullopt };

    for ( auto image : inversion_images( o, m, mode ) )
        if ( perfect_at( o, image, inverse ) )
        {
            r.image = image;
            break;
        }
    if ( !r.image )
        return { 2, std::nullopt, std::nullopt };

    for ( StateIndex s = 0; s < o.observed_count(); ++s )
    {
        auto e = o.at( s, m );
        if ( actual.contains( s ) != e.is_yes() || inverse.contains( s ) != e.is_no() )
            return { 3, s, r.image };
    }
    return r;
}

std::optional<StateIndex> theorem1_counterexample( const OutcomeTable& o, const std::vector<StateIndex>& alpha,
                                                   const StateSet& actual, const StateSet& inverse )
{
    for ( StateIndex m = 0; m < o.observer_count(); ++m )
        if ( classically_correlated_at( o, m, actual, inverse ) !=
             classically_correlated_at( o, alpha[m], inverse, actual ) )
            return m;
    return std::nullopt;
}

namespace
{

void require_classical( const StatePropertySpace& system, const std::string& a )
{
    if ( !is_classical_property( system, a ) )
        throw ModelError{ ErrorKind::not_classical, "property '" + a + "' is not classical" };
}

std::vector<StateIndex> require_alpha( const ObserverModel& model, const std::map<std::string, std::string>& alpha )
{
    const auto& space = model.space;
    std::vector<StateIndex> out;
    for ( const auto& m : space.states() )
    {
        auto it = alpha.find( m );
        if ( it == alpha.end() )
            throw ModelError{ ErrorKind::partial_alpha, "inversion has no image for '" + m + "'" };
        out.push_back( space.state_index( it->second ) );
    }
    return out;
}

} // namespace

bool is_perfect( const ObserverModel& model, const StatePropertySpace& system, const std::string& m,
                 const std::string& a )
{
    return perfect_at( model.relation, model.space.state_index( m ), actual_states( system, a ) );
}

bool is_lambda_perfect( const ObserverModel& model, const StatePropertySpace& system, const std::string& m,
                        const std::vector<std::string>& lambda )
{
    if ( lambda.empty() )
        throw ModelError{ ErrorKind::empty_lambda, "perfectness needs a non-empty collection of properties" };
    return std::all_of( lambda.begin(), lambda.end(),
                        [&]( const std::string& a ) { return is_perfect( model, system, m, a ); } );
}

Verdict is_inversion( const ObserverModel& model, const StatePropertySpace& system,
                      const std::map<std::string, std::string>& alpha, InversionMode mode )
{
    auto map = require_alpha( model, alpha );
    auto r = check_inversion( model.relation, map, mode );
    const std::string check = mode == InversionMode::strict ? "inversion(strict)" : "inversion(relational)";
    if ( r.valid )
        return Verdict::ok( check );
    return Verdict::failed( check,
                            "o(s,alpha(m)) is not the swap of o(s,m)" +
                                    std::string{ model.relation.at( r.s, r.m ).single_valued()
                                                         ? ""
                                                         : " (two-valued entry under strict mode)" },
                            { system.states()[r.s], model.space.states()[r.m] } );
}

std::vector<std::string> find_inversions( const ObserverModel& model, const StatePropertySpace&,
                                          const std::string& m, InversionMode mode )
{
    std::vector<std::string> out;
    for ( auto i : inversion_images( model.relation, model.space.state_index( m ), mode ) )
        out.push_back( model.space.states()[i] );
    return out;
}

Verdict is_classical_perfect( const ObserverModel& model, const StatePropertySpace& system, const std::string& m,
                              const std::string& a )
{
    require_classical( system, a );
    auto r = classical_perfect( model.relation, model.space.state_index( m ), actual_states( system, a ),
                                inverse_actual_states( system, a ) );
    const std::string check = "classical_perfect(" + m + ":" + a + ")";
    switch ( r.failed_clause )
    {
    case 0:
        return Verdict::ok( check, "inversion image " + model.space.states()[*r.image] + " is " + a + "_perp-perfect" );
    case 1:
        return Verdict::failed( check, "(i) not " + a + "-perfect", { system.states()[*r.witness] } );
    case 2:
        return Verdict::failed( check, "(ii) no inversion image is " + a + "_perp-perfect" );
    default:
        return Verdict::failed( check, "(iii) predetermined correlation fails", { system.states()[*r.witness] } );
    }
}

Verdict is_knowledgable( const ObserverModel& model, const StatePropertySpace& system )
{
    std::map<std::string, StateSet> kappa;
    for ( const auto& [id, p] : system.properties() )
        kappa.emplace( id, actual_states( system, id ) );

    for ( StateIndex s = 0; s < system.size(); ++s )
        for ( const auto& [id, set] : kappa )
        {
            if ( !set.contains( s ) )
                continue;
            bool covered = false;
            for ( StateIndex m = 0; m < model.space.size() && !covered; ++m )
                covered = perfect_at( model.relation, m, set );
            if ( !covered )
                return Verdict::failed( "knowledgable", "no observer state is perfect for an actual property",
                                        { system.states()[s], id } );
        }
    return Verdict::ok( "knowledgable" );
}

Verdict verify_theorem1( const ObserverModel& model, const StatePropertySpace& system, const std::string& a,
                         InversionMode mode )
{
    require_classical( system, a );
    const std::string check = "theorem1(" + a + ")";
    if ( !model.inversion )
        return Verdict::premise( check, "model declares no inversion" );
    auto inv = check_inversion( model.relation, *model.inversion, mode );
    if ( !inv.valid )
        return Verdict::premise( check, "declared map is not an inversion",
                                 { system.states()[inv.s], model.space.states()[inv.m] } );

    auto cex = theorem1_counterexample( model.relation, *model.inversion, actual_states( system, a ),
                                        inverse_actual_states( system, a ) );
    if ( cex )
        return Verdict::failed( check, "m is a-perfect <=> alpha(m) is a_perp-perfect fails",
                                { model.space.states()[*cex] } );
    return Verdict::ok( check );
}

Verdict verify_theorem2( const ObserverModel& model, const StatePropertySpace& system, const std::string& a,
                         const std::string& m, const std::string& mstar )
{
    require_classical( system, a );
    const std::string check = "theorem2(" + a + "," + m + "," + mstar + ")";
    auto mi = model.space.state_index( m );
    auto si = model.space.state_index( mstar );
    auto actual = actual_states( system, a );
    auto inverse = inverse_actual_states( system, a );
    if ( !classically_correlated_at( model.relation, mi, actual, inverse ) )
        return Verdict::premise( check, m + " is not " + a + "-perfect", { m } );
    if ( !classically_correlated_at( model.relation, si, inverse, actual ) )
        return Verdict::premise( check, mstar + " is not " + a + "_perp-perfect", { mstar } );
    if ( !is_inversion_image( model.relation, mi, si, InversionMode::relational ) )
        return Verdict::failed( check, mstar + " is not an inversion of " + m, { m, mstar } );
    return Verdict::ok( check );
}

std::map<std::string, std::string> inversion_by_name( const ObserverModel& model )
{
    std::map<std::string, std::string> out;
    if ( model.inversion )
        for ( StateIndex m = 0; m < model.space.size(); ++m )
            out.emplace( model.space.states()[m], model.space.states()[( *model.inversion )[m]] );
    return out;
}

} // namespace spm
