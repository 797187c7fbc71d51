#include "spm/diagonal.hpp"

#include <algorithm>

namespace spm
{

void require_valid_self_kernel( const SelfKernel& k )
{
    const auto n = k.relation.observer_count();
    if ( k.relation.observed_count() != n )
        throw ModelError{ ErrorKind::not_classical_focus, "self relation is not square" };
    if ( k.focus_actual.universe() != n || k.focus_inverse.universe() != n )
        throw ModelError{ ErrorKind::not_classical_focus, "focus sets do not range over the observer states" };
    if ( !( k.focus_actual & k.focus_inverse ).empty() || ( k.focus_actual | k.focus_inverse ).count() != n )
        throw ModelError{ ErrorKind::not_classical_focus, "focus does not partition the observer states" };
    if ( !k.alpha.empty() && ( k.alpha.size() != n || std::any_of( k.alpha.begin(), k.alpha.end(),
                                                                   [n]( StateIndex i ) { return i >= n; } ) ) )
        throw ModelError{ ErrorKind::partial_alpha, "inversion map is not total over observer states" };
}

SelfKernel make_kernel( const SelfModel& sm )
{
    const auto& obs = sm.observer;
    const auto focus = sm.focus.empty() ? obs.indicator : sm.focus;
    if ( !obs.space.has_property( focus ) )
        throw ModelError{ ErrorKind::unknown_property, "focus '" + focus + "' is not a property of the observer" };
    if ( !is_classical_property( obs.space, focus ) )
        throw ModelError{ ErrorKind::not_classical_focus, "focus '" + focus + "' is not classical" };

    SelfKernel k{ obs.relation, actual_states( obs.space, focus ), inverse_actual_states( obs.space, focus ),
                  obs.inversion.value_or( std::vector<StateIndex>{} ) };
    require_valid_self_kernel( k );
    return k;
}

PaPartition derive_pa( const SelfKernel& k )
{
    require_valid_self_kernel( k );
    const auto n = k.size();
    PaPartition p{ StateSet{ n }, StateSet{ n } };
    for ( StateIndex m = 0; m < n; ++m )
    {
        if ( classical_perfect( k.relation, m, k.focus_actual, k.focus_inverse ).passed() )
            p.pa_states.insert( m );
        else
            p.pa_perp_states.insert( m );
    }
    return p;
}

Theorem3Outcome theorem3_outcome( const SelfKernel& k, const PaPartition& pa )
{
    const auto n = k.size();
    if ( pa.pa_states.count() != n )
        return Theorem3Outcome::premise_violated;
    bool exact = ( pa.pa_states & pa.pa_perp_states ).empty() && ( pa.pa_states | pa.pa_perp_states ).count() == n;
    bool predetermined = pa.pa_states.count() == n || pa.pa_perp_states.count() == n;
    return exact && predetermined ? Theorem3Outcome::pass : Theorem3Outcome::fail;
}

Verdict theorem3_check( const SelfKernel& k, const std::vector<std::string>& names )
{
    auto pa = derive_pa( k );
    switch ( theorem3_outcome( k, pa ) )
    {
    case Theorem3Outcome::premise_violated: {
        auto first = pa.pa_perp_states.members().front();
        return Verdict::premise( "theorem3", "not every state is a-classical perfect", { names[first] } );
    }
    case Theorem3Outcome::pass:
        return Verdict::ok( "theorem3", "p_a is actual at every state" );
    case Theorem3Outcome::fail:
        break;
    }
    return Verdict::failed( "theorem3", "p_a does not partition the observer states" );
}

std::string_view to_string( CertificateKind kind )
{
    switch ( kind )
    {
    case CertificateKind::contradiction: return "contradiction";
    case CertificateKind::premise_unsatisfiable: return "premise_unsatisfiable";
    case CertificateKind::counterexample: return "counterexample";
    case CertificateKind::pass: return "pass";
    }
    return "unknown";
}

std::string_view to_string( StepRule rule )
{
    switch ( rule )
    {
    case StepRule::pa_yes: return "pa_yes";
    case StepRule::pa_no: return "pa_no";
    case StepRule::full_correlation: return "full_correlation";
    case StepRule::inverse_completeness: return "inverse_completeness";
    case StepRule::no_image: return "no_image";
    case StepRule::image_no: return "image_no";
    case StepRule::identification: return "identification";
    case StepRule::forced_yes: return "forced_yes";
    }
    return "unknown";
}

namespace
{

TraceStep make_step( StepRule rule, const SelfKernel& k, const PaPartition& p, StateIndex state, StateIndex partner,
                     Quantify quantify )
{
    TraceStep t;
    t.rule = rule;
    t.state = state;
    t.partner = partner;
    t.in_pa = p.pa_states.contains( state );
    t.in_pa_perp = p.pa_perp_states.contains( state );
    t.entry = k.relation.at( state, state );
    switch ( rule )
    {
    case StepRule::pa_yes:
        t.required = t.in_pa ? OutcomeSet::yes() : OutcomeSet::both();
        t.holds = t.in_pa == t.entry.is_yes();
        break;
    case StepRule::pa_no:
        t.required = t.in_pa_perp ? OutcomeSet::no() : OutcomeSet::both();
        t.holds = t.in_pa_perp == t.entry.is_no();
        break;
    case StepRule::full_correlation:
        t.holds = quantify == Quantify::diagonal ||
                  classically_correlated_at( k.relation, state, p.pa_states, p.pa_perp_states );
        break;
    case StepRule::inverse_completeness:
        t.holds = is_inversion_image( k.relation, partner, state, InversionMode::relational ) && t.in_pa_perp;
        break;
    case StepRule::no_image: {
        auto images = inversion_images( k.relation, state, InversionMode::relational );
        t.holds = std::none_of( images.begin(), images.end(),
                                [&]( StateIndex i ) { return p.pa_perp_states.contains( i ); } );
        break;
    }
    case StepRule::image_no:
        // alpha(m) in κ(p_a⊥) is given, so the p_a_perp correlation demands a `no`.
        t.required = OutcomeSet::no();
        t.holds = t.in_pa_perp && t.entry == t.required;
        break;
    case StepRule::identification:
        // The derived membership alpha(m) in κ(p_a) against the recorded κ(p_a⊥).
        t.holds = t.in_pa_perp && !t.in_pa;
        break;
    case StepRule::forced_yes:
        t.required = OutcomeSet::yes();
        t.holds = t.entry == t.required;
        break;
    }
    return t;
}

std::vector<StateIndex> ordered_images( const SelfKernel& k, const PaPartition& p, StateIndex m )
{
    auto images = inversion_images( k.relation, m, InversionMode::relational );
    std::erase_if( images, [&]( StateIndex i ) { return !p.pa_perp_states.contains( i ); } );
    if ( !k.alpha.empty() )
    {
        auto it = std::find( images.begin(), images.end(), k.alpha[m] );
        if ( it != images.end() )
            std::rotate( images.begin(), it, it + 1 );
    }
    return images;
}

} // namespace

Certificate diagonal_contradiction( const SelfKernel& k, Quantify quantify )
{
    auto p = derive_pa( k );
    const auto n = k.size();
    Certificate cert;

    std::vector<StateIndex> candidates;
    for ( StateIndex m = 0; m < n; ++m )
    {
        auto yes_step = make_step( StepRule::pa_yes, k, p, m, m, quantify );
        auto no_step = make_step( StepRule::pa_no, k, p, m, m, quantify );
        bool full_ok = true;
        cert.trace.push_back( yes_step );
        cert.trace.push_back( no_step );
        if ( quantify == Quantify::full )
        {
            auto fc = make_step( StepRule::full_correlation, k, p, m, m, quantify );
            full_ok = fc.holds;
            cert.trace.push_back( fc );
        }
        if ( yes_step.holds && no_step.holds && full_ok )
            candidates.push_back( m );
    }

    bool any_closed = false;
    for ( auto m : candidates )
    {
        auto images = ordered_images( k, p, m );
        if ( images.empty() )
        {
            cert.trace.push_back( make_step( StepRule::no_image, k, p, m, m, quantify ) );
            continue;
        }
        auto image = images.front();
        auto inv = make_step( StepRule::inverse_completeness, k, p, image, m, quantify );
        auto no_at_image = make_step( StepRule::image_no, k, p, image, m, quantify );
        auto ident = make_step( StepRule::identification, k, p, image, m, quantify );
        auto yes = make_step( StepRule::forced_yes, k, p, image, m, quantify );
        cert.trace.insert( cert.trace.end(), { inv, no_at_image, ident, yes } );

        bool closes = inv.holds && ident.holds && no_at_image.required != yes.required;
        if ( !closes )
        {
            cert.kind = CertificateKind::counterexample;
            cert.candidate = m;
            cert.image = image;
            return cert;
        }
        if ( !any_closed )
        {
            cert.candidate = m;
            cert.image = image;
            cert.forced_state = image;
        }
        any_closed = true;
    }
    cert.kind = any_closed ? CertificateKind::contradiction : CertificateKind::premise_unsatisfiable;
    return cert;
}

Verdict replay_certificate( const SelfKernel& k, const Certificate& c, Quantify quantify )
{
    auto p = derive_pa( k );
    for ( std::size_t i = 0; i < c.trace.size(); ++i )
    {
        const auto& step = c.trace[i];
        if ( step.state >= k.size() || step.partner >= k.size() )
            return Verdict::failed( "replay", "step " + std::to_string( i ) + " names a state outside the model" );
        auto again = make_step( step.rule, k, p, step.state, step.partner, quantify );
        if ( again != step )
            return Verdict::failed( "replay", "step " + std::to_string( i ) + " (" +
                                                      std::string{ to_string( step.rule ) } +
                                                      ") does not reproduce" );
    }
    if ( c.kind == CertificateKind::contradiction )
    {
        if ( !c.forced_state )
            return Verdict::failed( "replay", "contradiction certificate names no forced state" );
        bool forced_no = false;
        bool forced_yes = false;
        for ( const auto& step : c.trace )
        {
            if ( step.state != *c.forced_state )
                continue;
            forced_no = forced_no || ( step.rule == StepRule::image_no && step.required.is_no() );
            forced_yes = forced_yes || ( step.rule == StepRule::forced_yes && step.required.is_yes() );
        }
        if ( !forced_no || !forced_yes )
            return Verdict::failed( "replay", "trace does not force one diagonal entry to both yes and no" );
    }
    return Verdict::ok( "replay" );
}

std::string describe_step( const TraceStep& step, const std::vector<std::string>& names )
{
    const auto& x = names[step.state];
    const auto& m = names[step.partner];
    const std::string entry = "o(" + x + "," + x + ")=" + std::string{ step.entry.text() };
    auto member = [&]( bool b ) { return b ? std::string{ "true" } : std::string{ "false" }; };
    switch ( step.rule )
    {
    case StepRule::pa_yes:
        return "p_a correlation at " + x + ": " + x + " in kappa(p_a) [" + member( step.in_pa ) + "] <=> o(" + x + "," + x +
               ")=yes; " + entry;
    case StepRule::pa_no:
        return "p_a_perp correlation at " + x + ": " + x + " in kappa(p_a_perp) [" + member( step.in_pa_perp ) + "] <=> o(" + x +
               "," + x + ")=no; " + entry;
    case StepRule::full_correlation:
        return "full correlation of observer " + x + " with p_a over every observed state";
    case StepRule::inverse_completeness:
        return "inverse completeness: " + x + " is an inversion image of " + m + " with " + x +
               " in kappa(p_a_perp) [" + member( step.in_pa_perp ) + "]";
    case StepRule::no_image:
        return "candidate " + x + " has no inversion image in kappa(p_a_perp)";
    case StepRule::image_no:
        return "p_a_perp correlation at alpha(" + m + ")=" + x + ": " + x + " in kappa(p_a_perp) <=> o(" + x + "," + x +
               ")=no, forcing no; model has " + entry;
    case StepRule::identification:
        return "satisfying the p_a_perp correlation puts " + x + " in Sigma^{p_a}, so p_a is actual at " + x + ", against " + x +
               " in kappa(p_a_perp) [" + member( step.in_pa_perp ) + "]";
    case StepRule::forced_yes:
        return "p_a correlation at " + x + " in kappa(p_a): o(" + x + "," + x + ") forced to yes; model has " + entry;
    }
    return {};
}

Theorem5Horn theorem5_outcome( const SelfKernel&, const PaPartition& pa, const Certificate& c )
{
    if ( pa.pa_states.empty() )
        return Theorem5Horn::not_classical_perfect;
    if ( c.kind == CertificateKind::contradiction || c.kind == CertificateKind::premise_unsatisfiable )
        return Theorem5Horn::diagonal;
    return Theorem5Horn::refuted;
}

Verdict theorem5_check( const SelfKernel& k, const std::vector<std::string>& names, Quantify quantify )
{
    auto pa = derive_pa( k );
    auto cert = diagonal_contradiction( k, quantify );
    switch ( theorem5_outcome( k, pa, cert ) )
    {
    case Theorem5Horn::not_classical_perfect:
        return Verdict::ok( "theorem5", "confirmed: no state is a-classical perfect" );
    case Theorem5Horn::diagonal:
        return Verdict::ok( "theorem5", "confirmed via diagonal argument (" + std::string{ to_string( cert.kind ) } + ")" );
    case Theorem5Horn::refuted:
        break;
    }
    return Verdict::failed( "theorem5", "a consistent p_a-classical perfect state exists",
                            { names[cert.candidate.value_or( 0 )] } );
}

} // namespace spm
