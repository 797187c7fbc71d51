#include "spm/report.hpp"

#include <sstream>

namespace spm
{

using nlohmann::ordered_json;

ordered_json to_json( const Verdict& v )
{
    ordered_json j;
    j["check"] = v.check;
    j["status"] = std::string{ to_string( v.status ) };
    j["detail"] = v.detail;
    j["witness"] = v.witness;
    return j;
}

ordered_json to_json( const CertificateRecord& c )
{
    const auto& cert = c.certificate;
    ordered_json j;
    j["subject"] = c.subject;
    j["kind"] = std::string{ to_string( cert.kind ) };
    auto name = [&]( const std::optional<StateIndex>& i ) -> ordered_json {
        return i ? ordered_json( c.names[*i] ) : ordered_json( nullptr );
    };
    j["candidate"] = name( cert.candidate );
    j["image"] = name( cert.image );
    j["forced_state"] = name( cert.forced_state );
    auto trace = ordered_json::array();
    for ( const auto& step : cert.trace )
    {
        ordered_json s;
        s["rule"] = std::string{ to_string( step.rule ) };
        s["claim"] = describe_step( step, c.names );
        s["witnesses"] = std::vector<std::string>{ c.names[step.state], c.names[step.partner] };
        s["in_pa"] = step.in_pa;
        s["in_pa_perp"] = step.in_pa_perp;
        s["entry"] = std::string{ step.entry.text() };
        s["required"] = std::string{ step.required.text() };
        s["holds"] = step.holds;
        trace.push_back( std::move( s ) );
    }
    j["trace"] = std::move( trace );
    return j;
}

ordered_json to_json( const SearchReport& s, bool timing )
{
    ordered_json j;
    j["bounds"] = { { "max_states", s.max_states } };
    j["mode"] = std::string{ to_string( s.mode ) };
    j["seed"] = s.seed;
    j["samples"] = s.samples;
    j["quantify"] = s.quantify == Quantify::diagonal ? "diagonal" : "full";
    j["models_examined"] = s.models_examined;
    j["rejected"] = s.rejected;
    j["premise_satisfying"] = s.premise_satisfying;
    j["pa_perfect_found"] = s.pa_perfect_found;
    j["first_counterexample"] =
            s.first_counterexample ? ordered_json( *s.first_counterexample ) : ordered_json( nullptr );
    const auto& t = s.tallies;
    j["theorem_tallies"] = {
            { "theorem1", { { "checked", t.theorem1_checked }, { "failed", t.theorem1_failed } } },
            { "theorem2", { { "checked", t.theorem2_checked }, { "failed", t.theorem2_failed } } },
            { "theorem3", { { "premise_satisfying", t.theorem3_premise }, { "failed", t.theorem3_failed } } },
            { "theorem4",
              { { "contradiction", t.theorem4_contradiction },
                { "premise_unsatisfiable", t.theorem4_premise_unsatisfiable },
                { "counterexample", t.theorem4_counterexample } } },
            { "theorem5",
              { { "first_horn", t.theorem5_first_horn },
                { "diagonal_horn", t.theorem5_diagonal_horn },
                { "refuted", t.theorem5_refuted } } },
            { "partition_violations", t.partition_violations },
            { "replay_failures", t.replay_failures },
    };
    if ( timing )
        j["duration"] = s.duration_seconds;
    return j;
}

ordered_json to_json( const ObservationSweepReport& s )
{
    ordered_json j;
    j["bounds"] = { { "max_system", s.max_system }, { "max_observer", s.max_observer } };
    j["models_examined"] = s.models_examined;
    j["valid_models"] = s.valid_models;
    j["theorem1"] = { { "premise_satisfying", s.theorem1_premise }, { "failed", s.theorem1_failed } };
    j["theorem2"] = { { "pairs", s.theorem2_pairs }, { "failed", s.theorem2_failed } };
    j["partition_violations"] = s.partition_violations;
    return j;
}

ordered_json to_json( const Report& r, bool timing )
{
    ordered_json j;
    j["command"] = r.command;
    ordered_json flags = ordered_json::object();
    for ( const auto& [k, v] : r.flags )
        flags[k] = v;
    j["inputs"] = { { "files", r.inputs }, { "flags", flags } };
    j["schema_version"] = report_schema_version;
    auto verdicts = ordered_json::array();
    for ( const auto& v : r.verdicts )
        verdicts.push_back( to_json( v ) );
    j["verdicts"] = std::move( verdicts );
    auto certs = ordered_json::array();
    for ( const auto& c : r.certificates )
        certs.push_back( to_json( c ) );
    j["certificates"] = std::move( certs );
    if ( r.search )
        j["search"] = to_json( *r.search, timing );
    if ( r.sweep )
        j["sweep"] = to_json( *r.sweep );
    return j;
}

std::string render_structured( const Report& r, bool timing )
{
    return to_json( r, timing ).dump( 2 ) + "\n";
}

std::string render_text( const Report& r, bool timing )
{
    std::ostringstream out;
    out << r.command;
    for ( const auto& f : r.inputs )
        out << ' ' << f;
    out << '\n';
    for ( const auto& v : r.verdicts )
    {
        out << "  [" << to_string( v.status ) << "] " << v.check;
        if ( !v.detail.empty() )
            out << ": " << v.detail;
        if ( !v.witness.empty() )
        {
            out << " (witness:";
            for ( const auto& w : v.witness )
                out << ' ' << w;
            out << ')';
        }
        out << '\n';
    }
    for ( const auto& c : r.certificates )
    {
        out << "  certificate " << c.subject << ": " << to_string( c.certificate.kind ) << '\n';
        for ( const auto& step : c.certificate.trace )
            out << "    - " << describe_step( step, c.names ) << ( step.holds ? "" : "  [does not hold]" ) << '\n';
    }
    if ( r.search )
    {
        const auto& s = *r.search;
        const auto& t = s.tallies;
        out << "  search: max_states=" << s.max_states << " mode=" << to_string( s.mode ) << " seed=" << s.seed
            << " samples=" << s.samples << " quantify=" << ( s.quantify == Quantify::diagonal ? "diagonal" : "full" )
            << '\n';
        out << "    models_examined=" << s.models_examined << " rejected=" << s.rejected
            << " premise_satisfying=" << s.premise_satisfying << " pa_perfect_found=" << s.pa_perfect_found << '\n';
        out << "    theorem1 checked=" << t.theorem1_checked << " failed=" << t.theorem1_failed << '\n';
        out << "    theorem2 checked=" << t.theorem2_checked << " failed=" << t.theorem2_failed << '\n';
        out << "    theorem3 premise_satisfying=" << t.theorem3_premise << " failed=" << t.theorem3_failed << '\n';
        out << "    theorem4 contradiction=" << t.theorem4_contradiction
            << " premise_unsatisfiable=" << t.theorem4_premise_unsatisfiable
            << " counterexample=" << t.theorem4_counterexample << '\n';
        out << "    theorem5 first_horn=" << t.theorem5_first_horn << " diagonal_horn=" << t.theorem5_diagonal_horn
            << " refuted=" << t.theorem5_refuted << '\n';
        out << "    partition_violations=" << t.partition_violations << " replay_failures=" << t.replay_failures
            << '\n';
        if ( timing )
            out << "    duration=" << s.duration_seconds << "s\n";
    }
    if ( r.sweep )
    {
        const auto& s = *r.sweep;
        out << "  sweep: max_system=" << s.max_system << " max_observer=" << s.max_observer
            << " models_examined=" << s.models_examined << " valid=" << s.valid_models << '\n';
        out << "    theorem1 premise_satisfying=" << s.theorem1_premise << " failed=" << s.theorem1_failed << '\n';
        out << "    theorem2 pairs=" << s.theorem2_pairs << " failed=" << s.theorem2_failed << '\n';
    }
    return out.str();
}

int exit_code( const Report& r )
{
    for ( const auto& v : r.verdicts )
        if ( v.status == VerdictStatus::fail )
            return 1;
    for ( const auto& c : r.certificates )
        if ( c.certificate.kind == CertificateKind::counterexample )
            return 1;
    if ( r.search )
    {
        const auto& t = r.search->tallies;
        if ( r.search->pa_perfect_found != 0 || t.theorem1_failed != 0 || t.theorem2_failed != 0 ||
             t.theorem3_failed != 0 || t.theorem5_refuted != 0 || t.partition_violations != 0 ||
             t.replay_failures != 0 )
            return 1;
    }
    if ( r.sweep && ( r.sweep->theorem1_failed != 0 || r.sweep->theorem2_failed != 0 ||
                      r.sweep->partition_violations != 0 ) )
        return 1;
    return 0;
}

} // namespace spm
