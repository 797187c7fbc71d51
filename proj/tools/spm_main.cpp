// spm: check state-property models, verify the observation theorems on them,
// and sweep small self-observing models for the diagonal argument.
//
//   spm check  FILE... [--perfect m:a] [--lambda m:a,b] [--classical-perfect m:a]
//                      [--knowledgable] [--determination]
//   spm verify FILE... --theorem 1..5 [--property a] [--pair m:m*] [--focus a]
//   spm search --max-states N [--mode exhaustive|sampled] [--samples K] [--seed S]
//
// Exit codes: 0 pass/confirmed, 1 failed verdict or counterexample, 2 input error.

#include "spm/diagonal.hpp"
#include "spm/observation.hpp"
#include "spm/report.hpp"
#include "spm/search.hpp"
#include "spm/speclang.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace
{

using namespace spm;

struct InputError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct CommonFlags
{
    std::vector<std::string> files;
    std::string format = "text";
    bool no_timing = false;
    bool allow_nonsurjective = false;
    bool strict_inversion = false;
    std::string quantify = "diagonal";
    std::string relation;
};

struct LoadedFile
{
    std::string path;
    ModelDocument doc;
};

std::string read_file( const std::string& path )
{
    std::ifstream in{ path, std::ios::binary };
    if ( !in )
        throw InputError{ path + ": cannot read file" };
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LoadedFile load( const std::string& path )
{
    auto text = read_file( path );
    try
    {
        return { path, parse( text ) };
    }
    catch ( const ModelError& e )
    {
        throw InputError{ path + ":" + e.what() };
    }
}

std::pair<std::string, std::string> split_pair( const std::string& arg, const std::string& flag )
{
    auto colon = arg.find( ':' );
    if ( colon == std::string::npos || colon == 0 || colon + 1 == arg.size() )
        throw InputError{ flag + " expects STATE:PROPERTY, got '" + arg + "'" };
    return { arg.substr( 0, colon ), arg.substr( colon + 1 ) };
}

std::vector<std::string> split_commas( const std::string& s )
{
    std::vector<std::string> out;
    std::stringstream ss{ s };
    std::string item;
    while ( std::getline( ss, item, ',' ) )
        if ( !item.empty() )
            out.push_back( item );
    return out;
}

const RelationDecl& pick_relation( const ModelDocument& doc, const std::string& wanted, bool self_only )
{
    if ( !wanted.empty() )
    {
        const auto* r = doc.find_relation( wanted );
        if ( r == nullptr )
            throw InputError{ "relation '" + wanted + "' is not declared" };
        if ( self_only && r->observed != r->observer )
            throw InputError{ "relation '" + wanted + "' is not a self-observation relation" };
        return *r;
    }
    const RelationDecl* found = nullptr;
    for ( const auto& r : doc.relations )
    {
        if ( self_only && r.observed != r.observer )
            continue;
        if ( found != nullptr )
            throw InputError{ "several relations are declared; choose one with --relation" };
        found = &r;
    }
    if ( found == nullptr )
        throw InputError{ self_only ? "no self-observation relation is declared" : "no relation is declared" };
    return *found;
}

void add_common_flags( Report& report, const CommonFlags& f )
{
    report.inputs = f.files;
    report.flags.emplace_back( "format", f.format );
    report.flags.emplace_back( "allow_nonsurjective", f.allow_nonsurjective ? "true" : "false" );
    report.flags.emplace_back( "strict_inversion", f.strict_inversion ? "true" : "false" );
    report.flags.emplace_back( "quantify", f.quantify );
    if ( !f.relation.empty() )
        report.flags.emplace_back( "relation", f.relation );
}

// Validation verdicts that fail make the input invalid (exit 2).
bool validate_into( Report& report, const LoadedFile& file, const CommonFlags& f )
{
    bool ok = true;
    for ( auto& v : validate( file.doc, { f.allow_nonsurjective } ) )
    {
        ok = ok && v.status != VerdictStatus::fail;
        v.check = "validate:" + v.check;
        report.verdicts.push_back( std::move( v ) );
    }
    return ok;
}

Quantify parse_quantify( const std::string& q )
{
    return q == "full" ? Quantify::full : Quantify::diagonal;
}

struct CheckFlags
{
    std::vector<std::string> perfect;
    std::vector<std::string> lambda;
    std::vector<std::string> classical_perfect;
    bool knowledgable = false;
    bool determination = false;
};

int run_check( Report& report, const CommonFlags& f, const CheckFlags& c )
{
    const auto mode = f.strict_inversion ? InversionMode::strict : InversionMode::relational;
    bool valid = true;
    for ( const auto& path : f.files )
    {
        auto file = load( path );
        if ( !validate_into( report, file, f ) )
        {
            valid = false;
            continue;
        }
        const auto& doc = file.doc;

        for ( const auto* list : { &doc.systems, &doc.observers } )
            for ( const auto& d : *list )
            {
                auto space = build_space( d );
                for ( const auto& [id, p] : space.properties() )
                    if ( is_classical_property( space, id ) )
                        report.verdicts.push_back( classicality_verdict( space, id ) );
                if ( c.determination )
                {
                    auto v = state_determination_verdict( space );
                    v.check += "(" + d.id + ")";
                    report.verdicts.push_back( std::move( v ) );
                }
            }

        for ( const auto& inv : doc.inversions )
        {
            auto bound = bind_relation( doc, inv.relation );
            auto v = is_inversion( bound.model, bound.system, inversion_by_name( bound.model ), mode );
            v.check += "(" + inv.id + ")";
            report.verdicts.push_back( std::move( v ) );
        }

        const bool needs_relation =
                !c.perfect.empty() || !c.lambda.empty() || !c.classical_perfect.empty() || c.knowledgable;
        if ( !needs_relation )
            continue;
        const auto& rel = pick_relation( doc, f.relation, false );
        auto bound = bind_relation( doc, rel.id );
        auto guard = [&]( auto fn ) {
            try
            {
                fn();
            }
            catch ( const ModelError& e )
            {
                throw InputError{ e.what() };
            }
        };
        for ( const auto& arg : c.perfect )
        {
            auto [m, a] = split_pair( arg, "--perfect" );
            guard( [&] {
                bool ok = is_perfect( bound.model, bound.system, m, a );
                report.verdicts.push_back( ok ? Verdict::ok( "perfect(" + m + ":" + a + ")" )
                                              : Verdict::failed( "perfect(" + m + ":" + a + ")",
                                                                 m + " is not " + a + "-perfect", { m } ) );
            } );
        }
        for ( const auto& arg : c.lambda )
        {
            auto [m, props] = split_pair( arg, "--lambda" );
            guard( [&, m = m, props = props] {
                bool ok = is_lambda_perfect( bound.model, bound.system, m, split_commas( props ) );
                auto check = "lambda_perfect(" + m + ":" + props + ")";
                report.verdicts.push_back( ok ? Verdict::ok( check )
                                              : Verdict::failed( check, m + " is not perfect for every property",
                                                                 { m } ) );
            } );
        }
        for ( const auto& arg : c.classical_perfect )
        {
            auto [m, a] = split_pair( arg, "--classical-perfect" );
            guard( [&, m = m, a = a] {
                report.verdicts.push_back( is_classical_perfect( bound.model, bound.system, m, a ) );
            } );
        }
        if ( c.knowledgable )
            report.verdicts.push_back( is_knowledgable( bound.model, bound.system ) );
    }
    return valid ? exit_code( report ) : 2;
}

struct VerifyFlags
{
    int theorem = 0;
    std::string property;
    std::string pair;
    std::string focus;
};

std::vector<std::string> classical_properties( const StatePropertySpace& space )
{
    std::vector<std::string> out;
    for ( const auto& [id, p] : space.properties() )
        if ( is_classical_property( space, id ) )
            out.push_back( id );
    return out;
}

int run_verify( Report& report, const CommonFlags& f, const VerifyFlags& v )
{
    const auto mode = f.strict_inversion ? InversionMode::strict : InversionMode::relational;
    const auto quantify = parse_quantify( f.quantify );
    for ( const auto& path : f.files )
    {
        auto file = load( path );
        if ( !validate_into( report, file, f ) )
            return 2;
        const auto& doc = file.doc;
        try
        {
            if ( v.theorem == 1 || v.theorem == 2 )
            {
                const auto& rel = pick_relation( doc, f.relation, false );
                auto bound = bind_relation( doc, rel.id );
                auto props = v.property.empty() ? classical_properties( bound.system )
                                                : std::vector<std::string>{ v.property };
                if ( props.empty() )
                    throw InputError{ "the observed space has no classical property" };
                for ( const auto& a : props )
                {
                    if ( v.theorem == 1 )
                    {
                        report.verdicts.push_back( verify_theorem1( bound.model, bound.system, a, mode ) );
                        continue;
                    }
                    if ( !v.pair.empty() )
                    {
                        auto [m, ms] = split_pair( v.pair, "--pair" );
                        report.verdicts.push_back( verify_theorem2( bound.model, bound.system, a, m, ms ) );
                        continue;
                    }
                    bool any = false;
                    for ( const auto& m : bound.model.space.states() )
                        for ( const auto& ms : bound.model.space.states() )
                        {
                            auto verdict = verify_theorem2( bound.model, bound.system, a, m, ms );
                            if ( verdict.status == VerdictStatus::premise_violated )
                                continue;
                            any = true;
                            report.verdicts.push_back( std::move( verdict ) );
                        }
                    if ( !any )
                        report.verdicts.push_back( Verdict::premise(
                                "theorem2(" + a + ")", "no pair of a-perfect and a_perp-perfect observer states" ) );
                }
                continue;
            }

            const auto& rel = pick_relation( doc, f.relation, true );
            auto bound = bind_relation( doc, rel.id );
            SelfModel sm{ bound.model, v.focus };
            auto kernel = make_kernel( sm );
            const auto& names = bound.model.space.states();
            const auto focus = v.focus.empty() ? bound.model.indicator : v.focus;
            if ( v.theorem == 3 )
            {
                report.verdicts.push_back( theorem3_check( kernel, names ) );
                continue;
            }
            auto cert = diagonal_contradiction( kernel, quantify );
            auto replay = replay_certificate( kernel, cert, quantify );
            if ( v.theorem == 4 )
            {
                report.verdicts.push_back(
                        cert.kind == CertificateKind::counterexample
                                ? Verdict::failed( "theorem4", "a consistent p_a-classical perfect state exists",
                                                   { names[cert.candidate.value_or( 0 )] } )
                                : Verdict::ok( "theorem4", "confirmed (" + std::string{ to_string( cert.kind ) } + ")" ) );
            }
            else
            {
                report.verdicts.push_back( theorem5_check( kernel, names, quantify ) );
            }
            report.verdicts.push_back( replay );
            report.certificates.push_back( { rel.id + ":" + focus, std::move( cert ), names } );
        }
        catch ( const ModelError& e )
        {
            throw InputError{ path + ": " + e.what() };
        }
    }
    return exit_code( report );
}

struct SearchFlags
{
    int max_states = 2;
    std::string mode;
    std::uint64_t samples = 100000;
    std::int64_t seed = 0;
    unsigned jobs = 1;
};

int run_search( Report& report, const CommonFlags& f, const SearchFlags& s )
{
    SearchOptions opt;
    opt.max_states = s.max_states;
    auto mode = s.mode.empty() ? ( s.max_states <= max_exhaustive_states ? "exhaustive" : "sampled" ) : s.mode;
    opt.mode = mode == "sampled" ? SearchMode::sampled : SearchMode::exhaustive;
    opt.samples = s.samples;
    opt.seed = s.seed;
    opt.quantify = parse_quantify( f.quantify );
    opt.jobs = s.jobs;
    report.flags.emplace_back( "max_states", std::to_string( s.max_states ) );
    report.flags.emplace_back( "mode", mode );
    report.flags.emplace_back( "samples", std::to_string( s.samples ) );
    report.flags.emplace_back( "seed", std::to_string( s.seed ) );
    try
    {
        report.search = search_models( opt );
    }
    catch ( const ModelError& e )
    {
        throw InputError{ e.what() };
    }
    return exit_code( report );
}

} // namespace

int main( int argc, char** argv )
{
    CLI::App app{ "Finite state-property model checker" };
    app.require_subcommand( 1 );

    CommonFlags common;
    CheckFlags check_flags;
    VerifyFlags verify_flags;
    SearchFlags search_flags;

    auto add_output = [&]( CLI::App* sub ) {
        sub->add_option( "--format", common.format, "text or structured" )
                ->check( CLI::IsMember( { "text", "structured" } ) );
        sub->add_flag( "--no-timing", common.no_timing, "omit durations from the report" );
    };
    auto add_model = [&]( CLI::App* sub ) {
        sub->add_option( "files", common.files, ".spm model files" )->required()->check( CLI::ExistingFile );
        sub->add_flag( "--allow-nonsurjective", common.allow_nonsurjective,
                       "report a non-surjective relation as a warning" );
        sub->add_flag( "--strict-inversion", common.strict_inversion,
                       "require single-valued entries for inversions" );
        sub->add_option( "--relation", common.relation, "relation to use when several are declared" );
        sub->add_option( "--quantify", common.quantify, "diagonal or full" )
                ->check( CLI::IsMember( { "diagonal", "full" } ) );
        add_output( sub );
    };

    auto* check = app.add_subcommand( "check", "validate models and evaluate predicates" );
    add_model( check );
    check->add_option( "--perfect", check_flags.perfect, "STATE:PROPERTY perfectness check" );
    check->add_option( "--lambda", check_flags.lambda, "STATE:P1,P2,... perfectness for every property" );
    check->add_option( "--classical-perfect", check_flags.classical_perfect, "STATE:PROPERTY" );
    check->add_flag( "--knowledgable", check_flags.knowledgable, "check that the observer is knowledgable" );
    check->add_flag( "--determination", check_flags.determination, "check that properties determine states" );

    auto* verify = app.add_subcommand( "verify", "verify a theorem on a model" );
    add_model( verify );
    verify->add_option( "--theorem", verify_flags.theorem, "theorem number" )->required()->check( CLI::Range( 1, 5 ) );
    verify->add_option( "--property", verify_flags.property, "classical property of the observed space" );
    verify->add_option( "--pair", verify_flags.pair, "M:MSTAR observer states for theorem 2" );
    verify->add_option( "--focus", verify_flags.focus, "focus property of a self-observing model" );

    auto* search = app.add_subcommand( "search", "sweep self-observing models" );
    add_output( search );
    search->add_option( "--max-states", search_flags.max_states, "largest observer size" )->required();
    search->add_option( "--mode", search_flags.mode, "exhaustive or sampled" )
            ->check( CLI::IsMember( { "exhaustive", "sampled" } ) );
    search->add_option( "--samples", search_flags.samples, "samples in sampled mode" );
    search->add_option( "--seed", search_flags.seed, "generator seed" );
    search->add_option( "--jobs", search_flags.jobs, "worker threads" )->check( CLI::Range( 1U, 256U ) );
    search->add_option( "--quantify", common.quantify, "diagonal or full" )
            ->check( CLI::IsMember( { "diagonal", "full" } ) );

    try
    {
        app.parse( argc, argv );
    }
    catch ( const CLI::Success& e )
    {
        return app.exit( e );
    }
    catch ( const CLI::ParseError& e )
    {
        app.exit( e );
        return 2;
    }

    Report report;
    int code = 0;
    try
    {
        if ( check->parsed() )
        {
            report.command = "check";
            add_common_flags( report, common );
            code = run_check( report, common, check_flags );
        }
        else if ( verify->parsed() )
        {
            report.command = "verify";
            add_common_flags( report, common );
            report.flags.emplace_back( "theorem", std::to_string( verify_flags.theorem ) );
            code = run_verify( report, common, verify_flags );
        }
        else
        {
            report.command = "search";
            report.flags.emplace_back( "format", common.format );
            report.flags.emplace_back( "quantify", common.quantify );
            code = run_search( report, common, search_flags );
        }
    }
    catch ( const InputError& e )
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    catch ( const ModelError& e )
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    const bool timing = !common.no_timing;
    std::cout << ( common.format == "structured" ? render_structured( report, timing ) : render_text( report, timing ) );
    if ( code == 2 )
        std::cerr << "error: model failed validation\n";
    return code;
}
