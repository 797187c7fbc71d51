#include "spm/speclang.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace spm
{

ParseError::ParseError( ErrorKind kind, int line, int column, const std::string& message,
                        std::vector<std::string> expected )
        : ModelError{ Preformatted{}, kind,
                      std::to_string( line ) + ":" + std::to_string( column ) + ": " + std::string{ to_string( kind ) } + ": " + message },
          line_{ line }, column_{ column }, expected_{ std::move( expected ) }
{
}

namespace
{

enum class Tok
{
    ident,
    lbrace,
    rbrace,
    lparen,
    rparen,
    comma,
    semi,
    arrow,
    equals,
    pipe,
    end,
};

struct Token
{
    Tok kind;
    std::string text;
    int line;
    int column;
};

bool is_id_char( char c )
{
    return ( c >= 'a' && c <= 'z' ) || ( c >= 'A' && c <= 'Z' ) || ( c >= '0' && c <= '9' ) || c == '_' || c == '+' ||
           c == '-';
}

std::string describe( const Token& t )
{
    switch ( t.kind )
    {
    case Tok::ident: return "'" + t.text + "'";
    case Tok::end: return "end of input";
    default: return "'" + t.text + "'";
    }
}

std::vector<Token> lex( std::string_view text )
{
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&]( std::size_t n ) {
        for ( std::size_t k = 0; k < n; ++k, ++i )
        {
            if ( text[i] == '\n' )
            {
                ++line;
                col = 1;
            }
            else
                ++col;
        }
    };
    while ( i < text.size() )
    {
        char c = text[i];
        if ( c == ' ' || c == '\t' || c == '\r' || c == '\n' )
        {
            advance( 1 );
            continue;
        }
        if ( c == '#' )
        {
            while ( i < text.size() && text[i] != '\n' )
                advance( 1 );
            continue;
        }
        const int l = line;
        const int cl = col;
        if ( c == '-' && i + 1 < text.size() && text[i + 1] == '>' )
        {
            out.push_back( { Tok::arrow, "->", l, cl } );
            advance( 2 );
            continue;
        }
        if ( is_id_char( c ) )
        {
            std::size_t j = i;
            while ( j < text.size() && is_id_char( text[j] ) && !( text[j] == '-' && j + 1 < text.size() && text[j + 1] == '>' ) )
                ++j;
            out.push_back( { Tok::ident, std::string{ text.substr( i, j - i ) }, l, cl } );
            advance( j - i );
            continue;
        }
        Tok kind;
        switch ( c )
        {
        case '{': kind = Tok::lbrace; break;
        case '}': kind = Tok::rbrace; break;
        case '(': kind = Tok::lparen; break;
        case ')': kind = Tok::rparen; break;
        case ',': kind = Tok::comma; break;
        case ';': kind = Tok::semi; break;
        case '=': kind = Tok::equals; break;
        case '|': kind = Tok::pipe; break;
        default:
            throw ParseError{ ErrorKind::syntax_error, l, cl,
                              "unexpected character '" + std::string( 1, c ) + "'" };
        }
        out.push_back( { kind, std::string( 1, c ), l, cl } );
        advance( 1 );
    }
    out.push_back( { Tok::end, "", line, col } );
    return out;
}

std::string quote_list( const std::vector<std::string>& items )
{
    std::string out;
    for ( std::size_t i = 0; i < items.size(); ++i )
    {
        if ( i > 0 )
            out += ( i + 1 == items.size() ) ? " or " : ", ";
        out += "'" + items[i] + "'";
    }
    return out;
}

class Parser
{
public:
    explicit Parser( std::vector<Token> tokens ) : toks_{ std::move( tokens ) } {}

    ModelDocument document()
    {
        ModelDocument doc;
        static const std::vector<std::string> block_words{ "system", "observer", "relation", "inversion",
                                                           "composition" };
        do
        {
            const auto& t = peek();
            if ( t.kind == Tok::ident && t.text == "system" )
                doc.systems.push_back( space( false ) );
            else if ( t.kind == Tok::ident && t.text == "observer" )
                doc.observers.push_back( space( true ) );
            else if ( t.kind == Tok::ident && t.text == "relation" )
                doc.relations.push_back( relation() );
            else if ( t.kind == Tok::ident && t.text == "inversion" )
                doc.inversions.push_back( inversion() );
            else if ( t.kind == Tok::ident && t.text == "composition" )
                doc.compositions.push_back( composition() );
            else
                fail( block_words );
        } while ( peek().kind != Tok::end );
        return doc;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    bool at_word( std::string_view w ) const { return peek().kind == Tok::ident && peek().text == w; }

    [[noreturn]] void fail( const std::vector<std::string>& expected ) const
    {
        const auto& t = peek();
        throw ParseError{ ErrorKind::syntax_error, t.line, t.column,
                          "expected " + quote_list( expected ) + ", found " + describe( t ), expected };
    }

    Token expect( Tok kind, std::string_view spelling )
    {
        if ( peek().kind != kind )
            fail( { std::string{ spelling } } );
        return toks_[pos_++];
    }

    void keyword( std::string_view w )
    {
        if ( !at_word( w ) )
            fail( { std::string{ w } } );
        ++pos_;
    }

    std::string ident()
    {
        if ( peek().kind != Tok::ident )
            fail( { "identifier" } );
        return toks_[pos_++].text;
    }

    SourceSpan open_span() const { return { peek().line, peek().column, 0, 0 }; }
    void close_span( SourceSpan& s ) const
    {
        const auto& last = toks_[pos_ - 1];
        s.end_line = last.line;
        s.end_column = last.column + static_cast<int>( last.text.size() );
    }

    OutcomeSet outcome()
    {
        const auto& t = peek();
        if ( t.kind == Tok::semi )
            throw ParseError{ ErrorKind::empty_outcome, t.line, t.column, "missing outcome before ';'",
                              { "yes", "no", "yes|no" } };
        if ( at_word( "no" ) )
        {
            ++pos_;
            return OutcomeSet::no();
        }
        if ( at_word( "yes" ) )
        {
            ++pos_;
            if ( peek().kind == Tok::pipe )
            {
                ++pos_;
                keyword( "no" );
                return OutcomeSet::both();
            }
            return OutcomeSet::yes();
        }
        fail( { "yes", "no", "yes|no" } );
    }

    std::vector<std::string> id_list_until_semi()
    {
        std::vector<std::string> out{ ident() };
        while ( peek().kind == Tok::ident )
            out.push_back( ident() );
        expect( Tok::semi, ";" );
        return out;
    }

    TestDecl test()
    {
        TestDecl t;
        t.span = open_span();
        keyword( "test" );
        t.id = ident();
        expect( Tok::lbrace, "{" );
        do
        {
            auto s = ident();
            expect( Tok::arrow, "->" );
            t.entries.emplace_back( s, outcome() );
            expect( Tok::semi, ";" );
        } while ( peek().kind != Tok::rbrace );
        expect( Tok::rbrace, "}" );
        close_span( t.span );
        return t;
    }

    PropertyDecl property()
    {
        PropertyDecl p;
        p.span = open_span();
        keyword( "property" );
        p.id = ident();
        expect( Tok::lbrace, "{" );
        keyword( "tests" );
        p.tests = id_list_until_semi();
        expect( Tok::rbrace, "}" );
        close_span( p.span );
        return p;
    }

    SpaceDecl space( bool observer )
    {
        SpaceDecl d;
        d.span = open_span();
        ++pos_;
        d.id = ident();
        expect( Tok::lbrace, "{" );
        keyword( "states" );
        d.states = id_list_until_semi();
        if ( observer )
        {
            keyword( "indicator" );
            d.indicator = ident();
            expect( Tok::semi, ";" );
        }
        while ( at_word( "test" ) )
            d.tests.push_back( test() );
        while ( at_word( "property" ) )
            d.properties.push_back( property() );
        if ( peek().kind != Tok::rbrace )
            fail( d.properties.empty() ? std::vector<std::string>{ "test", "property", "}" }
                                       : std::vector<std::string>{ "property", "}" } );
        ++pos_;
        close_span( d.span );
        return d;
    }

    RelationDecl relation()
    {
        RelationDecl r;
        r.span = open_span();
        keyword( "relation" );
        r.id = ident();
        expect( Tok::lparen, "(" );
        r.observed = ident();
        expect( Tok::comma, "," );
        r.observer = ident();
        expect( Tok::rparen, ")" );
        expect( Tok::lbrace, "{" );
        do
        {
            RelationEntry e;
            e.span = open_span();
            expect( Tok::lparen, "(" );
            e.observed = ident();
            expect( Tok::comma, "," );
            e.observer = ident();
            expect( Tok::rparen, ")" );
            expect( Tok::equals, "=" );
            e.outcome = outcome();
            expect( Tok::semi, ";" );
            close_span( e.span );
            r.entries.push_back( std::move( e ) );
        } while ( peek().kind != Tok::rbrace );
        expect( Tok::rbrace, "}" );
        close_span( r.span );
        return r;
    }

    InversionDecl inversion()
    {
        InversionDecl v;
        v.span = open_span();
        keyword( "inversion" );
        v.id = ident();
        keyword( "on" );
        v.relation = ident();
        expect( Tok::lbrace, "{" );
        do
        {
            auto from = ident();
            expect( Tok::arrow, "->" );
            v.map.emplace_back( from, ident() );
            expect( Tok::semi, ";" );
        } while ( peek().kind != Tok::rbrace );
        expect( Tok::rbrace, "}" );
        close_span( v.span );
        return v;
    }

    CompositionDecl composition()
    {
        CompositionDecl c;
        c.span = open_span();
        keyword( "composition" );
        c.id = ident();
        expect( Tok::lbrace, "{" );
        keyword( "compound" );
        c.compound = id_list_until_semi();
        keyword( "tau" );
        expect( Tok::lbrace, "{" );
        do
        {
            TauEntry t;
            expect( Tok::lparen, "(" );
            t.observed = ident();
            expect( Tok::comma, "," );
            t.observer = ident();
            expect( Tok::rparen, ")" );
            expect( Tok::arrow, "->" );
            t.compound = ident();
            expect( Tok::semi, ";" );
            c.tau.push_back( std::move( t ) );
        } while ( peek().kind != Tok::rbrace );
        expect( Tok::rbrace, "}" );
        keyword( "rho" );
        expect( Tok::lbrace, "{" );
        do
        {
            auto from = ident();
            expect( Tok::arrow, "->" );
            c.rho.emplace_back( from, ident() );
            expect( Tok::semi, ";" );
        } while ( peek().kind != Tok::rbrace );
        expect( Tok::rbrace, "}" );
        keyword( "phi" );
        expect( Tok::lbrace, "{" );
        do
        {
            auto from = ident();
            expect( Tok::arrow, "->" );
            c.phi.emplace_back( from, outcome() );
            expect( Tok::semi, ";" );
        } while ( peek().kind != Tok::rbrace );
        expect( Tok::rbrace, "}" );
        expect( Tok::rbrace, "}" );
        close_span( c.span );
        return c;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

// Cross-reference resolution ---------------------------------------------

[[noreturn]] void raise( ErrorKind kind, const SourceSpan& at, const std::string& message )
{
    throw ParseError{ kind, at.line, at.column, message };
}

std::set<std::string> unique_ids( const std::vector<std::string>& ids, const SourceSpan& at, std::string_view what )
{
    std::set<std::string> out;
    for ( const auto& id : ids )
        if ( !out.insert( id ).second )
            raise( ErrorKind::duplicate_id, at, std::string{ what } + " '" + id + "' declared twice" );
    return out;
}

void require_in( const std::set<std::string>& ids, const std::string& id, const SourceSpan& at,
                 std::string_view what )
{
    if ( !ids.contains( id ) )
        raise( ErrorKind::unresolved_reference, at, std::string{ what } + " '" + id + "' is not declared" );
}

// Checks a single-key table for duplicates, unknown keys and totality.
template <typename Entries, typename Key>
void check_table( const Entries& entries, Key key, const std::set<std::string>& domain, const SourceSpan& at,
                  const std::string& table )
{
    std::set<std::string> seen;
    for ( const auto& e : entries )
    {
        const auto& k = key( e );
        require_in( domain, k, at, "state" );
        if ( !seen.insert( k ).second )
            raise( ErrorKind::duplicate_id, at, table + " has two entries for '" + k + "'" );
    }
    for ( const auto& d : domain )
        if ( !seen.contains( d ) )
            raise( ErrorKind::non_total_table, at, table + " has no entry for '" + d + "'" );
}

void resolve( const ModelDocument& doc )
{
    std::set<std::string> blocks;
    std::map<std::string, std::set<std::string>> states_of;
    std::set<std::string> observer_ids;

    auto check_space = [&]( const SpaceDecl& d ) {
        if ( !blocks.insert( d.id ).second )
            raise( ErrorKind::duplicate_id, d.span, "space '" + d.id + "' declared twice" );
        auto states = unique_ids( d.states, d.span, "state" );
        std::set<std::string> tests;
        for ( const auto& t : d.tests )
        {
            if ( !tests.insert( t.id ).second )
                raise( ErrorKind::duplicate_id, t.span, "test '" + t.id + "' declared twice" );
            check_table( t.entries, []( const auto& e ) -> const std::string& { return e.first; }, states, t.span,
                         "test '" + t.id + "'" );
        }
        std::set<std::string> props;
        for ( const auto& p : d.properties )
        {
            if ( !props.insert( p.id ).second )
                raise( ErrorKind::duplicate_id, p.span, "property '" + p.id + "' declared twice" );
            unique_ids( p.tests, p.span, "test reference" );
            for ( const auto& t : p.tests )
                require_in( tests, t, p.span, "test" );
        }
        if ( d.indicator )
            require_in( props, *d.indicator, d.span, "indicator property" );
        states_of[d.id] = std::move( states );
    };

    for ( const auto& d : doc.systems )
        check_space( d );
    for ( const auto& d : doc.observers )
    {
        check_space( d );
        observer_ids.insert( d.id );
    }

    std::set<std::string> relations;
    for ( const auto& r : doc.relations )
    {
        if ( !relations.insert( r.id ).second || blocks.contains( r.id ) )
            raise( ErrorKind::duplicate_id, r.span, "relation '" + r.id + "' declared twice" );
        if ( !states_of.contains( r.observed ) )
            raise( ErrorKind::unresolved_reference, r.span, "space '" + r.observed + "' is not declared" );
        require_in( observer_ids, r.observer, r.span, "observer" );
        const auto& ss = states_of[r.observed];
        const auto& ms = states_of[r.observer];
        std::set<std::pair<std::string, std::string>> seen;
        for ( const auto& e : r.entries )
        {
            require_in( ss, e.observed, e.span, "state" );
            require_in( ms, e.observer, e.span, "observer state" );
            if ( !seen.emplace( e.observed, e.observer ).second )
                raise( ErrorKind::duplicate_id, e.span,
                       "relation '" + r.id + "' has two entries for (" + e.observed + "," + e.observer + ")" );
        }
        for ( const auto& s : ss )
            for ( const auto& m : ms )
                if ( !seen.contains( { s, m } ) )
                    raise( ErrorKind::non_total_table, r.span,
                           "relation '" + r.id + "' has no entry for (" + s + "," + m + ")" );
    }

    auto relation_states = [&]( const std::string& rel, const SourceSpan& at ) -> const RelationDecl& {
        require_in( relations, rel, at, "relation" );
        return *doc.find_relation( rel );
    };

    std::set<std::string> inversions;
    std::set<std::string> inverted;
    for ( const auto& v : doc.inversions )
    {
        if ( !inversions.insert( v.id ).second || blocks.contains( v.id ) || relations.contains( v.id ) )
            raise( ErrorKind::duplicate_id, v.span, "inversion '" + v.id + "' declared twice" );
        const auto& r = relation_states( v.relation, v.span );
        if ( !inverted.insert( v.relation ).second )
            raise( ErrorKind::duplicate_id, v.span, "relation '" + v.relation + "' has two inversions" );
        const auto& ms = states_of[r.observer];
        check_table( v.map, []( const auto& e ) -> const std::string& { return e.first; }, ms, v.span,
                     "inversion '" + v.id + "'" );
        for ( const auto& [from, to] : v.map )
            require_in( ms, to, v.span, "observer state" );
    }

    std::set<std::string> composed;
    for ( const auto& c : doc.compositions )
    {
        const auto& r = relation_states( c.id, c.span );
        if ( !composed.insert( c.id ).second )
            raise( ErrorKind::duplicate_id, c.span, "composition '" + c.id + "' declared twice" );
        auto compound = unique_ids( c.compound, c.span, "compound state" );
        const auto& ss = states_of[r.observed];
        const auto& ms = states_of[r.observer];
        std::set<std::pair<std::string, std::string>> seen;
        for ( const auto& t : c.tau )
        {
            require_in( ss, t.observed, c.span, "state" );
            require_in( ms, t.observer, c.span, "observer state" );
            require_in( compound, t.compound, c.span, "compound state" );
            if ( !seen.emplace( t.observed, t.observer ).second )
                raise( ErrorKind::duplicate_id, c.span,
                       "tau has two entries for (" + t.observed + "," + t.observer + ")" );
        }
        for ( const auto& s : ss )
            for ( const auto& m : ms )
                if ( !seen.contains( { s, m } ) )
                    raise( ErrorKind::non_total_table, c.span, "tau has no entry for (" + s + "," + m + ")" );
        check_table( c.rho, []( const auto& e ) -> const std::string& { return e.first; }, compound, c.span, "rho" );
        for ( const auto& [from, to] : c.rho )
            require_in( ms, to, c.span, "observer state" );
        check_table( c.phi, []( const auto& e ) -> const std::string& { return e.first; }, ms, c.span, "phi" );
    }
}

// Serialization --------------------------------------------------------------

void write_space( std::ostringstream& out, const SpaceDecl& d, bool observer )
{
    out << ( observer ? "observer " : "system " ) << d.id << " {\n  states";
    for ( const auto& s : d.states )
        out << ' ' << s;
    out << ";\n";
    if ( observer && d.indicator )
        out << "  indicator " << *d.indicator << ";\n";
    for ( const auto& t : d.tests )
    {
        out << "  test " << t.id << " {\n";
        for ( const auto& [s, o] : t.entries )
            out << "    " << s << " -> " << o.text() << ";\n";
        out << "  }\n";
    }
    for ( const auto& p : d.properties )
    {
        out << "  property " << p.id << " { tests";
        for ( const auto& t : p.tests )
            out << ' ' << t;
        out << "; }\n";
    }
    out << "}\n";
}

template <typename T>
void sort_by_id( std::vector<T>& v )
{
    std::sort( v.begin(), v.end(), []( const T& a, const T& b ) { return a.id < b.id; } );
}

void canonical_space( SpaceDecl& d )
{
    d.span = {};
    std::sort( d.states.begin(), d.states.end() );
    sort_by_id( d.tests );
    for ( auto& t : d.tests )
    {
        t.span = {};
        std::sort( t.entries.begin(), t.entries.end(),
                   []( const auto& a, const auto& b ) { return a.first < b.first; } );
    }
    sort_by_id( d.properties );
    for ( auto& p : d.properties )
    {
        p.span = {};
        std::sort( p.tests.begin(), p.tests.end() );
    }
}

bool same_space( const SpaceDecl& a, const SpaceDecl& b )
{
    if ( a.id != b.id || a.states != b.states || a.indicator != b.indicator || a.tests.size() != b.tests.size() ||
         a.properties.size() != b.properties.size() )
        return false;
    for ( std::size_t i = 0; i < a.tests.size(); ++i )
        if ( a.tests[i].id != b.tests[i].id || a.tests[i].entries != b.tests[i].entries )
            return false;
    for ( std::size_t i = 0; i < a.properties.size(); ++i )
        if ( a.properties[i].id != b.properties[i].id || a.properties[i].tests != b.properties[i].tests )
            return false;
    return true;
}

} // namespace

const SpaceDecl* ModelDocument::find_space( std::string_view id ) const
{
    for ( const auto* list : { &systems, &observers } )
        for ( const auto& d : *list )
            if ( d.id == id )
                return &d;
    return nullptr;
}

const RelationDecl* ModelDocument::find_relation( std::string_view id ) const
{
    for ( const auto& r : relations )
        if ( r.id == id )
            return &r;
    return nullptr;
}

const InversionDecl* ModelDocument::inversion_for( std::string_view relation ) const
{
    for ( const auto& v : inversions )
        if ( v.relation == relation )
            return &v;
    return nullptr;
}

const CompositionDecl* ModelDocument::composition_for( std::string_view relation ) const
{
    for ( const auto& c : compositions )
        if ( c.id == relation )
            return &c;
    return nullptr;
}

ModelDocument parse( std::string_view text )
{
    Parser parser{ lex( text ) };
    auto doc = parser.document();
    resolve( doc );
    return doc;
}

ModelDocument canonicalize( ModelDocument doc )
{
    for ( auto* list : { &doc.systems, &doc.observers } )
    {
        sort_by_id( *list );
        for ( auto& d : *list )
            canonical_space( d );
    }
    sort_by_id( doc.relations );
    for ( auto& r : doc.relations )
    {
        r.span = {};
        for ( auto& e : r.entries )
            e.span = {};
        std::sort( r.entries.begin(), r.entries.end(), []( const auto& a, const auto& b ) {
            return std::tie( a.observed, a.observer ) < std::tie( b.observed, b.observer );
        } );
    }
    sort_by_id( doc.inversions );
    for ( auto& v : doc.inversions )
    {
        v.span = {};
        std::sort( v.map.begin(), v.map.end() );
    }
    sort_by_id( doc.compositions );
    for ( auto& c : doc.compositions )
    {
        c.span = {};
        std::sort( c.compound.begin(), c.compound.end() );
        std::sort( c.tau.begin(), c.tau.end(), []( const auto& a, const auto& b ) {
            return std::tie( a.observed, a.observer ) < std::tie( b.observed, b.observer );
        } );
        std::sort( c.rho.begin(), c.rho.end() );
        std::sort( c.phi.begin(), c.phi.end(), []( const auto& a, const auto& b ) { return a.first < b.first; } );
    }
    return doc;
}

bool structurally_equal( const ModelDocument& lhs, const ModelDocument& rhs )
{
    auto a = canonicalize( lhs );
    auto b = canonicalize( rhs );
    if ( a.systems.size() != b.systems.size() || a.observers.size() != b.observers.size() ||
         a.relations.size() != b.relations.size() || a.inversions.size() != b.inversions.size() ||
         a.compositions.size() != b.compositions.size() )
        return false;
    for ( std::size_t i = 0; i < a.systems.size(); ++i )
        if ( !same_space( a.systems[i], b.systems[i] ) )
            return false;
    for ( std::size_t i = 0; i < a.observers.size(); ++i )
        if ( !same_space( a.observers[i], b.observers[i] ) )
            return false;
    for ( std::size_t i = 0; i < a.relations.size(); ++i )
    {
        const auto& x = a.relations[i];
        const auto& y = b.relations[i];
        if ( x.id != y.id || x.observed != y.observed || x.observer != y.observer ||
             x.entries.size() != y.entries.size() )
            return false;
        for ( std::size_t j = 0; j < x.entries.size(); ++j )
            if ( x.entries[j].observed != y.entries[j].observed || x.entries[j].observer != y.entries[j].observer ||
                 x.entries[j].outcome != y.entries[j].outcome )
                return false;
    }
    for ( std::size_t i = 0; i < a.inversions.size(); ++i )
        if ( a.inversions[i].id != b.inversions[i].id || a.inversions[i].relation != b.inversions[i].relation ||
             a.inversions[i].map != b.inversions[i].map )
            return false;
    for ( std::size_t i = 0; i < a.compositions.size(); ++i )
    {
        const auto& x = a.compositions[i];
        const auto& y = b.compositions[i];
        if ( x.id != y.id || x.compound != y.compound || x.rho != y.rho || x.phi != y.phi ||
             x.tau.size() != y.tau.size() )
            return false;
        for ( std::size_t j = 0; j < x.tau.size(); ++j )
            if ( std::tie( x.tau[j].observed, x.tau[j].observer, x.tau[j].compound ) !=
                 std::tie( y.tau[j].observed, y.tau[j].observer, y.tau[j].compound ) )
                return false;
    }
    return true;
}

std::string serialize( const ModelDocument& input )
{
    auto doc = canonicalize( input );
    std::ostringstream out;
    bool first = true;
    auto gap = [&] {
        if ( !first )
            out << '\n';
        first = false;
    };
    for ( const auto& d : doc.systems )
    {
        gap();
        write_space( out, d, false );
    }
    for ( const auto& d : doc.observers )
    {
        gap();
        write_space( out, d, true );
    }
    for ( const auto& r : doc.relations )
    {
        gap();
        out << "relation " << r.id << " (" << r.observed << ", " << r.observer << ") {\n";
        for ( const auto& e : r.entries )
            out << "  (" << e.observed << ", " << e.observer << ") = " << e.outcome.text() << ";\n";
        out << "}\n";
    }
    for ( const auto& v : doc.inversions )
    {
        gap();
        out << "inversion " << v.id << " on " << v.relation << " {\n";
        for ( const auto& [from, to] : v.map )
            out << "  " << from << " -> " << to << ";\n";
        out << "}\n";
    }
    for ( const auto& c : doc.compositions )
    {
        gap();
        out << "composition " << c.id << " {\n  compound";
        for ( const auto& s : c.compound )
            out << ' ' << s;
        out << ";\n  tau {\n";
        for ( const auto& t : c.tau )
            out << "    (" << t.observed << ", " << t.observer << ") -> " << t.compound << ";\n";
        out << "  }\n  rho {\n";
        for ( const auto& [from, to] : c.rho )
            out << "    " << from << " -> " << to << ";\n";
        out << "  }\n  phi {\n";
        for ( const auto& [from, o] : c.phi )
            out << "    " << from << " -> " << o.text() << ";\n";
        out << "  }\n}\n";
    }
    return out.str();
}

StatePropertySpace build_space( const SpaceDecl& decl )
{
    std::vector<std::pair<std::string, StatePropertySpace::TestEntries>> tests;
    for ( const auto& t : decl.tests )
        tests.emplace_back( t.id, StatePropertySpace::TestEntries( t.entries.begin(), t.entries.end() ) );
    std::vector<Property> props;
    for ( const auto& p : decl.properties )
        props.push_back( { p.id, p.tests } );
    return StatePropertySpace{ decl.id, decl.states, tests, std::move( props ) };
}

BoundRelation bind_relation( const ModelDocument& doc, const std::string& relation_id )
{
    const auto* r = doc.find_relation( relation_id );
    if ( r == nullptr )
        throw ModelError{ ErrorKind::unresolved_reference, "relation '" + relation_id + "' is not declared" };
    const auto* observed = doc.find_space( r->observed );
    const auto* observer = doc.find_space( r->observer );
    if ( observed == nullptr || observer == nullptr || !observer->indicator )
        throw ModelError{ ErrorKind::unresolved_reference, "relation '" + relation_id + "' has unresolved spaces" };

    auto system = build_space( *observed );
    auto space = build_space( *observer );

    OutcomeTable table{ system.size(), space.size() };
    for ( const auto& e : r->entries )
        table.set( system.state_index( e.observed ), space.state_index( e.observer ), e.outcome );

    std::optional<std::vector<StateIndex>> alpha;
    if ( const auto* v = doc.inversion_for( relation_id ) )
    {
        alpha.emplace( space.size() );
        for ( const auto& [from, to] : v->map )
            ( *alpha )[space.state_index( from )] = space.state_index( to );
    }

    std::optional<CompositionSpec> comp;
    if ( const auto* c = doc.composition_for( relation_id ) )
    {
        CompositionSpec spec;
        spec.observed = system.size();
        spec.observers = space.size();
        spec.compound = c->compound;
        std::sort( spec.compound.begin(), spec.compound.end() );
        auto cindex = [&]( const std::string& id ) {
            return static_cast<std::size_t>( std::lower_bound( spec.compound.begin(), spec.compound.end(), id ) -
                                             spec.compound.begin() );
        };
        spec.tau.resize( spec.observed * spec.observers );
        for ( const auto& t : c->tau )
            spec.tau[system.state_index( t.observed ) * spec.observers + space.state_index( t.observer )] =
                    cindex( t.compound );
        spec.rho.resize( spec.compound.size() );
        for ( const auto& [from, to] : c->rho )
            spec.rho[cindex( from )] = space.state_index( to );
        spec.phi.resize( spec.observers );
        for ( const auto& [from, o] : c->phi )
            spec.phi[space.state_index( from )] = o;
        comp = std::move( spec );
    }

    bool self = r->observed == r->observer;
    return BoundRelation{ std::move( system ),
                          ObserverModel{ std::move( space ), *observer->indicator, std::move( table ),
                                         std::move( alpha ), std::move( comp ) },
                          self };
}

std::vector<Verdict> validate( const ModelDocument& doc, ValidateOptions options )
{
    std::vector<Verdict> out;
    bool spaces_ok = true;
    for ( const auto* list : { &doc.systems, &doc.observers } )
        for ( const auto& d : *list )
        {
            try
            {
                auto space = build_space( d );
                if ( list == &doc.systems )
                    for ( auto& v : validate_space( space ) )
                        out.push_back( std::move( v ) );
            }
            catch ( const ModelError& e )
            {
                spaces_ok = false;
                out.push_back( Verdict::failed( "space(" + d.id + ")", e.what(), { d.id } ) );
            }
        }
    if ( !spaces_ok )
        return out;

    std::set<std::string> observers_checked;
    for ( const auto& r : doc.relations )
    {
        try
        {
            auto bound = bind_relation( doc, r.id );
            for ( auto& v : validate_observer( bound.model, bound.system, { options.allow_nonsurjective } ) )
            {
                // Observer-space verdicts repeat for every relation of the same observer.
                bool space_level = v.check.rfind( "equivalence_class", 0 ) == 0 ||
                                   v.check.rfind( "declared_inverse", 0 ) == 0 || v.check.rfind( "indicator", 0 ) == 0;
                if ( space_level && observers_checked.contains( r.observer ) )
                    continue;
                v.check = r.id + ":" + v.check;
                out.push_back( std::move( v ) );
            }
            observers_checked.insert( r.observer );
        }
        catch ( const ModelError& e )
        {
            out.push_back( Verdict::failed( r.id + ":relation", e.what(), { r.id } ) );
        }
    }

    for ( const auto& d : doc.observers )
    {
        if ( observers_checked.contains( d.id ) )
            continue;
        auto space = build_space( d );
        for ( auto& v : validate_space( space ) )
            out.push_back( std::move( v ) );
        try
        {
            if ( !is_classical_property( space, *d.indicator ) )
                out.push_back( Verdict::failed( d.id + ":indicator", "indicator property is not classical",
                                                { *d.indicator } ) );
        }
        catch ( const ModelError& e )
        {
            out.push_back( Verdict::failed( d.id + ":indicator", e.what(), { *d.indicator } ) );
        }
    }
    return out;
}

} // namespace spm
