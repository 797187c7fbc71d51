#include "spm/core.hpp"

#include <bit>

namespace spm
{

std::size_t StateSet::count() const
{
    std::size_t n = 0;
    for ( auto w : words_ )
        n += static_cast<std::size_t>( std::popcount( w ) );
    return n;
}

std::vector<StateIndex> StateSet::members() const
{
    std::vector<StateIndex> out;
    for ( StateIndex i = 0; i < universe_; ++i )
        if ( contains( i ) )
            out.push_back( i );
    return out;
}

StateSet StateSet::complement() const
{
    StateSet out{ universe_ };
    for ( StateIndex i = 0; i < universe_; ++i )
        if ( !contains( i ) )
            out.insert( i );
    return out;
}

StateSet StateSet::operator|( const StateSet& other ) const
{
    StateSet out = *this;
    for ( std::size_t w = 0; w < words_.size(); ++w )
        out.words_[w] |= other.words_[w];
    return out;
}

StateSet StateSet::operator&( const StateSet& other ) const
{
    StateSet out = *this;
    for ( std::size_t w = 0; w < words_.size(); ++w )
        out.words_[w] &= other.words_[w];
    return out;
}

bool OutcomeTable::surjective() const
{
    bool yes = false;
    bool no = false;
    for ( auto c : cells_ )
    {
        yes = yes || c.has_yes();
        no = no || c.has_no();
    }
    return yes && no;
}

std::string_view to_string( ErrorKind kind )
{
    switch ( kind )
    {
    case ErrorKind::unknown_state: return "UnknownState";
    case ErrorKind::unknown_property: return "UnknownProperty";
    case ErrorKind::unknown_test: return "UnknownTest";
    case ErrorKind::inconsistent_equivalence_class: return "InconsistentEquivalenceClass";
    case ErrorKind::partial_test: return "PartialTest";
    case ErrorKind::empty_space: return "EmptySpace";
    case ErrorKind::not_classical: return "NotClassical";
    case ErrorKind::non_surjective: return "NonSurjective";
    case ErrorKind::empty_lambda: return "EmptyLambda";
    case ErrorKind::partial_alpha: return "PartialAlpha";
    case ErrorKind::invalid_model: return "InvalidModel";
    case ErrorKind::not_classical_focus: return "NotClassicalFocus";
    case ErrorKind::bounds_too_large: return "BoundsTooLarge";
    case ErrorKind::invalid_seed: return "InvalidSeed";
    case ErrorKind::syntax_error: return "SyntaxError";
    case ErrorKind::duplicate_id: return "DuplicateId";
    case ErrorKind::unresolved_reference: return "UnresolvedReference";
    case ErrorKind::non_total_table: return "NonTotalTable";
    case ErrorKind::empty_outcome: return "EmptyOutcome";
    }
    return "Unknown";
}

std::string_view to_string( VerdictStatus status )
{
    switch ( status )
    {
    case VerdictStatus::pass: return "pass";
    case VerdictStatus::fail: return "fail";
    case VerdictStatus::premise_violated: return "premise_violated";
    }
    return "unknown";
}

std::string format_set( const StateSet& set, const std::vector<std::string>& names )
{
    std::string out = "{";
    bool first = true;
    for ( auto i : set.members() )
    {
        if ( !first )
            out += ",";
        out += names[i];
        first = false;
    }
    return out + "}";
}

} // namespace spm
