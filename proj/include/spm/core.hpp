#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spm
{

using StateIndex = std::size_t;

/// Possibilistic outcome of one test execution: {yes}, {no} or {yes,no}.
class OutcomeSet
{
public:
    static constexpr OutcomeSet yes() { return OutcomeSet{ yes_bit }; }
    static constexpr OutcomeSet no() { return OutcomeSet{ no_bit }; }
    static constexpr OutcomeSet both() { return OutcomeSet{ yes_bit | no_bit }; }

    constexpr OutcomeSet() : bits_{ yes_bit | no_bit } {}

    [[nodiscard]] constexpr bool has_yes() const { return ( bits_ & yes_bit ) != 0; }
    [[nodiscard]] constexpr bool has_no() const { return ( bits_ & no_bit ) != 0; }
    [[nodiscard]] constexpr bool is_yes() const { return bits_ == yes_bit; }
    [[nodiscard]] constexpr bool is_no() const { return bits_ == no_bit; }
    [[nodiscard]] constexpr bool single_valued() const { return bits_ != ( yes_bit | no_bit ); }

    // {yes} <-> {no}; {yes,no} is fixed.
    [[nodiscard]] constexpr OutcomeSet swapped() const
    {
        return OutcomeSet{ static_cast<std::uint8_t>( ( has_yes() ? no_bit : 0 ) | ( has_no() ? yes_bit : 0 ) ) };
    }

    // Enumeration code: {no}=0 < {yes}=1 < {yes,no}=2.
    [[nodiscard]] constexpr int code() const { return is_no() ? 0 : ( is_yes() ? 1 : 2 ); }
    static constexpr OutcomeSet from_code( int code ) { return code == 0 ? no() : ( code == 1 ? yes() : both() ); }

    [[nodiscard]] std::string_view text() const { return is_yes() ? "yes" : ( is_no() ? "no" : "yes|no" ); }

    friend constexpr bool operator==( OutcomeSet, OutcomeSet ) = default;

private:
    static constexpr std::uint8_t yes_bit = 1;
    static constexpr std::uint8_t no_bit = 2;

    explicit constexpr OutcomeSet( std::uint8_t bits ) : bits_{ bits } {}

    std::uint8_t bits_;
};

/// Dense bitset over the states of one space.
class StateSet
{
public:
    StateSet() = default;
    explicit StateSet( std::size_t universe ) : universe_{ universe }, words_( ( universe + 63 ) / 64, 0 ) {}

    static StateSet full( std::size_t universe )
    {
        StateSet s{ universe };
        for ( std::size_t i = 0; i < universe; ++i )
            s.insert( i );
        return s;
    }

    [[nodiscard]] std::size_t universe() const { return universe_; }
    [[nodiscard]] bool contains( StateIndex i ) const { return ( words_[i / 64] >> ( i % 64 ) ) & 1U; }
    void insert( StateIndex i ) { words_[i / 64] |= std::uint64_t{ 1 } << ( i % 64 ); }
    void erase( StateIndex i ) { words_[i / 64] &= ~( std::uint64_t{ 1 } << ( i % 64 ) ); }

    [[nodiscard]] std::size_t count() const;
    [[nodiscard]] bool empty() const { return count() == 0; }
    [[nodiscard]] std::vector<StateIndex> members() const;

    [[nodiscard]] StateSet complement() const;
    [[nodiscard]] StateSet operator|( const StateSet& other ) const;
    [[nodiscard]] StateSet operator&( const StateSet& other ) const;

    friend bool operator==( const StateSet&, const StateSet& ) = default;

private:
    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Outcome table indexed by (observed state, observer state).
class OutcomeTable
{
public:
    OutcomeTable() = default;
    OutcomeTable( std::size_t observed, std::size_t observers )
            : observed_{ observed }, observers_{ observers }, cells_( observed * observers )
    {
    }

    [[nodiscard]] std::size_t observed_count() const { return observed_; }
    [[nodiscard]] std::size_t observer_count() const { return observers_; }

    [[nodiscard]] OutcomeSet at( StateIndex s, StateIndex m ) const { return cells_[s * observers_ + m]; }
    void set( StateIndex s, StateIndex m, OutcomeSet v ) { cells_[s * observers_ + m] = v; }

    // Some entry admits yes and some entry admits no.
    [[nodiscard]] bool surjective() const;

    friend bool operator==( const OutcomeTable&, const OutcomeTable& ) = default;

private:
    std::size_t observed_ = 0;
    std::size_t observers_ = 0;
    std::vector<OutcomeSet> cells_;
};

enum class ErrorKind
{
    unknown_state,
    unknown_property,
    unknown_test,
    inconsistent_equivalence_class,
    partial_test,
    empty_space,
    not_classical,
    non_surjective,
    empty_lambda,
    partial_alpha,
    invalid_model,
    not_classical_focus,
    bounds_too_large,
    invalid_seed,
    syntax_error,
    duplicate_id,
    unresolved_reference,
    non_total_table,
    empty_outcome,
};

std::string_view to_string( ErrorKind kind );

class ModelError : public std::runtime_error
{
public:
    ModelError( ErrorKind kind, const std::string& message )
            : std::runtime_error{ std::string{ to_string( kind ) } + ": " + message }, kind_{ kind }
    {
    }

    [[nodiscard]] ErrorKind kind() const { return kind_; }

protected:
    struct Preformatted
    {
    };
    ModelError( Preformatted, ErrorKind kind, const std::string& text ) : std::runtime_error{ text }, kind_{ kind } {}

private:
    ErrorKind kind_;
};

enum class VerdictStatus
{
    pass,
    fail,
    premise_violated,
};

std::string_view to_string( VerdictStatus status );

struct Verdict
{
    std::string check;
    VerdictStatus status = VerdictStatus::pass;
    std::string detail;
    std::vector<std::string> witness;

    [[nodiscard]] bool passed() const { return status == VerdictStatus::pass; }

    static Verdict ok( std::string check, std::string detail = {} )
    {
        return Verdict{ std::move( check ), VerdictStatus::pass, std::move( detail ), {} };
    }
    static Verdict failed( std::string check, std::string detail, std::vector<std::string> witness = {} )
    {
        return Verdict{ std::move( check ), VerdictStatus::fail, std::move( detail ), std::move( witness ) };
    }
    static Verdict premise( std::string check, std::string detail, std::vector<std::string> witness = {} )
    {
        return Verdict{ std::move( check ), VerdictStatus::premise_violated, std::move( detail ),
                        std::move( witness ) };
    }
};

// "{a,b,c}" over the given names.
std::string format_set( const StateSet& set, const std::vector<std::string>& names );

} // namespace spm
