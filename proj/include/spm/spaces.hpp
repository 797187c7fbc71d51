#pragma once

#include "spm/core.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spm
{

/// A test, extensionally: one outcome set per state of the owning space.
struct Test
{
    std::string id;
    std::vector<OutcomeSet> outcomes;

    friend bool operator==( const Test&, const Test& ) = default;
};

/// A property is stored as the explicit list of tests that represent it.
struct Property
{
    std::string id;
    std::vector<std::string> representatives;
};

enum class Actuality
{
    actual,
    potential,
};

/// Finite state-property space: states, tests, and properties over them.
/// States are kept in lexicographic order; index i is the i-th smallest id.
class StatePropertySpace
{
public:
    using TestEntries = std::map<std::string, OutcomeSet>;

    /// Throws ModelError (EmptySpace, DuplicateId, PartialTest, UnknownState, UnknownTest).
    StatePropertySpace( std::string name, std::vector<std::string> states,
                        const std::vector<std::pair<std::string, TestEntries>>& tests,
                        std::vector<Property> properties );

    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] const std::vector<std::string>& states() const { return states_; }
    [[nodiscard]] std::size_t size() const { return states_.size(); }
    [[nodiscard]] const std::map<std::string, Test>& tests() const { return tests_; }
    [[nodiscard]] const std::map<std::string, Property>& properties() const { return properties_; }

    [[nodiscard]] StateIndex state_index( const std::string& id ) const;
    [[nodiscard]] std::optional<StateIndex> find_state( const std::string& id ) const;
    [[nodiscard]] const Test& test( const std::string& id ) const;
    [[nodiscard]] const Property& property( const std::string& id ) const;
    [[nodiscard]] bool has_property( const std::string& id ) const { return properties_.contains( id ); }

    [[nodiscard]] StateSet empty_set() const { return StateSet{ states_.size() }; }

private:
    std::string name_;
    std::vector<std::string> states_;
    std::map<std::string, Test> tests_;
    std::map<std::string, Property> properties_;
};

/// States where the test yields yes with certainty.
StateSet certain_yes_set( const Test& t );

/// The Cartan map κ(a). Throws UnknownProperty, InconsistentEquivalenceClass.
StateSet actual_states( const StatePropertySpace& space, const std::string& property );

Actuality actuality_status( const StatePropertySpace& space, const std::string& property, const std::string& state );

bool tests_equivalent( const StatePropertySpace& space, const Test& t, const Test& t2 );
bool tests_equivalent( const StatePropertySpace& space, const std::string& t, const std::string& t2 );

Test inverse_test( const Test& t );

/// A test with a predetermined (single-valued) answer in every state.
bool is_classical_test( const Test& t );

/// True iff every representative is classical. A class mixing classical and
/// non-classical representatives throws InconsistentEquivalenceClass.
bool is_classical_property( const StatePropertySpace& space, const std::string& property );

/// κ(a⊥), derived from the inverse of any representative. Requires a classical.
StateSet inverse_actual_states( const StatePropertySpace& space, const std::string& property );

/// Checks that κ(a), κ(a⊥) partition the states and that the inverses of all
/// representatives are pairwise equivalent. Throws NotClassical.
Verdict classicality_verdict( const StatePropertySpace& space, const std::string& property );

/// Properties actual at a state, in id order.
std::vector<std::string> property_profile( const StatePropertySpace& space, const std::string& state );

/// Passes iff distinct states have distinct property profiles.
Verdict state_determination_verdict( const StatePropertySpace& space );

/// Structural checks that are reported rather than thrown: equivalence
/// classes, mixed classes, and declared `<a>_perp` inverses.
std::vector<Verdict> validate_space( const StatePropertySpace& space );

std::vector<std::string> state_names( const StatePropertySpace& space, const StateSet& set );

} // namespace spm
