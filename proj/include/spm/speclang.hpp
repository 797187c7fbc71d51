#pragma once

#include "spm/core.hpp"
#include "spm/diagonal.hpp"
#include "spm/observation.hpp"
#include "spm/spaces.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spm
{

struct SourceSpan
{
    int line = 0;
    int column = 0;
    int end_line = 0;
    int end_column = 0;
};

struct TestDecl
{
    std::string id;
    std::vector<std::pair<std::string, OutcomeSet>> entries;
    SourceSpan span;
};

struct PropertyDecl
{
    std::string id;
    std::vector<std::string> tests;
    SourceSpan span;
};

/// A `system` block, or an `observer` block when `indicator` is set.
struct SpaceDecl
{
    std::string id;
    std::vector<std::string> states;
    std::optional<std::string> indicator;
    std::vector<TestDecl> tests;
    std::vector<PropertyDecl> properties;
    SourceSpan span;
};

struct RelationEntry
{
    std::string observed;
    std::string observer;
    OutcomeSet outcome;
    SourceSpan span;
};

struct RelationDecl
{
    std::string id;
    std::string observed; // system or observer id
    std::string observer; // observer id
    std::vector<RelationEntry> entries;
    SourceSpan span;
};

struct InversionDecl
{
    std::string id;
    std::string relation;
    std::vector<std::pair<std::string, std::string>> map;
    SourceSpan span;
};

struct TauEntry
{
    std::string observed;
    std::string observer;
    std::string compound;
};

/// Composition for the relation with the same id.
struct CompositionDecl
{
    std::string id;
    std::vector<std::string> compound;
    std::vector<TauEntry> tau;
    std::vector<std::pair<std::string, std::string>> rho;
    std::vector<std::pair<std::string, OutcomeSet>> phi;
    SourceSpan span;
};

struct ModelDocument
{
    std::vector<SpaceDecl> systems;
    std::vector<SpaceDecl> observers;
    std::vector<RelationDecl> relations;
    std::vector<InversionDecl> inversions;
    std::vector<CompositionDecl> compositions;

    [[nodiscard]] const SpaceDecl* find_space( std::string_view id ) const;
    [[nodiscard]] const RelationDecl* find_relation( std::string_view id ) const;
    [[nodiscard]] const InversionDecl* inversion_for( std::string_view relation ) const;
    [[nodiscard]] const CompositionDecl* composition_for( std::string_view relation ) const;
};

class ParseError : public ModelError
{
public:
    ParseError( ErrorKind kind, int line, int column, const std::string& message,
                std::vector<std::string> expected = {} );

    [[nodiscard]] int line() const { return line_; }
    [[nodiscard]] int column() const { return column_; }
    [[nodiscard]] const std::vector<std::string>& expected() const { return expected_; }

private:
    int line_;
    int column_;
    std::vector<std::string> expected_;
};

/// Parses a `.spm` document and resolves every cross-reference.
/// Throws ParseError (SyntaxError, DuplicateId, UnresolvedReference,
/// NonTotalTable, EmptyOutcome) at the first problem.
ModelDocument parse( std::string_view text );

/// Canonical text: blocks ordered system, observer, relation, inversion,
/// composition; ids lexicographic; one table entry per line.
std::string serialize( const ModelDocument& doc );

/// Sorts every list into canonical order and clears spans.
ModelDocument canonicalize( ModelDocument doc );

/// Equality up to entry order and source positions.
bool structurally_equal( const ModelDocument& a, const ModelDocument& b );

struct ValidateOptions
{
    bool allow_nonsurjective = false;
};

/// Semantic checks (equivalence classes, indicator partition, surjectivity,
/// composition consistency). Empty result means valid.
std::vector<Verdict> validate( const ModelDocument& doc, ValidateOptions options = {} );

StatePropertySpace build_space( const SpaceDecl& decl );

/// The observer model behind one relation, with its inversion and
/// composition when declared. Also returns the observed space.
struct BoundRelation
{
    StatePropertySpace system;
    ObserverModel model;
    bool self = false;
};

BoundRelation bind_relation( const ModelDocument& doc, const std::string& relation_id );

} // namespace spm
