#pragma once

#include "spm/diagonal.hpp"
#include "spm/search.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spm
{

inline constexpr int report_schema_version = 1;

struct CertificateRecord
{
    std::string subject; // e.g. "self:a"
    Certificate certificate;
    std::vector<std::string> names;
};

/// Everything one CLI invocation produces; rendered only after all work is done.
struct Report
{
    std::string command;
    std::vector<std::string> inputs;
    std::vector<std::pair<std::string, std::string>> flags;
    std::vector<Verdict> verdicts;
    std::vector<CertificateRecord> certificates;
    std::optional<SearchReport> search;
    std::optional<ObservationSweepReport> sweep;
};

nlohmann::ordered_json to_json( const Verdict& v );
nlohmann::ordered_json to_json( const CertificateRecord& c );
nlohmann::ordered_json to_json( const SearchReport& s, bool timing );
nlohmann::ordered_json to_json( const ObservationSweepReport& s );
nlohmann::ordered_json to_json( const Report& r, bool timing );

std::string render_structured( const Report& r, bool timing );
std::string render_text( const Report& r, bool timing );

/// 0 when everything passed or was confirmed, 1 on any failed verdict,
/// counterexample certificate, or pa-perfect state found.
int exit_code( const Report& r );

} // namespace spm
