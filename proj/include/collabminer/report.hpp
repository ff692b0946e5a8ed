#pragma once

#include "json.hpp"

#include "collabminer/composer.hpp"
#include "collabminer/conformance.hpp"
#include "collabminer/event_log.hpp"

namespace cm {

// JSON renderings of the pipeline reports. Keys are emitted in sorted order,
// so `dump()` output is stable across runs.

nlohmann::json to_json(const ValidationReport& report, const EventLog& log);
nlohmann::json to_json(const CollabInfo& info);
nlohmann::json to_json(const CollaborationPattern& pattern);
nlohmann::json to_json(const DiscoveryReport& report);
nlohmann::json to_json(const ConformanceResult& result);
/// CollabInfo plus log and pattern statistics.
nlohmann::json stats_json(const EventLog& log, const CollaborationPattern& pattern);

}  // namespace cm
