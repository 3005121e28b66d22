#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lmdetect/event.hpp"
#include "lmdetect/model.hpp"

namespace lmd {

// Raw grammar A (host auth):
//   <ISO8601-UTC> host_login src=<node> dst=<node> user=<u> account=<a> result=success|fail
// Raw grammar B (container event):
//   <ISO8601-UTC> container_event id=<container> host=<node> action=exec|escape|create|start|stop src=<node> user=<u>
// Lifecycle actions (create/start/stop) map to Noise; escape records must
// carry src=<container id>.
AccessEvent parse_raw_line(std::string_view line);

// Dispatches on the leading character: '{' means canonical JSONL, anything
// else one of the raw grammars.
AccessEvent parse_event_line(std::string_view line);

// Enforces the per-kind endpoint invariants against the topology
// (login targets hosts, accesses target containers, escapes go to the
// container's own host). Throws ValidationError.
void validate_event(const AccessEvent& event, const Topology& topo);

// Parses every line (raw or canonical), resolves node names against the
// topology and returns the canonically sorted stream. Blank lines are
// skipped; errors name the offending line number (1-based).
EventStream read_event_stream(const std::vector<std::string>& lines, const Topology& topo);

EventStream read_event_file(const std::string& path, const Topology& topo);
EventStream read_event_files(const std::vector<std::string>& paths, const Topology& topo);

}  // namespace lmd
