#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "lmdetect/event.hpp"

namespace lmd {

enum class EdgeCategory { HostHost, HostContainer };

std::string to_string(EdgeCategory category);

// One retained successful access. HostHost edges come from host logins,
// HostContainer edges from container accesses and escapes.
struct AccessEdge {
    std::int64_t ts = 0;
    std::string src;
    std::string dst;
    std::string user;
    std::string dst_account;
    EdgeCategory category = EdgeCategory::HostContainer;

    friend auto operator<=>(const AccessEdge&, const AccessEdge&) = default;
};

// Edge identity used for truth matching and predicted-edge set semantics.
struct EdgeIdentity {
    std::int64_t ts = 0;
    std::string src;
    std::string dst;
    std::string user;

    friend auto operator<=>(const EdgeIdentity&, const EdgeIdentity&) = default;
};

EdgeIdentity identity_of(const AccessEdge& edge);

// Directed time-stamped multigraph of successful accesses; edges sorted by
// timestamp (stream order).
struct AccessGraph {
    std::vector<AccessEdge> edges;
};

// One edge per successful non-Noise event, except that events identical in
// (kind, src, dst, user, dst_account) within dedup_window seconds of a
// retained earlier event collapse into that earlier occurrence.
AccessGraph build_graph(const EventStream& stream, std::int64_t dedup_window);

// Debug dump: JSONL with keys ts, src, dst, user, dst_account, category.
std::string edges_to_jsonl(const std::vector<AccessEdge>& edges);

}  // namespace lmd
