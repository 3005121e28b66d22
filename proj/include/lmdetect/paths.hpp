#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "lmdetect/graph.hpp"
#include "lmdetect/model.hpp"

namespace lmd {

// A causal chain: same acting user on every edge, consecutive edges connect
// dst -> src with non-decreasing timestamps and inter-edge gaps bounded by
// the enumeration's time threshold.
struct Path {
    std::vector<AccessEdge> edges;  // never empty

    const std::string& user() const { return edges.front().user; }
    int hop_count() const { return static_cast<int>(edges.size()); }
    std::int64_t start_ts() const { return edges.front().ts; }
    std::int64_t end_ts() const { return edges.back().ts; }

    // src of the first edge followed by each edge's dst.
    std::vector<std::string> node_sequence() const;

    friend bool operator==(const Path&, const Path&) = default;
};

// Union of slice memberships of every container endpoint on the path.
std::set<int> slices_touched(const Path& path, const Topology& topo);

// Every causal chain of pairwise-distinct edges up to max_hops — all
// sub-chains, not only maximal ones. Output in canonical order: start_ts,
// then lexicographic node sequence, then edge timestamps.
// Throws ConfigError when tau <= 0 or max_hops < 1.
std::vector<Path> enumerate_paths(const AccessGraph& graph, std::int64_t tau, int max_hops);

std::string paths_to_jsonl(const std::vector<Path>& paths);

}  // namespace lmd
