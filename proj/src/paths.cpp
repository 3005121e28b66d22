#include "lmdetect/paths.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

#include "lmdetect/errors.hpp"

namespace lmd {

std::vector<std::string> Path::node_sequence() const {
    std::vector<std::string> nodes;
    nodes.reserve(edges.size() + 1);
    nodes.push_back(edges.front().src);
    for (const auto& edge : edges) nodes.push_back(edge.dst);
    return nodes;
}

std::set<int> slices_touched(const Path& path, const Topology& topo) {
    std::set<int> slices;
    for (const auto& edge : path.edges) {
        for (int s : topo.slices_of(edge.src)) slices.insert(s);
        for (int s : topo.slices_of(edge.dst)) slices.insert(s);
    }
    return slices;
}

namespace {

struct Enumerator {
    const std::vector<AccessEdge>& edges;
    std::int64_t tau;
    int max_hops;
    // edge indices grouped by source node, ascending timestamp
    std::map<std::string, std::vector<size_t>> by_src;
    std::vector<size_t> chain;
    std::vector<char> used;
    std::vector<Path> out;

    void extend() {
        Path path;
        path.edges.reserve(chain.size());
        for (size_t i : chain) path.edges.push_back(edges[i]);
        out.push_back(std::move(path));
        if (static_cast<int>(chain.size()) == max_hops) return;

        const AccessEdge& last = edges[chain.back()];
        auto it = by_src.find(last.dst);
        if (it == by_src.end()) return;
        for (size_t j : it->second) {
            const AccessEdge& next = edges[j];
            if (next.ts < last.ts) continue;
            if (next.ts - last.ts > tau) break;  // sorted by ts
            if (next.user != last.user || used[j]) continue;
            used[j] = 1;
            chain.push_back(j);
            extend();
            chain.pop_back();
            used[j] = 0;
        }
    }
};

struct PathSortKey {
    std::int64_t start_ts;
    std::vector<std::string> nodes;
    std::vector<std::int64_t> timestamps;
    std::string user;
    std::vector<std::string> accounts;

    friend auto operator<=>(const PathSortKey&, const PathSortKey&) = default;
};

PathSortKey sort_key(const Path& path) {
    PathSortKey key;
    key.start_ts = path.start_ts();
    key.nodes = path.node_sequence();
    key.user = path.user();
    for (const auto& edge : path.edges) {
        key.timestamps.push_back(edge.ts);
        key.accounts.push_back(edge.dst_account);
    }
    return key;
}

}  // namespace

std::vector<Path> enumerate_paths(const AccessGraph& graph, std::int64_t tau, int max_hops) {
    if (tau <= 0) throw ConfigError("tau must be > 0");
    if (max_hops < 1) throw ConfigError("max_hops must be >= 1");

    Enumerator en{graph.edges, tau, max_hops, {}, {}, std::vector<char>(graph.edges.size(), 0), {}};
    for (size_t i = 0; i < graph.edges.size(); ++i) {
        en.by_src[graph.edges[i].src].push_back(i);
    }
    for (auto& [src, indices] : en.by_src) {
        std::stable_sort(indices.begin(), indices.end(),
                         [&](size_t a, size_t b) { return graph.edges[a].ts < graph.edges[b].ts; });
    }
    for (size_t i = 0; i < graph.edges.size(); ++i) {
        en.used[i] = 1;
        en.chain.assign(1, i);
        en.extend();
        en.used[i] = 0;
    }

    std::vector<std::pair<PathSortKey, size_t>> keyed;
    keyed.reserve(en.out.size());
    for (size_t i = 0; i < en.out.size(); ++i) keyed.emplace_back(sort_key(en.out[i]), i);
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<Path> sorted;
    sorted.reserve(en.out.size());
    for (const auto& [key, idx] : keyed) sorted.push_back(std::move(en.out[idx]));
    return sorted;
}

std::string paths_to_jsonl(const std::vector<Path>& paths) {
    std::string out;
    for (const auto& path : paths) {
        nlohmann::ordered_json obj;
        obj["nodes"] = path.node_sequence();
        nlohmann::ordered_json ts = nlohmann::ordered_json::array();
        for (const auto& edge : path.edges) ts.push_back(edge.ts);
        obj["timestamps"] = std::move(ts);
        obj["user"] = path.user();
        obj["hops"] = path.hop_count();
        out += obj.dump();
        out += '\n';
    }
    return out;
}

}  // namespace lmd
