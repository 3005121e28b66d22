#include "lmdetect/graph.hpp"

#include <map>
#include <tuple>

#include <json.hpp>

#include "lmdetect/errors.hpp"

namespace lmd {

std::string to_string(EdgeCategory category) {
    return category == EdgeCategory::HostHost ? "host_host" : "host_container";
}

EdgeIdentity identity_of(const AccessEdge& edge) {
    return {edge.ts, edge.src, edge.dst, edge.user};
}

AccessGraph build_graph(const EventStream& stream, std::int64_t dedup_window) {
    if (dedup_window < 0) throw ConfigError("dedup_window must be >= 0");

    using DedupKey = std::tuple<EventKind, std::string, std::string, std::string, std::string>;
    std::map<DedupKey, std::int64_t> last_retained;

    AccessGraph graph;
    for (const auto& event : stream.events) {
        if (event.kind == EventKind::Noise || !event.success) continue;
        DedupKey key{event.kind, event.src, event.dst, event.user, event.dst_account};
        auto it = last_retained.find(key);
        if (it != last_retained.end() && event.ts - it->second <= dedup_window) continue;
        last_retained[key] = event.ts;

        AccessEdge edge;
        edge.ts = event.ts;
        edge.src = event.src;
        edge.dst = event.dst;
        edge.user = event.user;
        edge.dst_account = event.dst_account;
        edge.category = event.kind == EventKind::HostLogin ? EdgeCategory::HostHost
                                                           : EdgeCategory::HostContainer;
        graph.edges.push_back(std::move(edge));
    }
    return graph;
}

std::string edges_to_jsonl(const std::vector<AccessEdge>& edges) {
    std::string out;
    for (const auto& edge : edges) {
        nlohmann::ordered_json obj;
        obj["ts"] = edge.ts;
        obj["src"] = edge.src;
        obj["dst"] = edge.dst;
        obj["user"] = edge.user;
        obj["dst_account"] = edge.dst_account;
        obj["category"] = to_string(edge.category);
        out += obj.dump();
        out += '\n';
    }
    return out;
}

}  // namespace lmd
