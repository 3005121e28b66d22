#include "lmdetect/ingest.hpp"

#include <fstream>
#include <sstream>

#include "lmdetect/errors.hpp"
#include "lmdetect/time_util.hpp"

namespace lmd {

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> tokens;
    size_t pos = 0;
    while (pos < line.size()) {
        size_t next = line.find(' ', pos);
        if (next == std::string_view::npos) next = line.size();
        if (next > pos) tokens.push_back(line.substr(pos, next - pos));
        pos = next + 1;
    }
    return tokens;
}

std::string expect_kv(std::string_view token, std::string_view key, std::string_view line) {
    if (token.size() <= key.size() + 1 || token.substr(0, key.size()) != key ||
        token[key.size()] != '=') {
        throw ParseError("expected '" + std::string(key) + "=<value>' in line: " + std::string(line));
    }
    return std::string(token.substr(key.size() + 1));
}

AccessEvent parse_host_login(const std::vector<std::string_view>& tokens, std::string_view line) {
    if (tokens.size() != 7) throw ParseError("host_login line needs 7 fields: " + std::string(line));
    AccessEvent event;
    event.ts = parse_iso8601_utc(tokens[0]);
    event.kind = EventKind::HostLogin;
    event.src = expect_kv(tokens[2], "src", line);
    event.dst = expect_kv(tokens[3], "dst", line);
    event.user = expect_kv(tokens[4], "user", line);
    event.dst_account = expect_kv(tokens[5], "account", line);
    std::string result = expect_kv(tokens[6], "result", line);
    if (result == "success") {
        event.success = true;
    } else if (result == "fail") {
        event.success = false;
    } else {
        throw ParseError("unknown result token '" + result + "' in line: " + std::string(line));
    }
    return event;
}

AccessEvent parse_container_event(const std::vector<std::string_view>& tokens,
                                  std::string_view line) {
    if (tokens.size() != 7) throw ParseError("container_event line needs 7 fields: " + std::string(line));
    AccessEvent event;
    event.ts = parse_iso8601_utc(tokens[0]);
    const std::string id = expect_kv(tokens[2], "id", line);
    const std::string host = expect_kv(tokens[3], "host", line);
    const std::string action = expect_kv(tokens[4], "action", line);
    const std::string src = expect_kv(tokens[5], "src", line);
    event.user = expect_kv(tokens[6], "user", line);
    event.dst_account = event.user;  // grammar B carries no separate account
    event.success = true;

    if (action == "exec") {
        event.kind = EventKind::ContainerAccess;
        event.src = src;
        event.dst = id;
    } else if (action == "escape") {
        if (src != id) {
            throw ParseError("container escape src must equal the container id: " + std::string(line));
        }
        event.kind = EventKind::ContainerEscape;
        event.src = id;
        event.dst = host;
    } else if (action == "create" || action == "start" || action == "stop") {
        event.kind = EventKind::Noise;
        event.src = src;
        event.dst = id;
        event.noise_tag = "container-lifecycle";
    } else {
        throw ParseError("unknown action token '" + action + "' in line: " + std::string(line));
    }
    return event;
}

}  // namespace

AccessEvent parse_raw_line(std::string_view line) {
    auto tokens = split_tokens(line);
    if (tokens.size() < 2) throw ParseError("unrecognized log line: " + std::string(line));
    if (tokens[1] == "host_login") return parse_host_login(tokens, line);
    if (tokens[1] == "container_event") return parse_container_event(tokens, line);
    throw ParseError("unrecognized record type '" + std::string(tokens[1]) + "'");
}

AccessEvent parse_event_line(std::string_view line) {
    size_t first = line.find_first_not_of(" \t\r");
    if (first != std::string_view::npos && line[first] == '{') return parse_canonical_line(line);
    return parse_raw_line(line);
}

void validate_event(const AccessEvent& event, const Topology& topo) {
    if (event.ts < 0) throw ValidationError("event timestamp must be non-negative");
    if (!topo.has_node(event.src)) throw ValidationError("unknown node '" + event.src + "'");
    if (!topo.has_node(event.dst)) throw ValidationError("unknown node '" + event.dst + "'");
    const NodeKind src_kind = topo.kind_of(event.src);
    const NodeKind dst_kind = topo.kind_of(event.dst);
    switch (event.kind) {
        case EventKind::HostLogin:
            if (src_kind == NodeKind::Container) {
                throw ValidationError("host login cannot originate from container '" + event.src + "'");
            }
            if (dst_kind != NodeKind::Host) {
                throw ValidationError("host login destination '" + event.dst + "' is not a host");
            }
            break;
        case EventKind::ContainerAccess:
            if (src_kind == NodeKind::Container) {
                throw ValidationError("container access cannot originate from container '" +
                                      event.src + "'");
            }
            if (dst_kind != NodeKind::Container) {
                throw ValidationError("container access destination '" + event.dst +
                                      "' is not a container");
            }
            break;
        case EventKind::ContainerEscape: {
            if (src_kind != NodeKind::Container) {
                throw ValidationError("container escape source '" + event.src + "' is not a container");
            }
            if (dst_kind != NodeKind::Host) {
                throw ValidationError("container escape destination '" + event.dst + "' is not a host");
            }
            const auto& info = topo.container(event.src);
            if (info.host != event.dst) {
                throw ValidationError("container '" + event.src + "' can only escape to its host '" +
                                      info.host + "'");
            }
            break;
        }
        case EventKind::Noise:
            break;  // endpoints just have to exist
    }
}

EventStream read_event_stream(const std::vector<std::string>& lines, const Topology& topo) {
    EventStream stream;
    stream.events.reserve(lines.size());
    for (size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            AccessEvent event = parse_event_line(line);
            validate_event(event, topo);
            stream.events.push_back(std::move(event));
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(i + 1) + ": " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError("line " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    sort_events_canonical(stream.events);
    return stream;
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open event file '" + path + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

EventStream read_event_file(const std::string& path, const Topology& topo) {
    try {
        return read_event_stream(read_lines(path), topo);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

EventStream read_event_files(const std::vector<std::string>& paths, const Topology& topo) {
    EventStream merged;
    for (const auto& path : paths) {
        EventStream part = read_event_file(path, topo);
        merged.events.insert(merged.events.end(), part.events.begin(), part.events.end());
    }
    sort_events_canonical(merged.events);
    return merged;
}

}  // namespace lmd
