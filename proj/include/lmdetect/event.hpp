#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lmd {

enum class EventKind { HostLogin, ContainerAccess, ContainerEscape, Noise };

std::string to_string(EventKind kind);
EventKind event_kind_from_string(const std::string& text);

// Simulator-assigned ground-truth label. Absent on real log streams.
struct EventLabel {
    bool malicious = false;
    int campaign = 0;  // meaningful only when malicious
    int step = 0;

    static EventLabel benign() { return {}; }
    static EventLabel attack(int campaign, int step) { return {true, campaign, step}; }

    friend bool operator==(const EventLabel&, const EventLabel&) = default;
};

// One normalized log record: a host login, a container access (local exec or
// remote API), a container escape, or non-edge noise.
struct AccessEvent {
    std::int64_t ts = 0;  // seconds since epoch
    EventKind kind = EventKind::Noise;
    std::string src;
    std::string dst;
    std::string user;         // acting user
    std::string dst_account;  // account accessed on the destination
    bool success = true;
    std::optional<EventLabel> label;
    std::optional<std::string> noise_tag;

    friend bool operator==(const AccessEvent&, const AccessEvent&) = default;
};

// Total order: timestamp, then (kind, src, dst, user), then remaining fields
// so that sorting is deterministic for any input permutation.
bool event_before(const AccessEvent& a, const AccessEvent& b);

void sort_events_canonical(std::vector<AccessEvent>& events);

// Chronologically ordered event list (ties broken by event_before).
struct EventStream {
    std::vector<AccessEvent> events;

    friend bool operator==(const EventStream&, const EventStream&) = default;
};

// Canonical JSONL: one object per line with keys
// ts, kind, src, dst, user, dst_account, success, label, noise_tag.
std::string to_canonical_line(const AccessEvent& event);
AccessEvent parse_canonical_line(std::string_view line);

std::string serialize_stream(const EventStream& stream);

}  // namespace lmd
