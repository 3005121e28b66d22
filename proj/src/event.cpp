#include "lmdetect/event.hpp"

#include <algorithm>
#include <tuple>

#include <json.hpp>

#include "lmdetect/errors.hpp"

namespace lmd {

using ordered_json = nlohmann::ordered_json;

std::string to_string(EventKind kind) {
    switch (kind) {
        case EventKind::HostLogin: return "host_login";
        case EventKind::ContainerAccess: return "container_access";
        case EventKind::ContainerEscape: return "container_escape";
        case EventKind::Noise: return "noise";
    }
    return "noise";
}

EventKind event_kind_from_string(const std::string& text) {
    if (text == "host_login") return EventKind::HostLogin;
    if (text == "container_access") return EventKind::ContainerAccess;
    if (text == "container_escape") return EventKind::ContainerEscape;
    if (text == "noise") return EventKind::Noise;
    throw ParseError("unknown event kind '" + text + "'");
}

namespace {

auto order_key(const AccessEvent& e) {
    return std::tuple<std::int64_t, int, const std::string&, const std::string&,
                      const std::string&, const std::string&, bool>(
        e.ts, static_cast<int>(e.kind), e.src, e.dst, e.user, e.dst_account, e.success);
}

}  // namespace

bool event_before(const AccessEvent& a, const AccessEvent& b) {
    if (auto ka = order_key(a), kb = order_key(b); ka != kb) return ka < kb;
    // Remaining fields only disambiguate exact duplicates' metadata.
    auto tag = [](const AccessEvent& e) { return e.noise_tag.value_or(""); };
    if (tag(a) != tag(b)) return tag(a) < tag(b);
    auto lab = [](const AccessEvent& e) {
        return e.label ? std::tuple(1, e.label->malicious ? 1 : 0, e.label->campaign, e.label->step)
                       : std::tuple(0, 0, 0, 0);
    };
    return lab(a) < lab(b);
}

void sort_events_canonical(std::vector<AccessEvent>& events) {
    std::stable_sort(events.begin(), events.end(), event_before);
}

std::string to_canonical_line(const AccessEvent& event) {
    ordered_json obj;
    obj["ts"] = event.ts;
    obj["kind"] = to_string(event.kind);
    obj["src"] = event.src;
    obj["dst"] = event.dst;
    obj["user"] = event.user;
    obj["dst_account"] = event.dst_account;
    obj["success"] = event.success;
    if (!event.label) {
        obj["label"] = nullptr;
    } else if (!event.label->malicious) {
        obj["label"] = "benign";
    } else {
        obj["label"] = {{"campaign", event.label->campaign}, {"step", event.label->step}};
    }
    if (event.noise_tag) {
        obj["noise_tag"] = *event.noise_tag;
    } else {
        obj["noise_tag"] = nullptr;
    }
    return obj.dump();
}

AccessEvent parse_canonical_line(std::string_view line) {
    ordered_json obj;
    try {
        obj = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed event JSON: ") + e.what());
    }
    if (!obj.is_object()) throw ParseError("event line must be a JSON object");

    static const char* kKeys[] = {"ts",          "kind",    "src",   "dst",      "user",
                                  "dst_account", "success", "label", "noise_tag"};
    for (const char* key : kKeys) {
        if (!obj.contains(key)) throw ParseError(std::string("event missing key '") + key + "'");
    }
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : kKeys) known |= (it.key() == key);
        if (!known) throw ParseError("event has unknown key '" + it.key() + "'");
    }

    AccessEvent event;
    if (!obj["ts"].is_number_integer()) throw ParseError("event ts must be an integer");
    event.ts = obj["ts"].get<std::int64_t>();
    event.kind = event_kind_from_string(obj["kind"].get<std::string>());
    event.src = obj["src"].get<std::string>();
    event.dst = obj["dst"].get<std::string>();
    event.user = obj["user"].get<std::string>();
    event.dst_account = obj["dst_account"].get<std::string>();
    if (!obj["success"].is_boolean()) throw ParseError("event success must be a boolean");
    event.success = obj["success"].get<bool>();

    const auto& label = obj["label"];
    if (label.is_null()) {
        event.label.reset();
    } else if (label.is_string() && label.get<std::string>() == "benign") {
        event.label = EventLabel::benign();
    } else if (label.is_object() && label.contains("campaign") && label.contains("step")) {
        event.label = EventLabel::attack(label["campaign"].get<int>(), label["step"].get<int>());
    } else {
        throw ParseError("event label must be null, \"benign\", or {campaign, step}");
    }

    const auto& tag = obj["noise_tag"];
    if (tag.is_null()) {
        event.noise_tag.reset();
    } else if (tag.is_string()) {
        event.noise_tag = tag.get<std::string>();
    } else {
        throw ParseError("event noise_tag must be null or a string");
    }
    return event;
}

std::string serialize_stream(const EventStream& stream) {
    std::string out;
    for (const auto& event : stream.events) {
        out += to_canonical_line(event);
        out += '\n';
    }
    return out;
}

}  // namespace lmd
