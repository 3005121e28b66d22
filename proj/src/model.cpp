#include "lmdetect/model.hpp"

#include <json.hpp>

#include "lmdetect/errors.hpp"

namespace lmd {

using ordered_json = nlohmann::ordered_json;

std::string to_string(NfType nf) {
    switch (nf) {
        case NfType::AMF: return "AMF";
        case NfType::SMF: return "SMF";
        case NfType::UPF: return "UPF";
        case NfType::NRF: return "NRF";
        case NfType::AUSF: return "AUSF";
        case NfType::NSSF: return "NSSF";
        case NfType::UDM: return "UDM";
        case NfType::Other: return "OTHER";
    }
    return "OTHER";
}

NfType nf_type_from_string(const std::string& text) {
    if (text == "AMF") return NfType::AMF;
    if (text == "SMF") return NfType::SMF;
    if (text == "UPF") return NfType::UPF;
    if (text == "NRF") return NfType::NRF;
    if (text == "AUSF") return NfType::AUSF;
    if (text == "NSSF") return NfType::NSSF;
    if (text == "UDM") return NfType::UDM;
    if (text == "OTHER") return NfType::Other;
    throw ValidationError("unknown NF type '" + text + "'");
}

bool Topology::has_node(const std::string& name) const {
    if (containers.count(name)) return true;
    for (const auto& h : hosts)
        if (h == name) return true;
    for (const auto& e : externals)
        if (e == name) return true;
    return false;
}

NodeKind Topology::kind_of(const std::string& name) const {
    if (containers.count(name)) return NodeKind::Container;
    for (const auto& h : hosts)
        if (h == name) return NodeKind::Host;
    for (const auto& e : externals)
        if (e == name) return NodeKind::External;
    throw ValidationError("unknown node '" + name + "'");
}

const ContainerInfo& Topology::container(const std::string& name) const {
    auto it = containers.find(name);
    if (it == containers.end()) throw ValidationError("unknown container '" + name + "'");
    return it->second;
}

std::set<int> Topology::slices_of(const std::string& name) const {
    auto it = containers.find(name);
    if (it == containers.end()) return {};
    return it->second.slices;
}

namespace {

const ordered_json& require_key(const ordered_json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError(std::string("topology document missing key '") + key + "'");
    return *it;
}

std::vector<std::string> read_name_list(const ordered_json& arr, const char* what) {
    if (!arr.is_array()) throw ValidationError(std::string(what) + " must be an array");
    std::vector<std::string> out;
    for (const auto& v : arr) {
        if (!v.is_string() || v.get<std::string>().empty()) {
            throw ValidationError(std::string(what) + " entries must be non-empty strings");
        }
        out.push_back(v.get<std::string>());
    }
    return out;
}

}  // namespace

Topology load_topology(const std::string& json_text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed topology document: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("topology document must be a JSON object");

    Topology topo;
    topo.hosts = read_name_list(require_key(doc, "hosts"), "hosts");
    topo.externals = read_name_list(require_key(doc, "externals"), "externals");

    const auto& slices = require_key(doc, "slices");
    if (!slices.is_array()) throw ValidationError("slices must be an array");
    for (const auto& s : slices) {
        if (!s.is_object() || !s.contains("id") || !s.contains("descriptor")) {
            throw ValidationError("slice entries must be {id, descriptor} objects");
        }
        if (!s["id"].is_number_integer() || !s["descriptor"].is_string()) {
            throw ValidationError("slice id must be an integer and descriptor a string");
        }
        int id = s["id"].get<int>();
        if (id < 1) throw ValidationError("slice id must be >= 1");
        if (!topo.slices.emplace(id, s["descriptor"].get<std::string>()).second) {
            throw ValidationError("duplicate slice id " + std::to_string(id));
        }
    }

    const auto& containers = require_key(doc, "containers");
    if (!containers.is_array()) throw ValidationError("containers must be an array");
    for (const auto& c : containers) {
        if (!c.is_object() || !c.contains("name") || !c.contains("nf") || !c.contains("host") ||
            !c.contains("slices")) {
            throw ValidationError("container entries must be {name, nf, host, slices} objects");
        }
        std::string name = c["name"].get<std::string>();
        if (name.empty()) throw ValidationError("container name must be non-empty");
        ContainerInfo info;
        info.nf = nf_type_from_string(c["nf"].get<std::string>());
        info.host = c["host"].get<std::string>();
        if (!c["slices"].is_array() || c["slices"].empty()) {
            throw ValidationError("container '" + name + "' must list at least one slice");
        }
        for (const auto& sid : c["slices"]) {
            if (!sid.is_number_integer()) throw ValidationError("container slice ids must be integers");
            int id = sid.get<int>();
            if (!topo.slices.count(id)) {
                throw ValidationError("container '" + name + "' references unknown slice " +
                                      std::to_string(id));
            }
            info.slices.insert(id);
        }
        bool host_known = false;
        for (const auto& h : topo.hosts) host_known |= (h == info.host);
        if (!host_known) {
            throw ValidationError("container '" + name + "' references unknown host '" + info.host + "'");
        }
        if (!topo.containers.emplace(name, std::move(info)).second) {
            throw ValidationError("duplicate container name '" + name + "'");
        }
    }

    topo.users = read_name_list(require_key(doc, "users"), "users");
    {
        std::set<std::string> seen;
        for (const auto& u : topo.users) {
            if (!seen.insert(u).second) throw ValidationError("duplicate user '" + u + "'");
        }
    }

    if (doc.contains("target_slice") && !doc["target_slice"].is_null()) {
        if (!doc["target_slice"].is_number_integer()) {
            throw ValidationError("target_slice must be an integer slice id");
        }
        int id = doc["target_slice"].get<int>();
        if (!topo.slices.count(id)) {
            throw ValidationError("target_slice references unknown slice " + std::to_string(id));
        }
        topo.target_slice = id;
    }

    // Node names must be unique across hosts, externals and containers.
    std::set<std::string> names;
    for (const auto& h : topo.hosts) {
        if (!names.insert(h).second) throw ValidationError("duplicate node name '" + h + "'");
    }
    for (const auto& e : topo.externals) {
        if (!names.insert(e).second) throw ValidationError("duplicate node name '" + e + "'");
    }
    for (const auto& [name, info] : topo.containers) {
        if (!names.insert(name).second) throw ValidationError("duplicate node name '" + name + "'");
    }

    return topo;
}

std::string serialize_topology(const Topology& topo) {
    ordered_json doc;
    doc["hosts"] = topo.hosts;
    doc["externals"] = topo.externals;
    doc["slices"] = ordered_json::array();
    for (const auto& [id, descriptor] : topo.slices) {
        doc["slices"].push_back({{"id", id}, {"descriptor", descriptor}});
    }
    doc["containers"] = ordered_json::array();
    for (const auto& [name, info] : topo.containers) {
        ordered_json c;
        c["name"] = name;
        c["nf"] = to_string(info.nf);
        c["host"] = info.host;
        c["slices"] = info.slices;
        doc["containers"].push_back(std::move(c));
    }
    doc["users"] = topo.users;
    if (topo.target_slice) {
        doc["target_slice"] = *topo.target_slice;
    } else {
        doc["target_slice"] = nullptr;
    }
    return doc.dump(2) + "\n";
}

}  // namespace lmd
