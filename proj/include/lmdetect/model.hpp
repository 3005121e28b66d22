#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lmd {

enum class NodeKind { Host, Container, External };

enum class NfType { AMF, SMF, UPF, NRF, AUSF, NSSF, UDM, Other };

std::string to_string(NfType nf);
NfType nf_type_from_string(const std::string& text);

struct ContainerInfo {
    NfType nf = NfType::Other;
    std::string host;
    std::set<int> slices;  // non-empty; shared NFs list several

    friend bool operator==(const ContainerInfo&, const ContainerInfo&) = default;
};

// Static world model: hosts, NF containers with slice memberships, external
// nodes and users. Immutable after load; shared read-only across workers.
struct Topology {
    std::vector<std::string> hosts;
    std::vector<std::string> externals;
    std::map<int, std::string> slices;  // id -> descriptor
    std::map<std::string, ContainerInfo> containers;
    std::vector<std::string> users;
    std::optional<int> target_slice;  // simulator labeling only; the detector never reads it

    bool has_node(const std::string& name) const;
    NodeKind kind_of(const std::string& name) const;  // throws ValidationError for unknown names
    const ContainerInfo& container(const std::string& name) const;

    // Union of slice memberships when `name` is a container, empty otherwise.
    std::set<int> slices_of(const std::string& name) const;

    friend bool operator==(const Topology&, const Topology&) = default;
};

// Parses and validates the JSON topology document. Throws ParseError on
// malformed JSON and ValidationError on broken references, duplicate names,
// or empty required fields.
Topology load_topology(const std::string& json_text);

std::string serialize_topology(const Topology& topo);

}  // namespace lmd
