#include <doctest.h>
#include <json.hpp>

#include "lmdetect/errors.hpp"
#include "lmdetect/model.hpp"
#include "lmdetect/sim.hpp"
#include "support/generators.hpp"

using namespace lmd;

namespace {

const char* kMinimalDoc = R"({
  "hosts": ["H1"],
  "externals": ["NET"],
  "slices": [{"id": 1, "descriptor": "sd-1"}],
  "containers": [{"name": "UPF-A", "nf": "UPF", "host": "H1", "slices": [1]}],
  "users": ["oper"]
})";

}  // namespace

TEST_CASE("minimal document loads with three nodes") {
    Topology topo = load_topology(kMinimalDoc);
    CHECK(topo.hosts.size() == 1);
    CHECK(topo.externals.size() == 1);
    CHECK(topo.containers.size() == 1);
    CHECK(topo.slices.size() == 1);
    CHECK(topo.hosts.size() + topo.externals.size() + topo.containers.size() == 3);
    CHECK(topo.kind_of("H1") == NodeKind::Host);
    CHECK(topo.kind_of("NET") == NodeKind::External);
    CHECK(topo.kind_of("UPF-A") == NodeKind::Container);
    CHECK(topo.container("UPF-A").host == "H1");
    CHECK_FALSE(topo.target_slice.has_value());
}

TEST_CASE("default topology document counts") {
    // Counted from the shipped document: 6 slices, 5 hosts, 19 containers,
    // 1 external node.
    Topology topo = load_topology(serialize_topology(make_default_topology()));
    CHECK(topo.slices.size() == 6);
    CHECK(topo.hosts.size() == 5);
    CHECK(topo.containers.size() == 19);
    CHECK(topo.externals.size() == 1);
    CHECK(topo.container("NRF-12").slices == std::set<int>{1, 2});
    CHECK(topo.container("NRF-56").slices == std::set<int>{5, 6});
    CHECK(topo.container("UPF-5").host == "H-56");
    CHECK(topo.target_slice == 6);
}

TEST_CASE("reference and uniqueness violations are rejected") {
    Topology base = load_topology(kMinimalDoc);

    SUBCASE("unknown host") {
        std::string doc = R"({"hosts":["H1"],"externals":[],"slices":[{"id":1,"descriptor":"s"}],
            "containers":[{"name":"C","nf":"UPF","host":"H9","slices":[1]}],"users":[]})";
        CHECK_THROWS_AS(load_topology(doc), ValidationError);
    }
    SUBCASE("unknown slice") {
        std::string doc = R"({"hosts":["H1"],"externals":[],"slices":[{"id":1,"descriptor":"s"}],
            "containers":[{"name":"C","nf":"UPF","host":"H1","slices":[7]}],"users":[]})";
        CHECK_THROWS_AS(load_topology(doc), ValidationError);
    }
    SUBCASE("empty slice list") {
        std::string doc = R"({"hosts":["H1"],"externals":[],"slices":[{"id":1,"descriptor":"s"}],
            "containers":[{"name":"C","nf":"UPF","host":"H1","slices":[]}],"users":[]})";
        CHECK_THROWS_AS(load_topology(doc), ValidationError);
    }
    SUBCASE("duplicate node name across kinds") {
        std::string doc = R"({"hosts":["H1"],"externals":["H1"],"slices":[],"containers":[],"users":[]})";
        CHECK_THROWS_AS(load_topology(doc), ValidationError);
    }
    SUBCASE("duplicate slice id") {
        std::string doc = R"({"hosts":["H1"],"externals":[],
            "slices":[{"id":1,"descriptor":"a"},{"id":1,"descriptor":"b"}],"containers":[],"users":[]})";
        CHECK_THROWS_AS(load_topology(doc), ValidationError);
    }
    SUBCASE("unknown target slice") {
        std::string doc = R"({"hosts":["H1"],"externals":[],"slices":[{"id":1,"descriptor":"s"}],
            "containers":[],"users":[],"target_slice":9})";
        CHECK_THROWS_AS(load_topology(doc), ValidationError);
    }
    SUBCASE("missing key") {
        CHECK_THROWS_AS(load_topology(R"({"hosts":[]})"), ValidationError);
    }
    SUBCASE("malformed JSON") {
        CHECK_THROWS_AS(load_topology("{nope"), ParseError);
    }
    CHECK(base.hosts.size() == 1);  // base document remains valid
}

TEST_CASE("serialize/load round trip on random topologies") {
    testsupport::Rng rng(20240101);
    for (int i = 0; i < 60; ++i) {
        Topology topo = testsupport::random_topology(rng);
        Topology reloaded = load_topology(serialize_topology(topo));
        CHECK(reloaded == topo);
    }
}

TEST_CASE("randomly corrupted documents are rejected") {
    testsupport::Rng rng(987);
    for (int i = 0; i < 60; ++i) {
        Topology topo = testsupport::random_topology(rng);
        nlohmann::ordered_json doc = nlohmann::ordered_json::parse(serialize_topology(topo));
        switch (i % 5) {
            case 0:  // duplicate a host name
                doc["hosts"].push_back(doc["hosts"][0]);
                break;
            case 1:  // break a container's host reference
                if (doc["containers"].empty()) continue;
                doc["containers"][0]["host"] = "NO-SUCH-HOST";
                break;
            case 2:  // break a slice reference
                if (doc["containers"].empty()) continue;
                doc["containers"][0]["slices"] = {999};
                break;
            case 3:  // drop a required key
                doc.erase("users");
                break;
            case 4:  // empty container slice list
                if (doc["containers"].empty()) continue;
                doc["containers"][0]["slices"] = nlohmann::ordered_json::array();
                break;
        }
        CHECK_THROWS_AS(load_topology(doc.dump()), ValidationError);
    }
}

TEST_CASE("nf type names round trip") {
    for (NfType nf : {NfType::AMF, NfType::SMF, NfType::UPF, NfType::NRF, NfType::AUSF,
                      NfType::NSSF, NfType::UDM, NfType::Other}) {
        CHECK(nf_type_from_string(to_string(nf)) == nf);
    }
    CHECK_THROWS_AS(nf_type_from_string("WAT"), ValidationError);
}
