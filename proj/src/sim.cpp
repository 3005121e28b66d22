#include "lmdetect/sim.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "lmdetect/errors.hpp"
#include "lmdetect/eval.hpp"
#include "lmdetect/time_util.hpp"

namespace lmd {

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

DayRng::DayRng(std::uint64_t seed, int day)
    : engine_(mix64(seed ^ mix64(static_cast<std::uint64_t>(day)))) {}

std::int64_t DayRng::uniform(std::int64_t span) {
    if (span <= 0) return 0;
    return static_cast<std::int64_t>(engine_() % static_cast<std::uint64_t>(span));
}

Activity parse_activity(const std::string& token) {
    if (token == "normal") return {};
    if (token.size() >= 2 && token[0] == 'c') {
        size_t spos = token.find('s');
        try {
            Activity activity;
            if (spos == std::string::npos) {
                activity.campaign = std::stoi(token.substr(1));
            } else {
                activity.campaign = std::stoi(token.substr(1, spos - 1));
                activity.sub = std::stoi(token.substr(spos + 1));
            }
            if (activity.campaign >= 1 && activity.campaign <= 3) return activity;
        } catch (const std::exception&) {
            // falls through to the ConfigError below
        }
    }
    throw ConfigError("unknown schedule activity '" + token + "' (expected normal, c2, or cNsM)");
}

std::string to_string(const Activity& activity) {
    if (activity.is_normal()) return "normal";
    std::string out = "c" + std::to_string(activity.campaign);
    if (activity.sub) out += "s" + std::to_string(*activity.sub);
    return out;
}

std::vector<ScheduleEntry> default_schedule() {
    return {
        {1, {}},
        {2, {1, 1}},
        {3, {1, 2}},
        {4, {2, std::nullopt}},
        {5, {3, 1}},
        {6, {3, 2}},
    };
}

namespace {

constexpr std::int64_t kNormalStart = 8 * 3600;  // 08:00
constexpr std::int64_t kNormalSpacing = 600;
constexpr std::int64_t kCampaignStart = 10 * 3600;  // 10:00
constexpr std::int64_t kCampaignSpacing = 180;
constexpr std::int64_t kChainLogin = 17 * 3600;  // 17:00
constexpr std::int64_t kChainGap = 300;

std::string operator_user(const Topology& topo) {
    return topo.users.empty() ? std::string("operator") : topo.users.front();
}

std::vector<std::string> sorted_hosts(const Topology& topo) {
    std::vector<std::string> hosts = topo.hosts;
    std::sort(hosts.begin(), hosts.end());
    return hosts;
}

std::vector<std::string> containers_on(const Topology& topo, const std::string& host) {
    std::vector<std::string> out;
    for (const auto& [name, info] : topo.containers) {
        if (info.host == host) out.push_back(name);  // map order = sorted by name
    }
    return out;
}

std::vector<std::string> slice_containers_on(const Topology& topo, const std::string& host,
                                             int slice) {
    std::vector<std::string> out;
    for (const auto& [name, info] : topo.containers) {
        if (info.host == host && info.slices.count(slice)) out.push_back(name);
    }
    return out;
}

bool host_serves_slice(const Topology& topo, const std::string& host, int slice) {
    return !slice_containers_on(topo, host, slice).empty();
}

// First container (by name) with the given NF type, optionally pinned to a
// slice.
std::optional<std::string> find_nf(const Topology& topo, NfType nf, std::optional<int> slice) {
    for (const auto& [name, info] : topo.containers) {
        if (info.nf != nf) continue;
        if (slice && !info.slices.count(*slice)) continue;
        return name;
    }
    return std::nullopt;
}

// NRF that shares a slice with any container on `host`.
std::optional<std::string> nrf_near(const Topology& topo, const std::string& host) {
    std::set<int> host_slices;
    for (const auto& name : containers_on(topo, host)) {
        for (int s : topo.container(name).slices) host_slices.insert(s);
    }
    for (const auto& [name, info] : topo.containers) {
        if (info.nf != NfType::NRF) continue;
        for (int s : info.slices) {
            if (host_slices.count(s)) return name;
        }
    }
    return std::nullopt;
}

}  // namespace

std::vector<AccessEvent> generate_normal_day(const Topology& topo, int day, DayRng& rng,
                                             std::int64_t day0_ts, std::int64_t jitter) {
    const std::int64_t base = day0_ts + static_cast<std::int64_t>(day - 1) * kSecondsPerDay;
    const std::string oper = operator_user(topo);
    std::vector<AccessEvent> events;
    int slot = 0;
    auto next_ts = [&]() {
        std::int64_t ts = base + kNormalStart + slot * kNormalSpacing + rng.uniform(jitter + 1);
        ++slot;
        return ts;
    };

    if (!topo.externals.empty()) {
        const std::string& internet = topo.externals.front();
        for (const auto& [slice_id, descriptor] : topo.slices) {
            auto upf = find_nf(topo, NfType::UPF, slice_id);
            if (!upf) continue;
            AccessEvent e;
            e.ts = next_ts();
            e.kind = EventKind::ContainerAccess;
            e.src = internet;
            e.dst = *upf;
            e.user = oper;
            e.dst_account = oper;
            e.label = EventLabel::benign();
            events.push_back(std::move(e));
        }
    }

    for (const auto& host : topo.hosts) {
        for (const auto& name : containers_on(topo, host)) {
            if (topo.container(name).nf == NfType::UPF) continue;
            AccessEvent e;
            e.ts = next_ts();
            e.kind = EventKind::ContainerAccess;
            e.src = host;
            e.dst = name;
            e.user = oper;
            e.dst_account = "root";
            e.label = EventLabel::benign();
            events.push_back(std::move(e));
        }
    }
    return events;
}

namespace {

// Emits campaign events on a fixed cadence with sequential step labels.
struct CampaignEmitter {
    int campaign;
    std::string user;
    std::int64_t cursor;
    int step = 0;
    std::vector<AccessEvent> events;

    std::int64_t tick() {
        std::int64_t ts = cursor;
        cursor += kCampaignSpacing;
        return ts;
    }

    void next_step() { ++step; }

    void edge(EventKind kind, const std::string& src, const std::string& dst) {
        AccessEvent e;
        e.ts = tick();
        e.kind = kind;
        e.src = src;
        e.dst = dst;
        e.user = user;
        e.dst_account = "root";
        e.label = EventLabel::attack(campaign, step);
        events.push_back(std::move(e));
    }

    void noise(const std::string& tag, const std::string& src, const std::string& dst) {
        AccessEvent e;
        e.ts = tick();
        e.kind = EventKind::Noise;
        e.src = src;
        e.dst = dst;
        e.user = user;
        e.dst_account = "root";
        e.label = EventLabel::attack(campaign, step);
        e.noise_tag = tag;
        events.push_back(std::move(e));
    }
};

struct CampaignContext {
    const Topology& topo;
    CampaignEmitter em;
    std::string internet;

    // Entry: remote access to the entry NF, reverse shell, container scan.
    // Returns the entry container's host.
    std::string breach(const std::string& entry_nf) {
        const std::string host = topo.container(entry_nf).host;
        em.next_step();
        em.edge(EventKind::ContainerAccess, internet, entry_nf);
        em.next_step();
        em.noise("reverse-shell", entry_nf, internet);
        em.next_step();
        em.noise("scan", entry_nf, host);
        if (auto nrf = nrf_near(topo, host)) em.noise("nrf-query", entry_nf, *nrf);
        em.next_step();
        em.edge(EventKind::ContainerEscape, entry_nf, host);
        return host;
    }

    // Hop from `from` into `host` and exec the given containers there.
    void pivot(const std::string& from, const std::string& host,
               const std::vector<std::string>& targets) {
        em.next_step();
        em.noise("scan", from, host);
        em.next_step();
        em.edge(EventKind::HostLogin, from, host);
        em.next_step();
        for (const auto& name : targets) em.edge(EventKind::ContainerAccess, host, name);
        em.next_step();
        if (auto nrf = nrf_near(topo, host)) em.noise("nrf-query", host, *nrf);
    }

    // Implant script plus traffic redirection noise from the slice's UPF.
    void finish(int target_slice, const std::string& fallback_src) {
        auto upf = find_nf(topo, NfType::UPF, target_slice);
        const std::string src = upf ? *upf : fallback_src;
        em.next_step();
        em.noise("reverse-shell", src, internet);
        em.next_step();
        em.noise("traffic-redirect", src, internet);
    }
};

std::vector<AccessEvent> campaign_host_pivot(const Topology& topo, int campaign, int sub,
                                             const std::string& entry_nf, std::int64_t start_ts) {
    // Campaigns 1 and 3 share the skeleton: breach the entry NF, escape,
    // then pivot host to host. Sub #1 goes straight to the slice-3 host;
    // sub #2 walks hosts until the target slice is reached (slice 6 for
    // campaign 1, slice 4 staging for campaign 3).
    CampaignContext ctx{topo,
                        {campaign, "apt-c" + std::to_string(campaign), start_ts, 0, {}},
                        topo.externals.empty() ? std::string("internet") : topo.externals.front()};
    const std::string entry_host = ctx.breach(entry_nf);

    if (sub == 1) {
        const int target_slice = 3;
        for (const auto& host : sorted_hosts(topo)) {
            if (host == entry_host || !host_serves_slice(topo, host, target_slice)) continue;
            ctx.pivot(entry_host, host, slice_containers_on(topo, host, target_slice));
            break;
        }
        ctx.finish(target_slice, entry_host);
    } else {
        const int stop_slice = campaign == 3 ? 4 : 6;
        std::string current = entry_host;
        std::string staging;
        for (const auto& host : sorted_hosts(topo)) {
            if (host == entry_host) continue;
            ctx.pivot(current, host, containers_on(topo, host));
            current = host;
            if (host_serves_slice(topo, host, stop_slice)) {
                staging = host;
                break;
            }
        }
        if (campaign == 3 && !staging.empty()) {
            // Remote container-API stage: from the staging host, access the
            // target slice's containers on their own host.
            const int target_slice = 6;
            ctx.em.next_step();
            if (auto nrf = find_nf(topo, NfType::NRF, target_slice)) {
                ctx.em.noise("nrf-query", staging, *nrf);
            }
            ctx.em.next_step();
            for (const auto& [name, info] : topo.containers) {
                if (info.slices.count(target_slice)) {
                    ctx.em.edge(EventKind::ContainerAccess, staging, name);
                }
            }
        }
        ctx.finish(6, current);
    }
    return std::move(ctx.em.events);
}

std::vector<AccessEvent> campaign_vlan_pivot(const Topology& topo, const std::string& entry_nf,
                                             std::int64_t start_ts) {
    // Campaign 2: entry UPF's host carries both VLANs; pivot to the target
    // slice's containers without leaving the host.
    CampaignContext ctx{topo,
                        {2, "apt-c2", start_ts, 0, {}},
                        topo.externals.empty() ? std::string("internet") : topo.externals.front()};
    const std::string host = ctx.breach(entry_nf);
    const int target_slice = 6;

    ctx.em.next_step();
    ctx.em.noise("scan", host, host);  // VLAN listing
    ctx.em.next_step();
    for (const auto& name : slice_containers_on(topo, host, target_slice)) {
        ctx.em.edge(EventKind::ContainerAccess, host, name);
    }
    ctx.finish(target_slice, host);
    return std::move(ctx.em.events);
}

}  // namespace

std::vector<AccessEvent> run_campaign(const Topology& topo, int campaign, std::optional<int> sub,
                                      int day, std::int64_t day0_ts) {
    const std::int64_t start_ts =
        day0_ts + static_cast<std::int64_t>(day - 1) * kSecondsPerDay + kCampaignStart;

    if (campaign == 2) {
        if (sub) throw ConfigError("campaign 2 takes no sub-scenario");
        auto entry = find_nf(topo, NfType::UPF, 5);
        if (!entry) throw ConfigError("campaign 2 requires a UPF in slice 5");
        return campaign_vlan_pivot(topo, *entry, start_ts);
    }
    if (campaign == 1 || campaign == 3) {
        if (!sub || (*sub != 1 && *sub != 2)) {
            throw ConfigError("campaign " + std::to_string(campaign) + " requires sub-scenario 1 or 2");
        }
        std::optional<std::string> entry =
            campaign == 1 ? find_nf(topo, NfType::AMF, std::nullopt) : find_nf(topo, NfType::UPF, 1);
        if (!entry) {
            throw ConfigError("campaign " + std::to_string(campaign) +
                              " entry NF not present in topology");
        }
        return campaign_host_pivot(topo, campaign, *sub, *entry, start_ts);
    }
    throw ConfigError("undefined campaign " + std::to_string(campaign));
}

namespace {

// One benign operator chain (host login followed by a maintenance exec) per
// test day; exercises the false-positive pathway.
std::vector<AccessEvent> benign_two_step_chain(const Topology& topo, int day,
                                               std::int64_t day0_ts) {
    std::vector<AccessEvent> events;
    if (topo.externals.empty()) return events;
    for (const auto& host : topo.hosts) {
        auto containers = containers_on(topo, host);
        if (containers.empty()) continue;
        const std::int64_t base = day0_ts + static_cast<std::int64_t>(day - 1) * kSecondsPerDay;
        const std::string oper = operator_user(topo);

        AccessEvent login;
        login.ts = base + kChainLogin;
        login.kind = EventKind::HostLogin;
        login.src = topo.externals.front();
        login.dst = host;
        login.user = oper;
        login.dst_account = oper;
        login.label = EventLabel::benign();
        events.push_back(std::move(login));

        AccessEvent exec;
        exec.ts = base + kChainLogin + kChainGap;
        exec.kind = EventKind::ContainerAccess;
        exec.src = host;
        exec.dst = containers.front();
        exec.user = oper;
        exec.dst_account = "root";
        exec.label = EventLabel::benign();
        events.push_back(std::move(exec));
        break;
    }
    return events;
}

}  // namespace

SimOutput simulate(const SimConfig& config) {
    int prev_day = 0;
    for (const auto& entry : config.schedule) {
        if (entry.day <= prev_day) {
            throw ConfigError("schedule day indices must be strictly increasing");
        }
        prev_day = entry.day;
        if (!entry.activity.is_normal()) {
            if (entry.activity.campaign < 1 || entry.activity.campaign > 3) {
                throw ConfigError("schedule references undefined campaign " +
                                  std::to_string(entry.activity.campaign));
            }
        }
    }

    SimOutput output;
    for (const auto& entry : config.schedule) {
        DayRng rng(config.seed, entry.day);
        auto normal = generate_normal_day(config.topology, entry.day, rng, config.day0_ts,
                                          config.jitter);
        output.events.events.insert(output.events.events.end(), normal.begin(), normal.end());
        if (!entry.activity.is_normal()) {
            auto chain = benign_two_step_chain(config.topology, entry.day, config.day0_ts);
            output.events.events.insert(output.events.events.end(), chain.begin(), chain.end());
            auto attack = run_campaign(config.topology, entry.activity.campaign,
                                       entry.activity.sub, entry.day, config.day0_ts);
            output.events.events.insert(output.events.events.end(), attack.begin(), attack.end());
        }
    }
    sort_events_canonical(output.events.events);

    for (const auto& event : output.events.events) {
        if (event.label && event.label->malicious && event.kind != EventKind::Noise &&
            event.success) {
            output.truth.push_back({event.ts, event.src, event.dst, event.user});
        }
    }
    return output;
}

Topology make_default_topology() {
    Topology topo;
    topo.hosts = {"H-CP", "H-12", "H-3", "H-4", "H-56"};
    topo.externals = {"INTERNET"};
    for (int i = 1; i <= 6; ++i) {
        topo.slices[i] = "sd-00000" + std::to_string(i);
    }
    auto add = [&](const std::string& name, NfType nf, const std::string& host,
                   std::set<int> slices) {
        topo.containers[name] = ContainerInfo{nf, host, std::move(slices)};
    };
    // Control-plane host; the NRF is shared between slices 1 and 2.
    add("AMF", NfType::AMF, "H-CP", {1, 2});
    add("AUSF", NfType::AUSF, "H-CP", {1, 2});
    add("NSSF", NfType::NSSF, "H-CP", {1, 2});
    add("NRF-12", NfType::NRF, "H-CP", {1, 2});
    // Slices 1 and 2 share a host.
    add("SMF-1", NfType::SMF, "H-12", {1});
    add("UPF-1", NfType::UPF, "H-12", {1});
    add("SMF-2", NfType::SMF, "H-12", {2});
    add("UPF-2", NfType::UPF, "H-12", {2});
    // Dedicated hosts for slices 3 and 4.
    add("NRF-3", NfType::NRF, "H-3", {3});
    add("SMF-3", NfType::SMF, "H-3", {3});
    add("UPF-3", NfType::UPF, "H-3", {3});
    add("NRF-4", NfType::NRF, "H-4", {4});
    add("SMF-4", NfType::SMF, "H-4", {4});
    add("UPF-4", NfType::UPF, "H-4", {4});
    // Dual-VLAN host carrying slices 5 and 6; NRF shared.
    add("SMF-5", NfType::SMF, "H-56", {5});
    add("UPF-5", NfType::UPF, "H-56", {5});
    add("NRF-56", NfType::NRF, "H-56", {5, 6});
    add("SMF-6", NfType::SMF, "H-56", {6});
    add("UPF-6", NfType::UPF, "H-56", {6});
    topo.users = {"mno"};
    topo.target_slice = 6;
    return topo;
}

void write_dataset(const SimConfig& config, const SimOutput& output, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    for (const auto& entry : config.schedule) {
        const std::int64_t lo = config.day0_ts + static_cast<std::int64_t>(entry.day - 1) * kSecondsPerDay;
        const std::int64_t hi = lo + kSecondsPerDay;
        std::ofstream out(fs::path(out_dir) / ("day-" + std::to_string(entry.day) + ".jsonl"));
        if (!out) throw ConfigError("cannot write day file under '" + out_dir + "'");
        for (const auto& event : output.events.events) {
            if (event.ts >= lo && event.ts < hi) out << to_canonical_line(event) << '\n';
        }
    }
    {
        std::ofstream out(fs::path(out_dir) / "truth.json");
        if (!out) throw ConfigError("cannot write truth.json under '" + out_dir + "'");
        out << serialize_truth(output.truth);
    }
    {
        std::ofstream out(fs::path(out_dir) / "topology.json");
        if (!out) throw ConfigError("cannot write topology.json under '" + out_dir + "'");
        out << serialize_topology(config.topology);
    }
}

}  // namespace lmd
