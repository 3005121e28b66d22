#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lmdetect/event.hpp"
#include "lmdetect/graph.hpp"
#include "lmdetect/model.hpp"

namespace lmd {

// Deterministic per-day random stream; every draw depends only on
// (seed, day, draw index).
class DayRng {
public:
    DayRng(std::uint64_t seed, int day);

    // Uniform in [0, span); span must be > 0.
    std::int64_t uniform(std::int64_t span);

private:
    std::mt19937_64 engine_;
};

struct Activity {
    int campaign = 0;  // 0 = normal operations
    std::optional<int> sub;

    bool is_normal() const { return campaign == 0; }

    friend bool operator==(const Activity&, const Activity&) = default;
};

struct ScheduleEntry {
    int day = 1;  // 1-based
    Activity activity;

    friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

// "normal", "c1s1", "c1s2", "c2", "c3s1", "c3s2" (general form cN / cNsM).
Activity parse_activity(const std::string& token);
std::string to_string(const Activity& activity);

// Training day 1 followed by the five campaign days.
std::vector<ScheduleEntry> default_schedule();

struct SimConfig {
    Topology topology;
    std::uint64_t seed = 1;
    std::vector<ScheduleEntry> schedule = default_schedule();
    std::int64_t jitter = 300;          // max random offset added to normal-op times
    std::int64_t day0_ts = 1704067200;  // 2024-01-01T00:00:00Z; day 1 starts here
};

// Operator maintenance profile: one remote access to each slice's UPF plus
// one local exec per non-UPF container, all benign, jittered into the
// working-hours window of the day.
std::vector<AccessEvent> generate_normal_day(const Topology& topo, int day, DayRng& rng,
                                             std::int64_t day0_ts, std::int64_t jitter);

// Scripted attack campaign for one day. Campaigns 1 and 3 require sub 1 or
// 2; campaign 2 takes none. Throws ConfigError for undefined combinations.
std::vector<AccessEvent> run_campaign(const Topology& topo, int campaign, std::optional<int> sub,
                                      int day, std::int64_t day0_ts);

struct SimOutput {
    EventStream events;               // labeled, canonically sorted
    std::vector<EdgeIdentity> truth;  // every malicious edge-forming event
};

// Full dataset: per-day normal operations, campaigns with normal background
// plus one benign two-step operator chain on every campaign day.
SimOutput simulate(const SimConfig& config);

Topology make_default_topology();

// Writes day-<n>.jsonl per schedule day plus truth.json and topology.json.
void write_dataset(const SimConfig& config, const SimOutput& output, const std::string& out_dir);

}  // namespace lmd
