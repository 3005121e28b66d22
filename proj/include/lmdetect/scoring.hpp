#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lmdetect/event.hpp"
#include "lmdetect/model.hpp"
#include "lmdetect/paths.hpp"

namespace lmd {

enum class DetectorVariant { Full, FirstTwo, FirstThree };

std::string to_string(DetectorVariant variant);
DetectorVariant variant_from_string(const std::string& text);  // throws ConfigError

// Per-(src, dst) count of distinct UTC training days with at least one
// successful access; probabilities are seen/days.
struct EdgeProbTable {
    int training_days = 0;
    std::map<std::pair<std::string, std::string>, int> seen_days;

    double prob(const std::string& src, const std::string& dst) const;
};

// Day counting runs over the deduplicated access graph; the day span comes
// from the raw stream's [min_ts, max_ts]. Throws ValidationError on an empty
// stream.
EdgeProbTable learn_edge_probs(const EventStream& training, std::int64_t dedup_window);

std::string serialize_table(const EdgeProbTable& table);
EdgeProbTable parse_table(const std::string& json_text);

struct SubScores {
    double s1 = 1.0;  // host-host rarity: reciprocal of the non-zero minimum edge probability
    double s2 = 1.0;  // host-container rarity, same form
    double s3 = 1.0;  // slice spread: slices touched + 1
    double s4 = 1.0;  // hop count
};

struct ScoredPath {
    Path path;
    SubScores sub;
    double first_two = 1.0;
    double first_three = 1.0;
    double full = 1.0;

    double score(DetectorVariant variant) const;
};

ScoredPath score_path(const Path& path, const EdgeProbTable& table, const Topology& topo);

std::vector<ScoredPath> score_paths(const std::vector<Path>& paths, const EdgeProbTable& table,
                                    const Topology& topo);

}  // namespace lmd
