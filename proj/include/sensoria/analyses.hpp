#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sensoria/types.hpp"
#include "sensoria/windows.hpp"

namespace sensoria {

struct AnalysisConfig {
    double radius = 30.0;
    std::size_t top_k = 200;
};

// Descriptors with their score-space coordinates and top-K memberships.
// Rows of `scores` align with `words`; a word may belong to several senses.
struct ScoredPoints {
    std::vector<Word> words;
    std::vector<SenseMask> senses;
    Eigen::MatrixXd scores;  // n x d, Euclidean geometry

    std::size_t size() const { return words.size(); }
};

// All 15 unordered sense pairs in report order: the five same-sense pairs
// alphabetically, then the ten cross pairs alphabetically.
std::vector<std::pair<Sense, Sense>> all_sense_pairs();

struct SensePairStat {
    Sense a;
    Sense b;
    bool same_sense = false;
    std::optional<double> value;  // empty when undefined (too few members)
};

// Mean Euclidean distance per sense pair. Same-sense pairs average over
// unordered distinct pairs within the set; cross pairs over the product of
// the two sets excluding identical points.
std::vector<SensePairStat> avg_pairwise_distance(const ScoredPoints& points);

struct SensePairCount {
    Sense a;
    Sense b;
    bool same_sense = false;
    std::int64_t count = 0;
};

// Counts unordered point pairs within `radius`, tallied once per distinct
// unordered sense-pair label drawn from the two points' membership sets.
std::vector<SensePairCount> radius_pairs(const ScoredPoints& points, double radius);

struct OverlapRow {
    Word word;
    SenseMask senses = 0;  // top-K memberships, always >= 2 bits
    // per-sense window count / per-sense total windows, member senses only
    std::array<std::optional<double>, kSenseCount> normalized{};
};

// Descriptors present in at least two senses' top-K sets with their
// normalized window frequencies. Senses with zero total windows are skipped
// with a warning.
std::vector<OverlapRow> multi_sense_overlap(
    const WindowCounts& counts, const std::array<std::vector<Word>, kSenseCount>& top_k_sets,
    std::vector<std::string>* warnings = nullptr);

}  // namespace sensoria
