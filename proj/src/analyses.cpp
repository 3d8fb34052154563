#include "sensoria/analyses.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>

#include "sensoria/error.hpp"

namespace sensoria {
namespace {

// senses sorted by display name, for stable pair ordering
std::array<Sense, kSenseCount> senses_by_name() {
    std::array<Sense, kSenseCount> order = all_senses();
    std::sort(order.begin(), order.end(), [](Sense x, Sense y) {
        return sense_name(x) < sense_name(y);
    });
    return order;
}

std::size_t pair_slot(const std::vector<std::pair<Sense, Sense>>& pairs, Sense s, Sense t) {
    auto a = s;
    auto b = t;
    if (sense_name(b) < sense_name(a)) std::swap(a, b);
    for (std::size_t i = 0; i < pairs.size(); ++i)
        if (pairs[i].first == a && pairs[i].second == b) return i;
    throw PipelineError("analyze", "sense pair lookup failed");
}

}  // namespace

std::vector<std::pair<Sense, Sense>> all_sense_pairs() {
    auto order = senses_by_name();
    std::vector<std::pair<Sense, Sense>> pairs;
    for (Sense s : order) pairs.emplace_back(s, s);
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j)
            pairs.emplace_back(order[i], order[j]);
    return pairs;
}

std::vector<SensePairStat> avg_pairwise_distance(const ScoredPoints& points) {
    if (points.words.size() != points.senses.size() ||
        static_cast<Eigen::Index>(points.words.size()) != points.scores.rows())
        throw ValidationError("scored points are misaligned");

    const auto pairs = all_sense_pairs();
    std::vector<double> sums(pairs.size(), 0.0);
    std::vector<std::int64_t> counts(pairs.size(), 0);

    const std::size_t n = points.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = (points.scores.row(i) - points.scores.row(j)).norm();
            for (Sense s : all_senses()) {
                if (!mask_has(points.senses[i], s)) continue;
                for (Sense t : all_senses()) {
                    if (!mask_has(points.senses[j], t)) continue;
                    // unordered point pair, ordered sense crossing: for a
                    // cross pair (s,t) this visits each (a in s, b in t)
                    // combination exactly once; same-sense combinations
                    // collapse to the single unordered pair
                    if (s == t) {
                        std::size_t slot = pair_slot(pairs, s, s);
                        sums[slot] += d;
                        counts[slot] += 1;
                    } else {
                        std::size_t slot = pair_slot(pairs, s, t);
                        sums[slot] += d;
                        counts[slot] += 1;
                    }
                }
            }
        }
    }

    std::vector<SensePairStat> stats;
    stats.reserve(pairs.size());
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        SensePairStat st;
        st.a = pairs[p].first;
        st.b = pairs[p].second;
        st.same_sense = st.a == st.b;
        if (counts[p] > 0) st.value = sums[p] / static_cast<double>(counts[p]);
        stats.push_back(st);
    }
    return stats;
}

std::vector<SensePairCount> radius_pairs(const ScoredPoints& points, double radius) {
    if (radius < 0) throw ValidationError("radius must be non-negative");
    const auto pairs = all_sense_pairs();
    std::vector<std::int64_t> counts(pairs.size(), 0);

    const std::size_t n = points.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = (points.scores.row(i) - points.scores.row(j)).norm();
            if (d > radius) continue;
            // one tally per distinct unordered sense-pair label
            std::array<bool, 15> hit{};
            for (Sense s : all_senses()) {
                if (!mask_has(points.senses[i], s)) continue;
                for (Sense t : all_senses()) {
                    if (!mask_has(points.senses[j], t)) continue;
                    hit[pair_slot(pairs, s, t)] = true;
                }
            }
            for (std::size_t p = 0; p < pairs.size(); ++p)
                if (hit[p]) counts[p] += 1;
        }
    }

    std::vector<SensePairCount> out;
    out.reserve(pairs.size());
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        SensePairCount c;
        c.a = pairs[p].first;
        c.b = pairs[p].second;
        c.same_sense = c.a == c.b;
        c.count = counts[p];
        out.push_back(c);
    }
    return out;
}

std::vector<OverlapRow> multi_sense_overlap(
    const WindowCounts& counts, const std::array<std::vector<Word>, kSenseCount>& top_k_sets,
    std::vector<std::string>* warnings) {
    std::unordered_map<Word, SenseMask, WordHash> membership;
    for (Sense s : all_senses())
        for (const Word& w : top_k_sets[sense_index(s)])
            membership[w] = static_cast<SenseMask>(membership[w] | sense_bit(s));

    std::array<bool, kSenseCount> usable{};
    for (Sense s : all_senses()) {
        usable[sense_index(s)] = counts.window_totals[sense_index(s)] > 0;
        if (!usable[sense_index(s)] && warnings)
            warnings->push_back("sense " + std::string(sense_name(s)) +
                                " has no windows; excluded from overlap normalization");
    }

    std::vector<OverlapRow> rows;
    for (const auto& [word, mask] : membership) {
        if (mask_count(mask) < 2) continue;
        OverlapRow row;
        row.word = word;
        row.senses = mask;
        for (Sense s : all_senses()) {
            auto idx = sense_index(s);
            if (!mask_has(mask, s) || !usable[idx]) continue;
            row.normalized[idx] = static_cast<double>(counts.count(word, s)) /
                                  static_cast<double>(counts.window_totals[idx]);
        }
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [](const OverlapRow& x, const OverlapRow& y) {
        return word_key(x.word) < word_key(y.word);
    });
    return rows;
}

}  // namespace sensoria
