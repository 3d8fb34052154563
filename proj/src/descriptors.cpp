#include "sensoria/descriptors.hpp"

#include <algorithm>

#include "sensoria/error.hpp"

namespace sensoria {

bool tested_operating_point(int half_width, std::int64_t cutoff) {
    switch (half_width) {
        case 4: {
            static constexpr std::int64_t c[] = {30, 100, 150, 200, 500, 1000, 2000, 3000};
            return std::find(std::begin(c), std::end(c), cutoff) != std::end(c);
        }
        case 10: {
            static constexpr std::int64_t c[] = {300, 400, 500, 1000, 3000};
            return std::find(std::begin(c), std::end(c), cutoff) != std::end(c);
        }
        case 15: {
            static constexpr std::int64_t c[] = {400, 600, 2000, 6000};
            return std::find(std::begin(c), std::end(c), cutoff) != std::end(c);
        }
        case 25: {
            static constexpr std::int64_t c[] = {500, 800, 3000, 8000};
            return std::find(std::begin(c), std::end(c), cutoff) != std::end(c);
        }
        default:
            return false;
    }
}

const DescriptorRow* DescriptorTable::find(const Word& w) const {
    auto it = std::lower_bound(rows.begin(), rows.end(), w,
                               [](const DescriptorRow& r, const Word& key) {
                                   return word_key(r.word) < word_key(key);
                               });
    if (it == rows.end() || !(it->word == w)) return nullptr;
    return &*it;
}

DescriptorTable identify_descriptors(const WindowCounts& counts,
                                     const DescriptorConfig& config) {
    if (config.cutoff < 1) throw ValidationError("descriptor cutoff must be >= 1");
    DescriptorTable table;
    table.cutoff = config.cutoff;
    for (const auto& [word, per_sense] : counts.counts) {
        if (!is_content(word.coarse)) continue;
        DescriptorRow row;
        row.word = word;
        row.counts = per_sense;
        for (Sense s : all_senses()) {
            if (per_sense[sense_index(s)] >= config.cutoff)
                row.passes = static_cast<SenseMask>(row.passes | sense_bit(s));
        }
        if (row.passes) table.rows.push_back(std::move(row));
    }
    std::sort(table.rows.begin(), table.rows.end(),
              [](const DescriptorRow& a, const DescriptorRow& b) {
                  return word_key(a.word) < word_key(b.word);
              });
    return table;
}

std::vector<DescriptorRow> top_k(const DescriptorTable& table, Sense sense, std::size_t k) {
    std::vector<DescriptorRow> ranked;
    for (const DescriptorRow& row : table.rows)
        if (row.passes_sense(sense)) ranked.push_back(row);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [sense](const DescriptorRow& a, const DescriptorRow& b) {
                         auto ca = a.counts[sense_index(sense)];
                         auto cb = b.counts[sense_index(sense)];
                         if (ca != cb) return ca > cb;
                         return word_key(a.word) < word_key(b.word);
                     });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

PosHistogram pos_distribution(const std::vector<DescriptorRow>& ranked) {
    PosHistogram hist{};
    for (const DescriptorRow& row : ranked) {
        auto idx = static_cast<std::size_t>(row.word.coarse);
        if (idx < hist.size()) hist[idx]++;
    }
    return hist;
}

}  // namespace sensoria
