#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sensoria/types.hpp"
#include "sensoria/windows.hpp"

namespace sensoria {

struct DescriptorConfig {
    std::int64_t cutoff = 30;
    std::size_t top_k = 200;
};

// (half_width, cutoff) pairs with published results; other combinations
// work but are flagged in run metadata.
bool tested_operating_point(int half_width, std::int64_t cutoff);

struct DescriptorRow {
    Word word;
    std::array<std::int64_t, kSenseCount> counts{};
    SenseMask passes = 0;  // bit set per sense with counts[s] >= cutoff

    bool passes_sense(Sense s) const { return mask_has(passes, s); }
};

struct DescriptorTable {
    std::int64_t cutoff = 0;
    std::vector<DescriptorRow> rows;  // sorted by (surface, coarse)

    const DescriptorRow* find(const Word& w) const;
};

// Content words (n, v, a, r) whose window count meets the cutoff for at
// least one sense. Raising the cutoff never adds a row.
DescriptorTable identify_descriptors(const WindowCounts& counts,
                                     const DescriptorConfig& config);

// Rows passing `sense`, descending by that sense's count, ties ascending
// by (surface, coarse), at most k rows.
std::vector<DescriptorRow> top_k(const DescriptorTable& table, Sense sense, std::size_t k);

// histogram over the four content POS classes, indexed by Coarse value
using PosHistogram = std::array<std::size_t, 4>;

PosHistogram pos_distribution(const std::vector<DescriptorRow>& ranked);

}  // namespace sensoria
