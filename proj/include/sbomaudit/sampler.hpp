#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "sbomaudit/model.hpp"

namespace sbomaudit {

/// Per-year population and draw counts for a stratified sample.
struct SamplePlan {
    double rate = 0.0;
    std::uint64_t seed = 0;
    // year -> (population, sample_size); sample_size == max(1, floor(rate * population))
    std::map<int, std::pair<std::size_t, std::size_t>> per_year_counts;
};

SamplePlan make_sample_plan(const std::vector<ReleaseRecord>& releases, double rate,
                            std::uint64_t seed);

/// Draws a proportional sample from each year's stratum, uniformly without
/// replacement. Each stratum uses an independent generator seeded from
/// (seed, year), so adding a year never perturbs another year's selection.
/// Output is sorted by (year, release id). rate outside (0, 1] is rejected.
std::vector<ReleaseRecord> stratified_sample(const std::vector<ReleaseRecord>& releases,
                                             double rate, std::uint64_t seed);

}  // namespace sbomaudit
